#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfp {

/// Thrown when an ODE integration cannot proceed (step-size underflow,
/// non-finite right-hand side, step budget exhausted).
class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Thrown by mean-price computations when the active mass is below the
/// eta floor and the weighted average is undefined.
class DegenerateMarketError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Thrown by the stability experiment when one of its runs fails to
/// converge; carries the seed of the offending run.
class NonConvergenceError : public std::runtime_error {
  public:
    NonConvergenceError(std::uint64_t seed, int iterations, double last_error)
        : std::runtime_error("equilibrium run with seed " + std::to_string(seed) +
                             " did not converge after " + std::to_string(iterations) +
                             " iterations (last error " + std::to_string(last_error) + ")"),
          seed(seed), iterations(iterations), last_error(last_error) {}

    std::uint64_t seed;
    int iterations;
    double last_error;
};

/// Market and discretization parameters.
///
/// K        maximum inventory level (states 0..K)
/// T        horizon in days
/// r        discount rate per day
/// epsilon  competition strength; 0 recovers independent monopolists
/// n_steps  number of uniform time steps (grid spacing T/n_steps)
/// tol      fixed-point termination threshold on the iterate distance
/// max_iters iteration cap for the fixed-point loop
struct ModelParams {
    int K = 100;
    double T = 200.0;
    double r = 0.04;
    double epsilon = 0.4;
    int n_steps = 1000;
    double tol = 1e-6;
    int max_iters = 100;

    double dt() const { return T / n_steps; }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Uniform partition of [0, T] into n_steps intervals.
struct TimeGrid {
    std::vector<double> points;

    static TimeGrid uniform(double T, int n_steps);

    std::size_t size() const { return points.size(); }
    double dt() const { return points.size() > 1 ? points[1] - points[0] : 0.0; }
    double front() const { return points.front(); }
    double back() const { return points.back(); }
};

/// Initial inventory distribution M_k = mass at level k, k = 0..K.
struct InitialDistribution {
    std::vector<double> M;

    /// Entries must lie in [0,1] and sum to 1 within 1e-12.
    void validate() const;
};

/// Dense row-major (state, time) grid of reals.
class Grid2D {
  public:
    Grid2D() = default;
    Grid2D(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }
    double operator()(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool same_shape(const Grid2D& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Population inventory distribution m_k(t_i) on the time grid.
/// Rows are states k = 0..K, columns are grid nodes.
struct DistributionPath {
    Grid2D values;

    double m(int k, std::size_t i) const { return values(static_cast<std::size_t>(k), i); }

    /// Active fraction at node i: sum of rows k >= 1.
    double eta(std::size_t i) const {
        double s = 0.0;
        for (std::size_t k = 1; k < values.rows(); ++k) s += values(k, i);
        return s;
    }

    /// Column k = 0..K at node i, as a vector.
    std::vector<double> column(std::size_t i) const {
        std::vector<double> col(values.rows());
        for (std::size_t k = 0; k < values.rows(); ++k) col[k] = values(k, i);
        return col;
    }
};

/// Value functions V_k(t_i) for k = 1..K (V_0 is identically zero and not
/// stored); row k-1 holds V_k.
struct ValuePath {
    Grid2D values;

    double v(int k, std::size_t i) const {
        return values(static_cast<std::size_t>(k - 1), i);
    }

    /// Marginal value of one unit of inventory, V_k - V_{k-1}.
    double delta(int k, std::size_t i) const {
        return k >= 2 ? values(static_cast<std::size_t>(k - 1), i) -
                            values(static_cast<std::size_t>(k - 2), i)
                      : values(0, i);
    }
};

/// Mean market price path on the grid.
struct MeanPricePath {
    std::vector<double> values;
};

/// Optimal prices p*_k(t_i) and realized intensities lambda*_k(t_i),
/// rows k = 1..K (row k-1 holds state k).
struct PolicyPath {
    Grid2D prices;
    Grid2D intensities;

    double price(int k, std::size_t i) const { return prices(static_cast<std::size_t>(k - 1), i); }
    double intensity(int k, std::size_t i) const {
        return intensities(static_cast<std::size_t>(k - 1), i);
    }
};

}  // namespace mfp
