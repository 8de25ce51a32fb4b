#include "mfp/kolmogorov.hpp"

#include <cmath>

#include "mfp/dopri5.hpp"

namespace mfp {

DistributionPath solve_kolmogorov(const ModelParams& params, const Grid2D& lambdas,
                                  const InitialDistribution& M) {
    params.validate();
    M.validate();
    const int n = params.n_steps;
    const int K = params.K;
    const double dt = params.dt();
    if (M.M.size() != static_cast<std::size_t>(K) + 1)
        throw std::invalid_argument("initial_distribution: expected K+1 entries");
    if (lambdas.rows() != static_cast<std::size_t>(K) ||
        lambdas.cols() != static_cast<std::size_t>(n) + 1)
        throw std::invalid_argument("lambdas: expected a K x (n_steps+1) grid");
    for (std::size_t idx = 0; idx < lambdas.rows() * lambdas.cols(); ++idx) {
        const double v = lambdas.data()[idx];
        if (!std::isfinite(v)) throw SolverError("lambdas: grid contains a non-finite value");
        if (v < 0.0) throw std::invalid_argument("lambdas: intensities must be >= 0");
    }

    // Mass flows one level down at the (time-interpolated) sale intensity of
    // the occupied level. The system is linear and conserves total mass
    // exactly at the continuous level; the Runge-Kutta steps preserve that
    // linear invariant, so any drift seen below is pure roundoff.
    std::vector<double> lam(static_cast<std::size_t>(K) + 1, 0.0);
    auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
        double s = t / dt;
        if (s < 0.0) s = 0.0;
        std::size_t j = static_cast<std::size_t>(s);
        const std::size_t last = static_cast<std::size_t>(n) - 1;
        if (j > last) j = last;
        const double u = s - static_cast<double>(j);
        for (int k = 1; k <= K; ++k) {
            const std::size_t row = static_cast<std::size_t>(k - 1);
            lam[static_cast<std::size_t>(k)] =
                lambdas(row, j) + u * (lambdas(row, j + 1) - lambdas(row, j));
        }
        dy[0] = lam[1] * y[1];
        for (int k = 1; k < K; ++k)
            dy[static_cast<std::size_t>(k)] =
                lam[static_cast<std::size_t>(k) + 1] * y[static_cast<std::size_t>(k) + 1] -
                lam[static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(k)];
        dy[static_cast<std::size_t>(K)] =
            -lam[static_cast<std::size_t>(K)] * y[static_cast<std::size_t>(K)];
    };

    DistributionPath out;
    out.values = Grid2D(static_cast<std::size_t>(K) + 1, static_cast<std::size_t>(n) + 1);
    std::vector<double> y = M.M;
    for (int k = 0; k <= K; ++k)
        out.values(static_cast<std::size_t>(k), 0) = y[static_cast<std::size_t>(k)];

    detail::Dopri5 stepper(static_cast<std::size_t>(K) + 1);
    for (int j = 0; j < n; ++j) {
        stepper.advance(rhs, static_cast<double>(j) * dt, static_cast<double>(j + 1) * dt, y);
        const std::size_t col = static_cast<std::size_t>(j) + 1;
        double sum = 0.0;
        for (double v : y) sum += v;
        if (std::abs(sum - 1.0) > 1e-9) {
            double clipped = 0.0;
            for (double& v : y) {
                if (v < 0.0) v = 0.0;
                clipped += v;
            }
            for (double& v : y) v /= clipped;
        }
        for (int k = 0; k <= K; ++k)
            out.values(static_cast<std::size_t>(k), col) = y[static_cast<std::size_t>(k)];
    }
    return out;
}

}  // namespace mfp
