#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <vector>

#include "mfp/types.hpp"

namespace mfp::detail {

struct Dopri5Options {
    double rtol = 1e-8;
    double atol = 1e-10;
    int max_steps = 1000000;  // per advance() call
};

/// Dormand-Prince 5(4) embedded Runge-Kutta pair with standard proportional
/// step-size control. advance() integrates dy/dt = f(t, y) across one
/// interval and always places the final step exactly on the right endpoint,
/// so callers can march segment by segment and sample at segment ends.
/// The accepted step size is carried across calls; call reset() to forget it.
class Dopri5 {
  public:
    explicit Dopri5(std::size_t dim, Dopri5Options opt = {})
        : opt_(opt), dim_(dim), k_(7, std::vector<double>(dim)), y_tmp_(dim), y_new_(dim),
          y_err_(dim) {}

    void reset() { h_prev_ = 0.0; }

    template <class Rhs>
    void advance(Rhs&& f, double t0, double t1, std::vector<double>& y) {
        if (t1 <= t0) {
            if (t1 == t0) return;
            throw SolverError("dopri5: backward interval");
        }
        double t = t0;
        double h = h_prev_ > 0.0 ? h_prev_ : (t1 - t0);
        const double h_min = 1e-14 * std::max({std::abs(t0), std::abs(t1), 1.0});
        int steps = 0;

        while (t < t1) {
            if (++steps > opt_.max_steps) throw SolverError("dopri5: step budget exhausted");
            bool clipped = false;
            if (h >= t1 - t) {
                h = t1 - t;
                clipped = true;
            }
            if (h < h_min) throw SolverError("dopri5: step size underflow");

            const double err = try_step(f, t, h, y);

            if (err <= 1.0) {
                y.swap(y_new_);
                t = clipped ? t1 : t + h;
                h *= factor(err);
            } else {
                h *= std::min(factor(err), 1.0);
            }
        }
        h_prev_ = h;
    }

  private:
    static double factor(double err) {
        // PI-free proportional controller with the usual safety margin.
        double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        if (fac < 0.2) fac = 0.2;
        if (fac > 5.0) fac = 5.0;
        return fac;
    }

    // One trial step of size h from (t, y); fills y_new_ and returns the
    // scaled error norm (infinity when the right-hand side is non-finite).
    template <class Rhs>
    double try_step(Rhs&& f, double t, double h, const std::vector<double>& y) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        // Difference between the 5th and the embedded 4th order weights.
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        f(t, y, k_[0]);
        stage(y, h, {{a21, 0}}, 1);
        f(t + c2 * h, y_tmp_, k_[1]);
        stage(y, h, {{a31, 0}, {a32, 1}}, 2);
        f(t + c3 * h, y_tmp_, k_[2]);
        stage(y, h, {{a41, 0}, {a42, 1}, {a43, 2}}, 3);
        f(t + c4 * h, y_tmp_, k_[3]);
        stage(y, h, {{a51, 0}, {a52, 1}, {a53, 2}, {a54, 3}}, 4);
        f(t + c5 * h, y_tmp_, k_[4]);
        stage(y, h, {{a61, 0}, {a62, 1}, {a63, 2}, {a64, 3}, {a65, 4}}, 5);
        f(t + h, y_tmp_, k_[5]);

        for (std::size_t i = 0; i < dim_; ++i) {
            y_new_[i] = y[i] + h * (b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] +
                                    b5 * k_[4][i] + b6 * k_[5][i]);
        }
        f(t + h, y_new_, k_[6]);

        double sum = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < dim_; ++i) {
            y_err_[i] = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] +
                             e6 * k_[5][i] + e7 * k_[6][i]);
            const double sc =
                opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y_new_[i]));
            const double q = y_err_[i] / sc;
            sum += q * q;
            finite = finite && std::isfinite(y_new_[i]) && std::isfinite(y_err_[i]);
        }
        if (!finite) return std::numeric_limits<double>::infinity();
        return std::sqrt(sum / static_cast<double>(dim_));
    }

    struct Coef {
        double a;
        int j;
    };

    void stage(const std::vector<double>& y, double h, std::initializer_list<Coef> coefs,
               int /*stage_index*/) {
        for (std::size_t i = 0; i < dim_; ++i) {
            double acc = 0.0;
            for (const Coef& c : coefs) acc += c.a * k_[static_cast<std::size_t>(c.j)][i];
            y_tmp_[i] = y[i] + h * acc;
        }
    }

    Dopri5Options opt_;
    std::size_t dim_;
    double h_prev_ = 0.0;
    std::vector<std::vector<double>> k_;
    std::vector<double> y_tmp_, y_new_, y_err_;
};

/// Piecewise linear evaluation of nodal values on a uniform grid with
/// spacing dt; t is clamped to the grid range.
inline double lerp_uniform(const std::vector<double>& nodes, double t, double dt) {
    const std::size_t n = nodes.size() - 1;
    double s = t / dt;
    if (s <= 0.0) return nodes.front();
    std::size_t j = static_cast<std::size_t>(s);
    if (j >= n) return nodes.back();
    const double u = s - static_cast<double>(j);
    return nodes[j] + u * (nodes[j + 1] - nodes[j]);
}

}  // namespace mfp::detail
