#include "mfp/monopoly.hpp"

#include <algorithm>
#include <cmath>

#include "mfp/dopri5.hpp"

namespace mfp {

namespace {

// Internally refined grid spacing target for the per-level solves. Levels
// hand their values to the next level through cubic Hermite interpolation;
// 0.05 keeps the interpolation error per level near 1e-9 so that the
// accumulated error across ~100 levels stays well below 1e-6.
constexpr double kMaxInternalSpacing = 0.05;

// Cubic Hermite evaluation on a uniform grid of (value, derivative) pairs.
struct HermiteTable {
    double h = 0.0;
    std::vector<double> y;
    std::vector<double> d;

    double eval(double x) const {
        const std::size_t n = y.size() - 1;
        double s = x / h;
        if (s < 0.0) s = 0.0;
        std::size_t j = static_cast<std::size_t>(s);
        if (j >= n) j = n - 1;
        const double u = s - static_cast<double>(j);
        const double u2 = u * u, u3 = u2 * u;
        const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        const double h10 = u3 - 2.0 * u2 + u;
        const double h01 = -2.0 * u3 + 3.0 * u2;
        const double h11 = u3 - u2;
        return h00 * y[j] + h10 * h * d[j] + h01 * y[j + 1] + h11 * h * d[j + 1];
    }
};

}  // namespace

MonopolyConstants monopoly_constants(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r: must be > 0");
    const double theta = std::sqrt(r * r + r);
    return {theta - r, theta, 1.0 + 2.0 * r - 2.0 * theta, 1.0 + 2.0 * r + 2.0 * theta};
}

double delta_v1_closed_form(double t, const ModelParams& params) {
    if (!(t >= 0.0 && t <= params.T))
        throw std::invalid_argument("t: outside the horizon [0, T]");
    const MonopolyConstants mc = monopoly_constants(params.r);
    const double E = std::exp(-mc.theta * (params.T - t));
    return mc.A1 * (1.0 - E) / (1.0 - (mc.A1 / mc.B1) * E);
}

ValuePath solve_monopoly_value(const ModelParams& params) {
    params.validate();
    const int n = params.n_steps;
    const int K = params.K;
    const double dt = params.dt();

    const int refine = std::max(1, static_cast<int>(std::ceil(dt / kMaxInternalSpacing - 1e-12)));
    const double h_int = dt / refine;
    const std::size_t n_int = static_cast<std::size_t>(n) * refine;

    // Everything below runs in reversed time tau = T - t, where each level
    // satisfies  dY/dtau = -r Y + (1 - Y)^2 / 4 - source(tau),
    // the source being (1 - Y_prev)^2 / 4 of the previous level (zero for
    // the first level: a single-unit firm has no deeper inventory).
    HermiteTable prev, cur;
    prev.h = cur.h = h_int;
    prev.y.assign(n_int + 1, 0.0);
    prev.d.assign(n_int + 1, 0.0);
    cur.y.resize(n_int + 1);
    cur.d.resize(n_int + 1);

    ValuePath V;
    V.values = Grid2D(static_cast<std::size_t>(K), static_cast<std::size_t>(n) + 1);

    detail::Dopri5Options opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-13;
    detail::Dopri5 stepper(1, opt);

    std::vector<double> y(1);
    const double r = params.r;

    for (int k = 1; k <= K; ++k) {
        const bool base_level = (k == 1);
        auto rhs = [&](double tau, const std::vector<double>& yy, std::vector<double>& dy) {
            const double q = 1.0 - yy[0];
            double src = 0.0;
            if (!base_level) {
                const double qp = 1.0 - prev.eval(tau);
                src = 0.25 * qp * qp;
            }
            dy[0] = -r * yy[0] + 0.25 * q * q - src;
        };

        y[0] = 0.0;
        cur.y[0] = 0.0;
        {
            std::vector<double> d0(1);
            rhs(0.0, y, d0);
            cur.d[0] = d0[0];
        }
        stepper.reset();
        std::vector<double> dj(1);
        for (std::size_t j = 0; j < n_int; ++j) {
            const double tau0 = static_cast<double>(j) * h_int;
            const double tau1 = static_cast<double>(j + 1) * h_int;
            stepper.advance(rhs, tau0, tau1, y);
            cur.y[j + 1] = y[0];
            rhs(tau1, y, dj);
            cur.d[j + 1] = dj[0];
        }

        // Sample the level back onto the model grid (internal node
        // (n - i) * refine sits exactly at t_i) and accumulate V.
        for (int i = 0; i <= n; ++i) {
            const double dv = cur.y[static_cast<std::size_t>(n - i) * refine];
            const double below = k >= 2 ? V.values(static_cast<std::size_t>(k - 2),
                                                   static_cast<std::size_t>(i))
                                        : 0.0;
            V.values(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(i)) = below + dv;
        }
        std::swap(prev.y, cur.y);
        std::swap(prev.d, cur.d);
    }
    return V;
}

DistributionPath solve_monopoly_distribution(const ModelParams& params,
                                             const InitialDistribution& M,
                                             const Grid2D& lambdas) {
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

    DistributionPath out;
    out.values = Grid2D(static_cast<std::size_t>(K) + 1, static_cast<std::size_t>(n) + 1);
    Grid2D& D = out.values;

    auto lam = [&](int k, int i) {
        return lambdas(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(i));
    };

    // Top level drains with no inflow; each lower level gains the outflow of
    // the level above. The variation-of-constants solution is applied one
    // grid interval at a time,
    //   m_k(t_{i+1}) = e^{-I} m_k(t_i)
    //                + int_{t_i}^{t_{i+1}} lambda_{k+1} m_{k+1} e^{-int_s lambda_k} ds,
    // I = int lambda_k over the interval, with trapezoidal quadrature for
    // both integrals. Keeping the integrating factor local to the interval
    // avoids the overflowing e^{+int_0^t lambda} of the textbook global form.
    D(static_cast<std::size_t>(K), 0) = M.M[static_cast<std::size_t>(K)];
    for (int i = 0; i < n; ++i) {
        const double I = 0.5 * dt * (lam(K, i) + lam(K, i + 1));
        D(static_cast<std::size_t>(K), static_cast<std::size_t>(i) + 1) =
            D(static_cast<std::size_t>(K), static_cast<std::size_t>(i)) * std::exp(-I);
    }
    for (int k = K - 1; k >= 1; --k) {
        const std::size_t row = static_cast<std::size_t>(k);
        D(row, 0) = M.M[row];
        for (int i = 0; i < n; ++i) {
            const std::size_t col = static_cast<std::size_t>(i);
            const double I = 0.5 * dt * (lam(k, i) + lam(k, i + 1));
            const double decay = std::exp(-I);
            const double inflow = 0.5 * dt *
                                  (lam(k + 1, i) * D(row + 1, col) * decay +
                                   lam(k + 1, i + 1) * D(row + 1, col + 1));
            D(row, col + 1) = D(row, col) * decay + inflow;
        }
    }
    for (int i = 0; i <= n; ++i) {
        double active = 0.0;
        for (int k = 1; k <= K; ++k)
            active += D(static_cast<std::size_t>(k), static_cast<std::size_t>(i));
        D(0, static_cast<std::size_t>(i)) = 1.0 - active;
    }
    return out;
}

double BoundReport::max_violation() const {
    return std::max({dv_below, dv_above, dv_growth, lambda_below, lambda_above, m_below, m_above,
                     mass_error});
}

BoundReport check_proposition1(const ValuePath& V, const DistributionPath& m,
                               const ModelParams& params) {
    const int n = params.n_steps;
    const int K = params.K;
    const double dt = params.dt();
    if (V.values.rows() != static_cast<std::size_t>(K) ||
        V.values.cols() != static_cast<std::size_t>(n) + 1)
        throw std::invalid_argument("V: expected a K x (n_steps+1) grid");
    if (m.values.rows() != static_cast<std::size_t>(K) + 1 ||
        m.values.cols() != static_cast<std::size_t>(n) + 1)
        throw std::invalid_argument("m: expected a (K+1) x (n_steps+1) grid");

    const MonopolyConstants mc = monopoly_constants(params.r);
    const double dv_cap = 1.0 - 2.0 * mc.rho;

    BoundReport rep;
    for (int k = 1; k <= K; ++k) {
        for (int i = 0; i <= n; ++i) {
            const double dv = V.delta(k, static_cast<std::size_t>(i));
            rep.dv_below = std::max(rep.dv_below, -dv);
            rep.dv_above = std::max(rep.dv_above, dv - dv_cap);
            const double lambda = 0.5 * (1.0 - dv);
            rep.lambda_below = std::max(rep.lambda_below, mc.rho - lambda);
            rep.lambda_above = std::max(rep.lambda_above, lambda - 0.5);
            if (i < n) {
                const double growth =
                    (V.delta(k, static_cast<std::size_t>(i) + 1) - dv) / dt;
                rep.dv_growth = std::max(rep.dv_growth, growth);
            }
        }
    }
    for (int i = 0; i <= n; ++i) {
        double sum = 0.0;
        for (int k = 0; k <= K; ++k) {
            const double mk = m.values(static_cast<std::size_t>(k), static_cast<std::size_t>(i));
            rep.m_below = std::max(rep.m_below, -mk);
            rep.m_above = std::max(rep.m_above, mk - 1.0);
            sum += mk;
        }
        rep.mass_error = std::max(rep.mass_error, std::abs(sum - 1.0));
    }
    return rep;
}

}  // namespace mfp
