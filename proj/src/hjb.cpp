#include "mfp/hjb.hpp"

#include <cmath>

#include "mfp/dopri5.hpp"
#include "mfp/model.hpp"

namespace mfp {

namespace {

void check_paths(const ModelParams& params, const MeanPricePath& p_bar,
                 const DistributionPath& m) {
    const std::size_t cols = static_cast<std::size_t>(params.n_steps) + 1;
    if (p_bar.values.size() != cols)
        throw std::invalid_argument("p_bar: expected n_steps+1 samples");
    if (m.values.rows() != static_cast<std::size_t>(params.K) + 1 || m.values.cols() != cols)
        throw std::invalid_argument("m: expected a (K+1) x (n_steps+1) grid");
    for (double v : p_bar.values)
        if (!std::isfinite(v)) throw SolverError("p_bar: path contains a non-finite value");
    for (std::size_t idx = 0; idx < m.values.rows() * m.values.cols(); ++idx)
        if (!std::isfinite(m.values.data()[idx]))
            throw SolverError("m: path contains a non-finite value");
}

}  // namespace

ValuePath solve_hjb(const ModelParams& params, const MeanPricePath& p_bar,
                    const DistributionPath& m) {
    params.validate();
    check_paths(params, p_bar, m);

    const int n = params.n_steps;
    const int K = params.K;
    const double dt = params.dt();
    const double T = params.T;

    std::vector<double> eta_nodes(static_cast<std::size_t>(n) + 1);
    for (std::size_t i = 0; i < eta_nodes.size(); ++i) eta_nodes[i] = m.eta(i);

    // Terminal-value problem, run in reversed time tau = T - t:
    //   dV_k/dtau = -r V_k + lambda*(p* - DV_k),   V_k(tau = 0) = 0.
    // The exogenous paths are piecewise-linear in t between grid nodes, so
    // stepping one grid interval at a time keeps the right-hand side smooth
    // inside every integrator call.
    auto rhs = [&](double tau, const std::vector<double>& y, std::vector<double>& dy) {
        const double t = T - tau;
        const double eta = detail::lerp_uniform(eta_nodes, t, dt);
        const double pb = detail::lerp_uniform(p_bar.values, t, dt);
        const DemandCoefficients dc = demand_coefficients(eta, params.epsilon);
        double below = 0.0;
        for (int k = 0; k < K; ++k) {
            const double dv = y[static_cast<std::size_t>(k)] - below;
            const double price = optimal_price(dv, pb, dc);
            const double lambda = intensity(price, pb, dc);
            dy[static_cast<std::size_t>(k)] =
                -params.r * y[static_cast<std::size_t>(k)] + lambda * (price - dv);
            below = y[static_cast<std::size_t>(k)];
        }
    };

    ValuePath V;
    V.values = Grid2D(static_cast<std::size_t>(K), static_cast<std::size_t>(n) + 1);
    std::vector<double> y(static_cast<std::size_t>(K), 0.0);
    for (int k = 0; k < K; ++k)
        V.values(static_cast<std::size_t>(k), static_cast<std::size_t>(n)) = 0.0;

    detail::Dopri5 stepper(static_cast<std::size_t>(K));
    for (int j = 0; j < n; ++j) {
        stepper.advance(rhs, static_cast<double>(j) * dt, static_cast<double>(j + 1) * dt, y);
        const std::size_t col = static_cast<std::size_t>(n - j - 1);
        for (int k = 0; k < K; ++k) V.values(static_cast<std::size_t>(k), col) = y[static_cast<std::size_t>(k)];
    }
    return V;
}

PolicyPath extract_policy(const ValuePath& V, const MeanPricePath& p_bar,
                          const DistributionPath& m, const ModelParams& params) {
    params.validate();
    check_paths(params, p_bar, m);
    const int n = params.n_steps;
    const int K = params.K;
    if (V.values.rows() != static_cast<std::size_t>(K) ||
        V.values.cols() != static_cast<std::size_t>(n) + 1)
        throw std::invalid_argument("V: expected a K x (n_steps+1) grid");

    PolicyPath pol;
    pol.prices = Grid2D(static_cast<std::size_t>(K), static_cast<std::size_t>(n) + 1);
    pol.intensities = Grid2D(static_cast<std::size_t>(K), static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const std::size_t col = static_cast<std::size_t>(i);
        const DemandCoefficients dc = demand_coefficients(m.eta(col), params.epsilon);
        const double pb = p_bar.values[col];
        for (int k = 1; k <= K; ++k) {
            const double dv = V.delta(k, col);
            const double price = optimal_price(dv, pb, dc);
            pol.prices(static_cast<std::size_t>(k - 1), col) = price;
            pol.intensities(static_cast<std::size_t>(k - 1), col) = intensity(price, pb, dc);
        }
    }
    return pol;
}

}  // namespace mfp
