#include "mfp/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "mfp/hjb.hpp"
#include "mfp/kolmogorov.hpp"
#include "mfp/model.hpp"
#include "mfp/rng.hpp"

namespace mfp {

double distance(const Guess& a, const Guess& b, double dt) {
    if (a.p_bar.values.size() != b.p_bar.values.size() ||
        !a.m.values.same_shape(b.m.values) ||
        a.m.values.cols() != a.p_bar.values.size())
        throw std::invalid_argument("distance: iterate shapes differ");
    if (!(dt > 0.0)) throw std::invalid_argument("dt: must be > 0");

    const std::size_t cols = a.p_bar.values.size();
    const std::size_t rows = a.m.values.rows();
    auto weight = [&](std::size_t i) { return (i == 0 || i + 1 == cols) ? 0.5 * dt : dt; };

    double total = 0.0;
    for (std::size_t i = 0; i < cols; ++i) {
        const double d = a.p_bar.values[i] - b.p_bar.values[i];
        total += weight(i) * d * d;
    }
    for (std::size_t k = 0; k < rows; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < cols; ++i) {
            const double d = a.m.values(k, i) - b.m.values(k, i);
            acc += weight(i) * d * d;
        }
        total += acc;
    }
    return total;
}

Guess default_initial_guess(const ModelParams& params, const InitialDistribution& M) {
    params.validate();
    M.validate();
    if (M.M.size() != static_cast<std::size_t>(params.K) + 1)
        throw std::invalid_argument("initial_distribution: expected K+1 entries");
    const std::size_t cols = static_cast<std::size_t>(params.n_steps) + 1;
    Guess g;
    g.p_bar.values.assign(cols, 0.5);
    g.m.values = Grid2D(M.M.size(), cols);
    for (std::size_t k = 0; k < M.M.size(); ++k)
        for (std::size_t i = 0; i < cols; ++i) g.m.values(k, i) = M.M[k];
    return g;
}

Guess random_initial_guess(const ModelParams& params, const InitialDistribution& M,
                           std::uint64_t seed) {
    params.validate();
    M.validate();
    if (M.M.size() != static_cast<std::size_t>(params.K) + 1)
        throw std::invalid_argument("initial_distribution: expected K+1 entries");
    const std::size_t cols = static_cast<std::size_t>(params.n_steps) + 1;
    const std::size_t rows = static_cast<std::size_t>(params.K) + 1;

    detail::Rng rng(seed);
    Guess g;
    g.p_bar.values.resize(cols);
    for (std::size_t i = 0; i < cols; ++i) g.p_bar.values[i] = rng.next_unit();
    g.m.values = Grid2D(rows, cols);
    std::vector<double> col(rows);
    for (std::size_t i = 0; i < cols; ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < rows; ++k) {
            col[k] = -std::log(rng.next_unit_open());
            sum += col[k];
        }
        for (std::size_t k = 0; k < rows; ++k) g.m.values(k, i) = col[k] / sum;
    }
    return g;
}

namespace {

void check_guess(const ModelParams& params, const Guess& g) {
    const std::size_t cols = static_cast<std::size_t>(params.n_steps) + 1;
    if (g.p_bar.values.size() != cols)
        throw std::invalid_argument("guess: p_bar must have n_steps+1 samples");
    if (g.m.values.rows() != static_cast<std::size_t>(params.K) + 1 || g.m.values.cols() != cols)
        throw std::invalid_argument("guess: m must be a (K+1) x (n_steps+1) grid");
}

// Mean quoted price over active firms at one grid node; nodes where the
// active mass sits below the floor inherit the price of the node to their
// left (or the incoming iterate's value at t = 0).
MeanPricePath propose_mean_price(const PolicyPath& policy, const DistributionPath& m,
                                 const MeanPricePath& fallback) {
    const std::size_t cols = m.values.cols();
    const std::size_t K = policy.prices.rows();
    MeanPricePath out;
    out.values.resize(cols);
    for (std::size_t i = 0; i < cols; ++i) {
        double eta = 0.0, weighted = 0.0;
        for (std::size_t k = 1; k <= K; ++k) {
            const double mk = m.values(k, i);
            eta += mk;
            weighted += mk * policy.prices(k - 1, i);
        }
        if (eta <= kEtaFloor)
            out.values[i] = (i == 0) ? fallback.values[0] : out.values[i - 1];
        else
            out.values[i] = weighted / eta;
    }
    return out;
}

}  // namespace

EquilibriumSolution solve_equilibrium(const ModelParams& params, const InitialDistribution& M,
                                      const Guess& guess, double relaxation) {
    params.validate();
    M.validate();
    if (M.M.size() != static_cast<std::size_t>(params.K) + 1)
        throw std::invalid_argument("initial_distribution: expected K+1 entries");
    check_guess(params, guess);
    if (!(relaxation > 0.0 && relaxation <= 1.0))
        throw std::invalid_argument("relaxation: must be in (0, 1]");

    const double dt = params.dt();
    Guess cur = guess;
    Guess best = cur;
    double best_error = std::numeric_limits<double>::infinity();

    IterationTrace trace;
    for (int it = 0; it < params.max_iters; ++it) {
        const ValuePath V = solve_hjb(params, cur.p_bar, cur.m);
        const PolicyPath policy = extract_policy(V, cur.p_bar, cur.m, params);
        const DistributionPath m_new = solve_kolmogorov(params, policy.intensities, M);

        Guess next;
        next.m = m_new;
        next.p_bar = propose_mean_price(policy, m_new, cur.p_bar);
        if (relaxation != 1.0) {
            const double w = relaxation;
            for (std::size_t i = 0; i < next.p_bar.values.size(); ++i)
                next.p_bar.values[i] =
                    (1.0 - w) * cur.p_bar.values[i] + w * next.p_bar.values[i];
            const std::size_t total = next.m.values.rows() * next.m.values.cols();
            for (std::size_t idx = 0; idx < total; ++idx)
                next.m.values.data()[idx] = (1.0 - w) * cur.m.values.data()[idx] +
                                            w * next.m.values.data()[idx];
        }

        const double err = distance(cur, next, dt);
        trace.errors.push_back(err);
        trace.iterations = it + 1;
        cur = std::move(next);
        if (err < best_error) {
            best_error = err;
            best = cur;
        }
        if (err < params.tol) {
            trace.converged = true;
            break;
        }
    }

    EquilibriumSolution sol;
    sol.trace = trace;
    Guess& final_iterate = trace.converged ? cur : best;
    sol.V = solve_hjb(params, final_iterate.p_bar, final_iterate.m);
    sol.policy = extract_policy(sol.V, final_iterate.p_bar, final_iterate.m, params);
    sol.p_bar = std::move(final_iterate.p_bar);
    sol.m = std::move(final_iterate.m);
    return sol;
}

}  // namespace mfp
