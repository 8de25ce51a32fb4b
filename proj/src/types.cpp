#include "mfp/types.hpp"

#include <cmath>

namespace mfp {

void ModelParams::validate() const {
    if (K < 1) throw std::invalid_argument("model.K: must be >= 1");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("model.T: must be > 0");
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("model.r: must be > 0");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("model.epsilon: must be >= 0");
    if (n_steps < 2) throw std::invalid_argument("model.n_steps: must be >= 2");
    if (!(tol > 0.0)) throw std::invalid_argument("model.tol: must be > 0");
    if (max_iters < 1) throw std::invalid_argument("model.max_iters: must be >= 1");
}

TimeGrid TimeGrid::uniform(double T, int n_steps) {
    TimeGrid grid;
    grid.points.resize(static_cast<std::size_t>(n_steps) + 1);
    for (int i = 0; i <= n_steps; ++i)
        grid.points[static_cast<std::size_t>(i)] = T * static_cast<double>(i) / n_steps;
    grid.points.front() = 0.0;
    grid.points.back() = T;
    return grid;
}

void InitialDistribution::validate() const {
    if (M.empty()) throw std::invalid_argument("initial_distribution: empty");
    double sum = 0.0;
    for (double v : M) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("initial_distribution: entry outside [0, 1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("initial_distribution: masses must sum to 1 within 1e-12");
}

}  // namespace mfp
