#include "mfp/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfp {

namespace {

void check_bound_args(int K, double T, double r) {
    if (K < 1) throw std::invalid_argument("K: must be >= 1");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T: must be > 0");
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r: must be > 0");
}

}  // namespace

double existence_bound(int K, double T, double r) {
    check_bound_args(K, T, r);
    const double Kd = static_cast<double>(K);
    const double num = std::min(1.0 + Kd * T, std::sqrt(r));
    return std::ldexp(num / (Kd * Kd * T), -(K + 8));
}

double existence_bound_log10(int K, double T, double r) {
    check_bound_args(K, T, r);
    const double Kd = static_cast<double>(K);
    const double num = std::min(1.0 + Kd * T, std::sqrt(r));
    constexpr double log10_2 = 0.30102999566398119521;
    return std::log10(num) - 2.0 * std::log10(Kd) - std::log10(T) -
           static_cast<double>(K + 8) * log10_2;
}

double uniqueness_bound(int K) {
    if (K < 1) throw std::invalid_argument("K: must be >= 1");
    if (K == 1) return std::numeric_limits<double>::infinity();
    return 2.0 / static_cast<double>(K - 1);
}

FinitePlayerCoefficients finite_player_coefficients(int n, int N, double epsilon) {
    if (N < 2) throw std::invalid_argument("N: must be >= 2");
    if (n < 1 || n > N) throw std::invalid_argument("n: must be in [1, N]");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("epsilon: must be >= 0");
    const double share = epsilon / static_cast<double>(N - 1);
    if (!(share < 1.0))
        throw std::invalid_argument("epsilon: must be < N-1 for an invertible demand system");

    const double own = 1.0 + share * static_cast<double>(n - 1);
    const double den = own * (1.0 - share);
    FinitePlayerCoefficients fc;
    fc.a = 1.0 / own;
    fc.b = (1.0 + share * static_cast<double>(n - 2)) / den;
    fc.c = share * static_cast<double>(n - 1) / den;
    return fc;
}

}  // namespace mfp
