#include "sparse_smooth/digits.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sparse_smooth::digits {

DigitProfile digit_profile(const ArbInt& value) {
    if (sgn(value) <= 0) throw std::invalid_argument("digit_profile: value must be >= 1");
    DigitProfile p;
    p.value = value;
    p.bit_length = mpz_sizeinbase(value.get_mpz_t(), 2);
    p.ones = mpz_popcount(value.get_mpz_t());
    p.zeros = p.bit_length - p.ones;
    return p;
}

double binary_entropy(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("binary_entropy: gamma must lie in [0, 1]");
    if (gamma == 0.0 || gamma == 1.0) return 0.0;
    return -gamma * std::log(gamma) / std::log(2.0) - (1.0 - gamma) * std::log1p(-gamma) / std::log(2.0);
}

EntropyThreshold theta0(double a_param, double tolerance) {
    if (!(a_param > 1.0)) throw std::invalid_argument("theta0: A must exceed 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("theta0: tolerance must be positive");

    const double target = (a_param - 1.0) / (a_param + 1.0);
    constexpr double eps = 1e-15;
    double lo = eps, hi = 0.5 - eps;
    // H is strictly increasing on (0, 1/2); stop once the value residual or the
    // bracket (at double resolution) is below the tolerance.
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double h = binary_entropy(mid);
        if (std::fabs(h - target) <= tolerance * 0.5 || mid == lo || mid == hi) {
            lo = hi = mid;
            break;
        }
        if (h < target) lo = mid; else hi = mid;
    }
    return EntropyThreshold{a_param, 0.5 * (lo + hi), tolerance};
}

double zero_bound_formula(double a_param, double theta, std::uint64_t n) {
    return (0.5 * (theta + 1.0) + (theta - 1.0) / (2.0 * a_param)) * static_cast<double>(n);
}

double theorem1_zero_bound(double a_param, double theta, std::uint64_t n) {
    if (!(a_param > 1.0)) throw std::invalid_argument("theorem1_zero_bound: A must exceed 1");
    const double t0 = theta0(a_param).theta0;
    if (!(theta < t0))
        throw std::invalid_argument("theorem1_zero_bound: theta must be below theta0(A) = " +
                                    std::to_string(t0));
    return zero_bound_formula(a_param, theta, n);
}

}  // namespace sparse_smooth::digits
