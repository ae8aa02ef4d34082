#pragma once

#include <cstdint>

#include "sparse_smooth/types.hpp"

namespace sparse_smooth::digits {

/// Binary digit statistics of a positive integer. `bit_length` is the n
/// with 2^(n-1) <= value < 2^n.
struct DigitProfile {
    ArbInt value;
    std::uint64_t bit_length = 0;
    std::uint64_t ones = 0;
    std::uint64_t zeros = 0;
};

struct EntropyThreshold {
    double a_param = 0;
    double theta0 = 0;
    double tolerance = 0;
};

inline constexpr double kDefaultTheta0Tolerance = 1e-12;

/// Throws std::invalid_argument for value < 1.
DigitProfile digit_profile(const ArbInt& value);

/// s_2 for machine words; the survey hot loop uses this directly.
inline unsigned ones_u64(std::uint64_t v) { return static_cast<unsigned>(__builtin_popcountll(v)); }

/// H(g) = -g log2 g - (1-g) log2(1-g), with H(0) = H(1) = 0.
double binary_entropy(double gamma);

/// Root of H(theta) = (A-1)/(A+1) in (0, 1/2), by bisection.
EntropyThreshold theta0(double a_param, double tolerance = kDefaultTheta0Tolerance);

/// ((theta+1)/2 + (theta-1)/(2A)) * n. Rejects theta >= theta0(A); the
/// algebraic identity at theta = 1 is available via zero_bound_formula.
double theorem1_zero_bound(double a_param, double theta, std::uint64_t n);

/// The same expression with no hypothesis check.
double zero_bound_formula(double a_param, double theta, std::uint64_t n);

}  // namespace sparse_smooth::digits
