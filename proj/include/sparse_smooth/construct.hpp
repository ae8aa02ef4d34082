#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sparse_smooth/arith.hpp"

namespace sparse_smooth::construct {

enum class Kind { theorem2, theorem3, balanced };

std::string_view kind_name(Kind k);

struct ConstructOptions {
    arith::FactorEffort effort{};
    unsigned max_r = 6;    // full powering above this is refused
    bool certify = true;   // factor 2^k + 1 (and 2^k2 - 1 for balanced)
};

/// A constructed N = (2^k + 1)^ell, or (2^k1 + 1)(2^k2 - 1) for the balanced
/// kind, with its digit statistics and smoothness certificate.
struct ConstructionReport {
    Kind kind = Kind::theorem2;
    double alpha = 0;
    unsigned r = 0;
    ArbInt k;
    ArbInt k2;   // balanced only
    ArbInt ell;  // 1 for balanced
    std::uint64_t n_bits = 0;
    std::uint64_t ones = 0;
    std::uint64_t zeros = 0;

    double sparsity_bound = 0;        // main term of the sparsity claim at n_bits
    double binomial_log_sum = 0;      // sum_{j<=ell} ln C(ell, j)
    std::uint64_t digit_ceiling = 0;  // ceil(binomial_log_sum / ln 2) + ell + 1
    bool degenerate = false;          // ell == 1

    ArbInt largest_prime_found = 1;
    bool smoothness_complete = false;
    std::optional<double> log_y_target;  // ln Y at this N; empty when ln ln ln N <= 0

    ArbInt value;  // N itself
};

/// ell = floor(alpha * ln(2) * k), k = p_2 ... p_r. Natural log throughout.
ConstructionReport construct_theorem2(double alpha, unsigned r, const ConstructOptions& opts = {});

/// ell = floor(k^(alpha / (2 - alpha))).
ConstructionReport construct_theorem3(double alpha, unsigned r, const ConstructOptions& opts = {});

ConstructionReport construct_balanced(unsigned r, const ConstructOptions& opts = {});

/// Builds the report for N = (2^k + 1)^ell directly (k odd).
ConstructionReport construct_power(Kind kind, double alpha, unsigned r, const ArbInt& k, std::uint64_t ell,
                                   const ConstructOptions& opts);

/// sum_{j=0}^{ell} ln C(ell, j), accumulated from log factorials.
long double binomial_log_sum(std::uint64_t ell);

/// ln(largest prime) / ln Y. Throws for uncertified reports or when ln Y is
/// undefined at this N.
double smoothness_exponent(const ConstructionReport& report);

}  // namespace sparse_smooth::construct
