#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "sparse_smooth/arith.hpp"

namespace sparse_smooth::cyclotomic {

inline constexpr std::uint64_t kMaxIndex = 1'000'000;
inline constexpr std::uint64_t kMaxHeightScan = 100'000;

/// Phi_n with integer coefficients, lowest degree first.
struct CyclotomicPoly {
    std::uint64_t index = 0;
    std::vector<std::int64_t> coeffs;
    std::int64_t height = 0;  // A_n

    std::size_t degree() const { return coeffs.size() - 1; }
};

/// Phi_n for 1 <= n <= 10^6. Built from the squarefree odd kernel as
/// prod_{d | s} (x^d - 1)^{mu(s/d)} with exact division (zero remainder is
/// checked at every step), then Phi_{2s}(x) = Phi_s(-x) and
/// Phi_n(x) = Phi_rad(n)(x^{n/rad(n)}).
CyclotomicPoly cyclotomic_poly(std::uint64_t n);

/// Thread-safe memo of Phi_d keyed by d. Lookups take a shared lock;
/// a miss computes outside the lock and inserts if still absent.
class CyclotomicCache {
public:
    std::shared_ptr<const CyclotomicPoly> get(std::uint64_t n);
    std::size_t size() const;

private:
    mutable std::shared_mutex mu_;
    std::map<std::uint64_t, std::shared_ptr<const CyclotomicPoly>> polys_;
};

CyclotomicCache& default_cache();

ArbInt evaluate(const CyclotomicPoly& poly, long x);

/// Phi_n(-2) by Horner's rule on the cached coefficients.
ArbInt eval_at_minus_two(std::uint64_t n);

struct CyclotomicPiece {
    std::uint64_t d = 0;
    int sign = 1;             // sign of Phi_d(-2)
    ArbInt magnitude;         // |Phi_d(-2)| = Phi_{2d}(2)
    arith::Factorization factors;  // of magnitude
};

/// 2^k + 1 = -prod_{d | k} Phi_d(-2) for odd k, with every piece factored.
/// The minus variant holds 2^k - 1 = -prod_{d | k} Phi_{2d}(-2); each
/// piece's `d` then records the cyclotomic index 2d.
struct FermatLikeFactorization {
    std::uint64_t k = 0;
    bool plus = true;                     // 2^k + 1, else 2^k - 1
    std::vector<CyclotomicPiece> pieces;  // ascending index
    arith::Factorization merged;
    ArbInt largest_piece;

    ArbInt value() const;
};

/// Divisors of n in ascending order.
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// Throws std::invalid_argument for even k, std::logic_error if the
/// product identity fails.
FermatLikeFactorization fermat_like_factor(std::uint64_t k, const arith::FactorEffort& effort = {});

/// 2^k - 1 for odd k, split as -prod_{d | k} Phi_{2d}(-2).
FermatLikeFactorization mersenne_like_factor(std::uint64_t k, const arith::FactorEffort& effort = {});

/// -prod_{d | k} Phi_d(-2) == 2^k + 1, compared exactly.
bool product_identity_holds(std::uint64_t k);

struct HeightBoundReport {
    std::uint64_t n_max = 0;
    std::uint64_t checked = 0;
    bool all_hold = true;
    std::uint64_t first_failure = 0;    // 0 when all hold
    double max_log_ratio = 0;           // max of log A_n / (tau(n) log(n) / 2)
    std::uint64_t max_log_ratio_at = 0;
    std::int64_t max_height = 0;
    std::uint64_t max_height_at = 0;
};

/// A_n < exp(tau(n) log(n) / 2) for 2 <= n <= n_max (n_max <= 10^5).
HeightBoundReport height_bound_check(std::uint64_t n_max);

}  // namespace sparse_smooth::cyclotomic
