#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sparse_smooth/types.hpp"

namespace sparse_smooth::arith {

struct PrimePower {
    ArbInt prime;
    unsigned exponent = 0;
};

/// Prime factorization, possibly partial. Invariant: the product of
/// prime^exponent over `factors`, times `cofactor`, is the factored value;
/// complete <=> cofactor == 1.
struct Factorization {
    std::vector<PrimePower> factors;  // strictly increasing primes
    bool complete = true;
    ArbInt cofactor = 1;

    ArbInt reassemble() const;
    /// Largest certified prime, or 1 for the empty factorization.
    ArbInt largest_prime() const;
};

/// Work budget for factor(). Exhaustion is reported via complete = false.
struct FactorEffort {
    std::uint64_t trial_bound = 1u << 16;
    std::uint64_t rho_iterations = 1u << 24;  // per rho invocation
    unsigned rho_attempts = 4;                 // polynomial increments tried per composite
};

struct OddPrimorial {
    unsigned r = 0;
    ArbInt k;              // p_2 * ... * p_r
    ArbInt largest_prime;  // p_r
};

struct MertensResult {
    double product = 0;  // prod_{p <= x} (1 - 1/p)
    double ratio = 0;    // product / (e^-gamma / log x)
};

inline constexpr std::uint64_t kDefaultSieveLimit = 10'000'000;

/// Sieve ceiling: SPARSE_SMOOTH_SIEVE_LIMIT if set and valid, else 10^7.
std::uint64_t sieve_limit();

/// All primes <= bound, ascending. The backing table is built once up to
/// sieve_limit() and regrown (never shrunk) when a caller asks for more.
/// The returned handle keeps the snapshot alive; it is safe to share.
class PrimeList {
public:
    std::span<const std::uint32_t> primes() const { return {table_->data(), count_}; }
    std::size_t size() const { return count_; }
    std::uint32_t operator[](std::size_t i) const { return (*table_)[i]; }

private:
    friend PrimeList primes_up_to(std::uint64_t bound);
    friend PrimeList first_primes(std::size_t count);
    PrimeList(std::shared_ptr<const std::vector<std::uint32_t>> t, std::size_t n)
        : table_(std::move(t)), count_(n) {}
    std::shared_ptr<const std::vector<std::uint32_t>> table_;
    std::size_t count_;
};

PrimeList primes_up_to(std::uint64_t bound);

/// First `count` primes (p_1 = 2).
PrimeList first_primes(std::size_t count);

bool is_prime_u64(std::uint64_t n);

/// Deterministic below 2^64 (Miller-Rabin, first twelve prime bases). Above,
/// GMP's BPSW followed by 64 Miller-Rabin rounds: probabilistic, but the
/// same input always yields the same answer.
bool is_prime(const ArbInt& n);

Factorization factor(const ArbInt& n, const FactorEffort& effort = {});

/// Merge several factorizations of coprime-or-not parts into one of their product.
Factorization merge(std::span<const Factorization> parts);

struct SmoothSplit {
    ArbInt smooth;
    ArbInt rough;
};

/// n = smooth * rough, smooth the largest y-smooth divisor of n.
SmoothSplit smooth_part(const ArbInt& n, const ArbInt& y);
bool is_smooth(const ArbInt& n, const ArbInt& y);
bool is_smooth_u64(std::uint64_t n, std::uint64_t y);

OddPrimorial odd_primorial(unsigned r);

ArbInt euler_phi(const Factorization& f);
ArbInt tau(const Factorization& f);

MertensResult mertens_product(std::uint64_t x);

}  // namespace sparse_smooth::arith
