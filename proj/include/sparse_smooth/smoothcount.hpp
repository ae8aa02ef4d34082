#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "sparse_smooth/arith.hpp"

namespace sparse_smooth::smoothcount {

inline constexpr std::uint64_t kDefaultPsiGuard = std::uint64_t{1} << 48;

struct PsiQuery {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    std::uint64_t count = 0;
};

/// Psi(x, y) = #{1 <= n <= x : n is y-smooth}. Exact; throws for
/// x > guard, x < 1 or y < 2.
std::uint64_t psi_exact(std::uint64_t x, std::uint64_t y, std::uint64_t guard = kDefaultPsiGuard);

/// Visits every y-smooth n in (lo, hi] exactly once, in depth-first order
/// over prime-exponent vectors (not sorted). With odd_only the prime 2 is
/// skipped. Nothing is materialized.
void for_each_smooth(std::uint64_t lo, std::uint64_t hi, std::uint64_t y, bool odd_only,
                     const std::function<void(std::uint64_t)>& visit);

/// Visits base * m for every m >= 1 composed of `primes` (ascending list)
/// with base * m in (lo, hi]. for_each_smooth is the base = 1 case; callers
/// use this to split the search tree into independent subtrees.
void for_each_smooth_multiple(std::uint64_t base, std::span<const std::uint32_t> primes, std::uint64_t lo,
                              std::uint64_t hi, const std::function<void(std::uint64_t)>& visit);

/// Same set, pulled one value at a time in ascending order. Each smooth
/// number v*p (p >= largest prime of v) has a unique parent v, so a min-heap
/// over pending children yields the sequence without materializing it.
class SmoothStream {
public:
    SmoothStream(std::uint64_t lo, std::uint64_t hi, std::uint64_t y, bool odd_only);
    std::optional<std::uint64_t> next();

private:
    struct Node {
        std::uint64_t value;
        std::uint64_t base;  // value = base * primes[idx]
        std::size_t idx;
        bool operator>(const Node& o) const { return value > o.value; }
    };
    void push_child(std::uint64_t base, std::size_t idx);

    std::uint64_t lo_, hi_;
    arith::PrimeList primes_;
    std::size_t first_;
    std::priority_queue<Node, std::vector<Node>, std::greater<>> heap_;
};

/// Ascending vector of the y-smooth integers in (lo, hi]; convenience for
/// small windows.
std::vector<std::uint64_t> enumerate_smooth(std::uint64_t lo, std::uint64_t hi, std::uint64_t y, bool odd_only);

struct RatioCheck {
    std::uint64_t x = 0;
    std::uint64_t cx = 0;
    std::uint64_t y = 0;
    std::uint64_t psi_x = 0;
    std::uint64_t psi_cx = 0;
    double observed = 0;
    double predicted = 0;
};

/// floor((ln x)^A).
std::uint64_t log_power_bound(std::uint64_t x, double a_param);

/// Psi(cx, log^A x) / Psi(x, log^A x) against c^(1-1/A). Reports only.
RatioCheck psi_ratio_check(std::uint64_t x, double c, double a_param, std::uint64_t guard = kDefaultPsiGuard);

/// log Psi(x, floor(log^A x)) / log x for each x.
std::vector<double> psi_exponent_trend(std::span<const std::uint64_t> xs, double a_param,
                                       std::uint64_t guard = kDefaultPsiGuard);

}  // namespace sparse_smooth::smoothcount
