#include "sparse_smooth/smoothcount.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace sparse_smooth::smoothcount {

namespace {

using u64 = std::uint64_t;

// Memoized evaluation of Psi(x, p_k) over a fixed prime list. One instance
// per query; the memo dies with it.
class PsiCounter {
public:
    explicit PsiCounter(std::span<const std::uint32_t> primes) : p_(primes) {}

    u64 count(u64 x, std::size_t k) {
        if (x == 0) return 0;
        if (k == 0 || x < 3) return std::bit_width(x);
        if (p_[k] >= x) return x;
        if (k == 1) return psi3(x);

        const Key key{x, k};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        // Psi(x, p_k) = Psi(x, 2) + sum_{i=1..k} Psi(floor(x / p_i), p_i);
        // when p_i^2 > x the summand is floor(x / p_i) exactly.
        u64 total = std::bit_width(x);
        for (std::size_t i = 1; i <= k; ++i) {
            const u64 p = p_[i];
            const u64 q = x / p;
            if (p > q) {
                for (std::size_t j = i; j <= k; ++j) total += x / p_[j];
                break;
            }
            total += count(q, i);
        }
        memo_.emplace(key, total);
        return total;
    }

private:
    struct Key {
        u64 x;
        std::size_t k;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& key) const {
            return std::hash<u64>{}(key.x * 0x9e3779b97f4a7c15ULL ^ key.k);
        }
    };

    static u64 psi3(u64 x) {
        u64 total = 0;
        for (u64 t = x; t > 0; t /= 3) total += std::bit_width(t);
        return total;
    }

    std::span<const std::uint32_t> p_;
    std::unordered_map<Key, u64, KeyHash> memo_;
};

void dfs(u64 value, std::size_t idx, u64 lo, u64 hi, std::span<const std::uint32_t> primes,
         const std::function<void(u64)>& visit) {
    // value's largest prime index is < idx (or value == 1); extend with p_j, j >= idx.
    for (std::size_t j = idx; j < primes.size(); ++j) {
        const u64 p = primes[j];
        if (value > hi / p) break;
        u64 v = value * p;
        while (true) {
            if (v > lo) visit(v);
            dfs(v, j + 1, lo, hi, primes, visit);
            if (v > hi / p) break;
            v *= p;
        }
    }
}

}  // namespace

std::uint64_t psi_exact(std::uint64_t x, std::uint64_t y, std::uint64_t guard) {
    if (x < 1) throw std::invalid_argument("psi_exact: x must be >= 1");
    if (y < 2) throw std::invalid_argument("psi_exact: y must be >= 2");
    if (x > guard) throw std::invalid_argument("psi_exact: x exceeds feasibility guard " + std::to_string(guard));
    if (y >= x) return x;
    const arith::PrimeList ps = arith::primes_up_to(y);
    PsiCounter counter(ps.primes());
    return counter.count(x, ps.size() - 1);
}

void for_each_smooth(std::uint64_t lo, std::uint64_t hi, std::uint64_t y, bool odd_only,
                     const std::function<void(std::uint64_t)>& visit) {
    if (lo >= hi) return;
    if (y < 2) throw std::invalid_argument("for_each_smooth: y must be >= 2");
    const arith::PrimeList ps = arith::primes_up_to(std::min(y, hi));
    auto primes = ps.primes();
    if (odd_only && !primes.empty()) primes = primes.subspan(1);
    if (lo < 1 && hi >= 1) visit(1);
    dfs(1, 0, lo, hi, primes, visit);
}

void for_each_smooth_multiple(std::uint64_t base, std::span<const std::uint32_t> primes, std::uint64_t lo,
                              std::uint64_t hi, const std::function<void(std::uint64_t)>& visit) {
    if (base == 0) throw std::invalid_argument("for_each_smooth_multiple: base must be >= 1");
    if (lo >= hi || base > hi) return;
    if (base > lo) visit(base);
    dfs(base, 0, lo, hi, primes, visit);
}

SmoothStream::SmoothStream(std::uint64_t lo, std::uint64_t hi, std::uint64_t y, bool odd_only)
    : lo_(lo), hi_(hi), primes_(arith::primes_up_to(std::min(y, std::max<std::uint64_t>(hi, 2)))),
      first_(odd_only ? 1 : 0) {
    if (y < 2) throw std::invalid_argument("SmoothStream: y must be >= 2");
    if (lo >= hi) return;
    if (lo < 1) heap_.push(Node{1, 1, static_cast<std::size_t>(-1)});
    push_child(1, first_);
}

void SmoothStream::push_child(std::uint64_t base, std::size_t idx) {
    if (idx >= primes_.size()) return;
    const std::uint64_t p = primes_[idx];
    if (base > hi_ / p) return;
    heap_.push(Node{base * p, base, idx});
}

std::optional<std::uint64_t> SmoothStream::next() {
    while (!heap_.empty()) {
        const Node n = heap_.top();
        heap_.pop();
        if (n.idx != static_cast<std::size_t>(-1)) {
            // Sibling: same base, next prime. Child: keep multiplying by p_idx.
            push_child(n.base, n.idx + 1);
            push_child(n.value, n.idx);
        }
        if (n.value > lo_) return n.value;
    }
    return std::nullopt;
}

std::vector<std::uint64_t> enumerate_smooth(std::uint64_t lo, std::uint64_t hi, std::uint64_t y, bool odd_only) {
    std::vector<std::uint64_t> out;
    for_each_smooth(lo, hi, y, odd_only, [&](std::uint64_t v) { out.push_back(v); });
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t log_power_bound(std::uint64_t x, double a_param) {
    if (x < 2) throw std::invalid_argument("log_power_bound: x must be >= 2");
    const long double v = std::pow(std::log(static_cast<long double>(x)), static_cast<long double>(a_param));
    return static_cast<std::uint64_t>(std::floor(v));
}

RatioCheck psi_ratio_check(std::uint64_t x, double c, double a_param, std::uint64_t guard) {
    if (!(c >= 1.0)) throw std::invalid_argument("psi_ratio_check: c must be >= 1");
    if (!(a_param > 1.0)) throw std::invalid_argument("psi_ratio_check: A must exceed 1");
    RatioCheck r;
    r.x = x;
    r.y = log_power_bound(x, a_param);
    if (r.y < 2) throw std::invalid_argument("psi_ratio_check: log^A x must be >= 2");
    r.cx = static_cast<std::uint64_t>(std::floor(static_cast<long double>(c) * static_cast<long double>(x)));
    r.psi_x = psi_exact(x, r.y, guard);
    r.psi_cx = psi_exact(r.cx, r.y, guard);
    r.observed = static_cast<double>(r.psi_cx) / static_cast<double>(r.psi_x);
    r.predicted = std::pow(c, 1.0 - 1.0 / a_param);
    return r;
}

std::vector<double> psi_exponent_trend(std::span<const std::uint64_t> xs, double a_param, std::uint64_t guard) {
    if (!(a_param > 1.0)) throw std::invalid_argument("psi_exponent_trend: A must exceed 1");
    std::vector<double> out;
    out.reserve(xs.size());
    for (std::uint64_t x : xs) {
        const std::uint64_t y = log_power_bound(x, a_param);
        if (y < 2) throw std::invalid_argument("psi_exponent_trend: floor(log^A x) must be >= 2");
        const std::uint64_t psi = psi_exact(x, y, guard);
        out.push_back(std::log(static_cast<double>(psi)) / std::log(static_cast<double>(x)));
    }
    return out;
}

}  // namespace sparse_smooth::smoothcount
