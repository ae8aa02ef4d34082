#include "sparse_smooth/cyclotomic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace sparse_smooth::cyclotomic {

namespace {

using u64 = std::uint64_t;
using Poly = std::vector<std::int64_t>;

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("cyclotomic: coefficient overflow");
    return r;
}

// p * (x^d - 1)
Poly mul_binomial(const Poly& p, u64 d) {
    Poly r(p.size() + d, 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        const std::int64_t hi = i >= d && i - d < p.size() ? p[i - d] : 0;
        const std::int64_t lo = i < p.size() ? p[i] : 0;
        r[i] = checked_sub(hi, lo);
    }
    return r;
}

// p / (x^d - 1), asserting a zero remainder.
Poly div_binomial(const Poly& p, u64 d) {
    if (p.size() <= d) throw std::logic_error("cyclotomic: divisor degree exceeds dividend");
    const std::size_t qlen = p.size() - d;
    Poly q(qlen, 0);
    // p_i = q_{i-d} - q_i
    for (std::size_t i = 0; i < qlen; ++i) q[i] = checked_sub(i >= d ? q[i - d] : 0, p[i]);
    for (std::size_t i = qlen; i < p.size(); ++i) {
        if (p[i] != q[i - d]) throw std::logic_error("cyclotomic: inexact division by x^d - 1");
    }
    return q;
}

struct Kernel {
    std::vector<u64> odd_primes;  // distinct odd primes of n
    bool even = false;
    u64 radical = 1;
};

Kernel kernel_of(u64 n) {
    Kernel k;
    if (n % 2 == 0) {
        k.even = true;
        k.radical = 2;
        while (n % 2 == 0) n /= 2;
    }
    for (u64 p = 3; p * p <= n; p += 2) {
        if (n % p) continue;
        k.odd_primes.push_back(p);
        k.radical *= p;
        while (n % p == 0) n /= p;
    }
    if (n > 1) {
        k.odd_primes.push_back(n);
        k.radical *= n;
    }
    return k;
}

// Phi_s for odd squarefree s given its primes.
Poly odd_squarefree(const std::vector<u64>& primes) {
    if (primes.empty()) return {-1, 1};
    const std::size_t w = primes.size();
    std::vector<u64> numer, denom;  // d with mu(s/d) = +1 / -1
    for (u64 mask = 0; mask < (u64{1} << w); ++mask) {
        u64 d = 1;
        for (std::size_t i = 0; i < w; ++i)
            if (mask >> i & 1) d *= primes[i];
        const bool plus = ((w - std::popcount(mask)) % 2) == 0;
        (plus ? numer : denom).push_back(d);
    }
    std::sort(numer.begin(), numer.end());
    std::sort(denom.begin(), denom.end(), std::greater<>());
    Poly p{1};
    for (u64 d : numer) p = mul_binomial(p, d);
    for (u64 d : denom) p = div_binomial(p, d);
    if (p.back() != 1) throw std::logic_error("cyclotomic: result is not monic");
    return p;
}

std::int64_t height_of(const Poly& p) {
    std::int64_t h = 0;
    for (auto c : p) h = std::max(h, c < 0 ? -c : c);
    return h;
}

}  // namespace

CyclotomicPoly cyclotomic_poly(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("cyclotomic_poly: n must be >= 1");
    if (n > kMaxIndex) throw std::invalid_argument("cyclotomic_poly: n exceeds guard " + std::to_string(kMaxIndex));

    const Kernel ker = kernel_of(n);
    Poly base = odd_squarefree(ker.odd_primes);
    if (ker.even) {
        if (ker.odd_primes.empty()) {
            base = {1, 1};
        } else {
            for (std::size_t i = 1; i < base.size(); i += 2) base[i] = -base[i];
        }
    }
    const u64 stretch = n / ker.radical;
    Poly coeffs;
    if (stretch == 1) {
        coeffs = std::move(base);
    } else {
        coeffs.assign((base.size() - 1) * stretch + 1, 0);
        for (std::size_t i = 0; i < base.size(); ++i) coeffs[i * stretch] = base[i];
    }
    CyclotomicPoly out{n, std::move(coeffs), 0};
    out.height = height_of(out.coeffs);
    return out;
}

std::shared_ptr<const CyclotomicPoly> CyclotomicCache::get(std::uint64_t n) {
    {
        std::shared_lock lock(mu_);
        if (auto it = polys_.find(n); it != polys_.end()) return it->second;
    }
    auto fresh = std::make_shared<const CyclotomicPoly>(cyclotomic_poly(n));
    std::unique_lock lock(mu_);
    auto [it, inserted] = polys_.emplace(n, std::move(fresh));
    return it->second;
}

std::size_t CyclotomicCache::size() const {
    std::shared_lock lock(mu_);
    return polys_.size();
}

CyclotomicCache& default_cache() {
    static CyclotomicCache cache;
    return cache;
}

ArbInt evaluate(const CyclotomicPoly& poly, long x) {
    ArbInt acc = 0;
    for (auto it = poly.coeffs.rbegin(); it != poly.coeffs.rend(); ++it) {
        acc *= x;
        acc += static_cast<long>(*it);
    }
    return acc;
}

ArbInt eval_at_minus_two(std::uint64_t n) { return evaluate(*default_cache().get(n), -2); }

ArbInt FermatLikeFactorization::value() const {
    ArbInt v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, k);
    return plus ? ArbInt(v + 1) : ArbInt(v - 1);
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("divisors: n must be >= 1");
    std::vector<u64> small, large;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        small.push_back(d);
        if (d != n / d) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

bool product_identity_holds(std::uint64_t k) {
    if (k % 2 == 0) throw std::invalid_argument("product_identity_holds: k must be odd");
    ArbInt prod = 1;
    for (u64 d : divisors(k)) prod *= eval_at_minus_two(d);
    ArbInt target;
    mpz_ui_pow_ui(target.get_mpz_t(), 2, k);
    target += 1;
    return -prod == target;
}

namespace {

FermatLikeFactorization split_and_factor(std::uint64_t k, bool plus, const arith::FactorEffort& effort) {
    if (k == 0 || k % 2 == 0) throw std::invalid_argument("cyclotomic split: k must be odd and positive");

    FermatLikeFactorization out;
    out.k = k;
    out.plus = plus;
    ArbInt signed_product = 1;
    std::vector<arith::Factorization> parts;
    for (u64 d : divisors(k)) {
        const u64 index = plus ? d : 2 * d;
        ArbInt v = eval_at_minus_two(index);
        signed_product *= v;
        CyclotomicPiece piece;
        piece.d = index;
        piece.sign = sgn(v) < 0 ? -1 : 1;
        piece.magnitude = abs(v);
        piece.factors = arith::factor(piece.magnitude, effort);
        if (piece.magnitude > out.largest_piece) out.largest_piece = piece.magnitude;
        parts.push_back(piece.factors);
        out.pieces.push_back(std::move(piece));
    }
    if (-signed_product != out.value())
        throw std::logic_error("cyclotomic product identity failed for k = " + std::to_string(k));
    out.merged = arith::merge(parts);
    return out;
}

}  // namespace

FermatLikeFactorization fermat_like_factor(std::uint64_t k, const arith::FactorEffort& effort) {
    if (k == 0 || k % 2 == 0) throw std::invalid_argument("fermat_like_factor: k must be odd and positive");
    return split_and_factor(k, true, effort);
}

FermatLikeFactorization mersenne_like_factor(std::uint64_t k, const arith::FactorEffort& effort) {
    if (k == 0 || k % 2 == 0) throw std::invalid_argument("mersenne_like_factor: k must be odd and positive");
    return split_and_factor(k, false, effort);
}

HeightBoundReport height_bound_check(std::uint64_t n_max) {
    if (n_max > kMaxHeightScan)
        throw std::invalid_argument("height_bound_check: n_max exceeds guard " + std::to_string(kMaxHeightScan));
    HeightBoundReport rep;
    rep.n_max = n_max;
    if (n_max < 2) return rep;

    // Heights depend only on the odd squarefree kernel: Phi_{2s}(x) = Phi_s(-x)
    // and Phi_n(x) = Phi_rad(n)(x^{n/rad(n)}) permute signs/positions only.
    std::vector<std::int64_t> kernel_height(n_max + 1, 0);
    std::vector<u64> todo;
    for (u64 n = 1; n <= n_max; n += 2) {
        const Kernel k = kernel_of(n);
        if (k.radical == n) todo.push_back(n);
    }
    const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < todo.size(); i += workers) {
                const u64 s = todo[todo.size() - 1 - i];  // largest first for balance
                kernel_height[s] = height_of(odd_squarefree(kernel_of(s).odd_primes));
            }
        });
    }
    for (auto& t : pool) t.join();

    for (u64 n = 2; n <= n_max; ++n) {
        const Kernel k = kernel_of(n);
        u64 odd_rad = 1;
        for (u64 p : k.odd_primes) odd_rad *= p;
        const std::int64_t h = odd_rad == 1 ? 1 : kernel_height[odd_rad];
        const arith::Factorization f = arith::factor(ArbInt(static_cast<unsigned long>(n)));
        const double tau_n = arith::tau(f).get_d();
        const double log_bound = 0.5 * tau_n * std::log(static_cast<double>(n));
        const double log_h = std::log(static_cast<double>(h));
        ++rep.checked;
        if (!(log_h < log_bound)) {
            if (rep.all_hold) rep.first_failure = n;
            rep.all_hold = false;
        }
        const double ratio = log_h / log_bound;
        if (ratio > rep.max_log_ratio) {
            rep.max_log_ratio = ratio;
            rep.max_log_ratio_at = n;
        }
        if (h > rep.max_height) {
            rep.max_height = h;
            rep.max_height_at = n;
        }
    }
    return rep;
}

}  // namespace sparse_smooth::cyclotomic
