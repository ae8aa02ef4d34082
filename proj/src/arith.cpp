#include "sparse_smooth/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sparse_smooth::arith {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

std::vector<std::uint32_t> sieve(u64 limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> primes;
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

struct SieveState {
    std::mutex mu;
    std::shared_ptr<const std::vector<std::uint32_t>> table;
    u64 extent = 0;
};

SieveState& sieve_state() {
    static SieveState s;
    return s;
}

std::pair<std::shared_ptr<const std::vector<std::uint32_t>>, u64> snapshot(u64 bound) {
    if (bound > 0xFFFFFFFFull) throw std::invalid_argument("primes_up_to: bound exceeds 2^32");
    auto& s = sieve_state();
    std::lock_guard lock(s.mu);
    if (!s.table || s.extent < bound) {
        const u64 target = std::min<u64>(std::max(bound, s.table ? 2 * s.extent : sieve_limit()), 0xFFFFFFFFull);
        s.table = std::make_shared<const std::vector<std::uint32_t>>(sieve(target));
        s.extent = target;
    }
    return {s.table, s.extent};
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

// splitmix64: fixed seed so rho increments are reproducible run to run.
struct SplitMix {
    u64 state = 0x5eed5eed5eedULL;
    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

// Brent's cycle detection with batched gcds. Returns 0 on failure.
u64 rho_brent_u64(u64 n, u64 c, u64 max_iter) {
    if (n % 2 == 0) return 2;
    constexpr u64 batch = 128;
    u64 y = 2, x = y, ys = y, q = 1, g = 1, r = 1, iters = 0;
    auto f = [&](u64 v) { return static_cast<u64>((static_cast<u128>(v) * v + c) % n); };
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = f(y);
        u64 k = 0;
        while (k < r && g == 1) {
            ys = y;
            const u64 lim = std::min(batch, r - k);
            for (u64 i = 0; i < lim; ++i) {
                y = f(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = gcd_u64(q, n);
            k += lim;
            iters += lim;
        }
        if (iters > max_iter && g == 1) return 0;
        r <<= 1;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd_u64(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return (g == n) ? 0 : g;
}

ArbInt rho_brent_mpz(const ArbInt& n, const ArbInt& c, u64 max_iter) {
    constexpr u64 batch = 128;
    ArbInt y = 2, x, ys, q = 1, g = 1, t;
    u64 r = 1, iters = 0;
    auto f = [&](ArbInt& v) {
        v = v * v + c;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) f(y);
        u64 k = 0;
        while (k < r && g == 1) {
            ys = y;
            const u64 lim = std::min(batch, r - k);
            for (u64 i = 0; i < lim; ++i) {
                f(y);
                t = x - y;
                q *= t;
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += lim;
            iters += lim;
        }
        if (iters > max_iter && g == 1) return 0;
        r <<= 1;
    }
    if (g == n) {
        do {
            f(ys);
            t = x - ys;
            mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return (g == n) ? ArbInt(0) : g;
}

// Nontrivial divisor of composite n, or 0 if the budget ran out.
ArbInt find_divisor(const ArbInt& n, const FactorEffort& effort, SplitMix& rng) {
    // Perfect powers defeat rho's random-walk assumption; peel them first.
    const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (unsigned e = 2; e <= bits; ++e) {
        ArbInt root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) return root;
    }
    for (unsigned a = 0; a < effort.rho_attempts; ++a) {
        if (fits_u64(n)) {
            const u64 nn = to_u64(n);
            const u64 c = 1 + rng.next() % (nn - 1);
            if (u64 d = rho_brent_u64(nn, c, effort.rho_iterations); d > 1 && d < nn) return from_u64(d);
        } else {
            const ArbInt c = from_u64(1 + rng.next() % 0xFFFFFFFFull);
            ArbInt d = rho_brent_mpz(n, c, effort.rho_iterations);
            if (d > 1 && d < n) return d;
        }
    }
    return 0;
}

void normalize(Factorization& f) {
    std::sort(f.factors.begin(), f.factors.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
    std::vector<PrimePower> out;
    for (auto& pp : f.factors) {
        if (!out.empty() && out.back().prime == pp.prime) out.back().exponent += pp.exponent;
        else out.push_back(pp);
    }
    f.factors = std::move(out);
    f.complete = (f.cofactor == 1);
}

}  // namespace

ArbInt Factorization::reassemble() const {
    ArbInt r = cofactor;
    for (const auto& pp : factors) {
        ArbInt pe;
        mpz_pow_ui(pe.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
        r *= pe;
    }
    return r;
}

ArbInt Factorization::largest_prime() const { return factors.empty() ? ArbInt(1) : factors.back().prime; }

std::uint64_t sieve_limit() {
    if (const char* env = std::getenv("SPARSE_SMOOTH_SIEVE_LIMIT")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v >= 2 && v <= 0xFFFFFFFFull) return v;
    }
    return kDefaultSieveLimit;
}

PrimeList primes_up_to(std::uint64_t bound) {
    auto [table, extent] = snapshot(bound);
    const auto it = std::upper_bound(table->begin(), table->end(), bound);
    return PrimeList(table, static_cast<std::size_t>(it - table->begin()));
}

PrimeList first_primes(std::size_t count) {
    // p_n < n (ln n + ln ln n) for n >= 6
    const double n = static_cast<double>(std::max<std::size_t>(count, 6));
    const auto bound = static_cast<u64>(n * (std::log(n) + std::log(std::log(n)))) + 16;
    PrimeList all = primes_up_to(bound);
    if (all.size() < count) throw std::logic_error("first_primes: prime bound estimate too small");
    all.count_ = count;
    return all;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    static constexpr u64 bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : bases) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : bases) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned i = 1; i < s && witness; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) witness = false;
        }
        if (witness) return false;
    }
    return true;
}

bool is_prime(const ArbInt& n) {
    if (sgn(n) < 0) throw std::invalid_argument("is_prime: n must be non-negative");
    if (fits_u64(n)) return is_prime_u64(to_u64(n));
    return mpz_probab_prime_p(n.get_mpz_t(), 64) != 0;
}

Factorization factor(const ArbInt& n, const FactorEffort& effort) {
    if (n < 1) throw std::invalid_argument("factor: n must be >= 1");
    Factorization f;
    ArbInt rest = n;

    const PrimeList small = primes_up_to(std::max<u64>(effort.trial_bound, 2));
    for (std::uint32_t p : small.primes()) {
        if (rest == 1) break;
        if (ArbInt(p) * p > rest) break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        }
        if (e) f.factors.push_back({ArbInt(p), e});
    }

    SplitMix rng;
    std::vector<ArbInt> pending;
    if (rest > 1) pending.push_back(rest);
    while (!pending.empty()) {
        ArbInt m = std::move(pending.back());
        pending.pop_back();
        if (m == 1) continue;
        if (is_prime(m)) {
            f.factors.push_back({m, 1});
            continue;
        }
        ArbInt d = find_divisor(m, effort, rng);
        if (d == 0) {
            f.cofactor *= m;
            continue;
        }
        ArbInt q = m / d;
        pending.push_back(std::move(d));
        pending.push_back(std::move(q));
    }
    normalize(f);
    return f;
}

Factorization merge(std::span<const Factorization> parts) {
    Factorization out;
    for (const auto& p : parts) {
        out.factors.insert(out.factors.end(), p.factors.begin(), p.factors.end());
        out.cofactor *= p.cofactor;
    }
    normalize(out);
    return out;
}

SmoothSplit smooth_part(const ArbInt& n, const ArbInt& y) {
    if (n < 1) throw std::invalid_argument("smooth_part: n must be >= 1");
    if (y < 2) throw std::invalid_argument("smooth_part: y must be >= 2");

    SmoothSplit out{1, n};
    if (n <= y) return {n, 1};

    if (y <= sieve_limit()) {
        const PrimeList ps = primes_up_to(to_u64(y));
        ArbInt& rest = out.rough;
        for (std::uint32_t p : ps.primes()) {
            if (ArbInt(p) * p > rest) break;
            if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
            do {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                out.smooth *= p;
            } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
        }
        // Either rest == 1, rest is a prime (no factor up to sqrt), or every
        // prime factor of rest exceeds y.
        if (rest > 1 && rest <= y) {
            out.smooth *= rest;
            rest = 1;
        }
        return out;
    }

    const Factorization f = factor(n);
    if (!f.complete)
        throw std::runtime_error("smooth_part: y beyond the sieve and n could not be fully factored");
    for (const auto& pp : f.factors) {
        ArbInt pe;
        mpz_pow_ui(pe.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
        if (pp.prime <= y) {
            out.smooth *= pe;
            out.rough /= pe;
        }
    }
    return out;
}

bool is_smooth(const ArbInt& n, const ArbInt& y) { return smooth_part(n, y).rough == 1; }

bool is_smooth_u64(std::uint64_t n, std::uint64_t y) {
    if (n == 0) throw std::invalid_argument("is_smooth_u64: n must be >= 1");
    if (n <= y) return true;
    const PrimeList ps = primes_up_to(std::min<u64>(y, static_cast<u64>(std::sqrt(static_cast<double>(n))) + 1));
    for (std::uint32_t p : ps.primes()) {
        if (static_cast<u128>(p) * p > n) break;
        while (n % p == 0) n /= p;
        if (n <= y) return true;
    }
    return n <= y;
}

OddPrimorial odd_primorial(unsigned r) {
    if (r < 2) throw std::invalid_argument("odd_primorial: r must be >= 2");
    const PrimeList ps = first_primes(r);
    OddPrimorial out{r, 1, ps[r - 1]};
    for (std::size_t i = 1; i < r; ++i) out.k *= ps[i];
    return out;
}

ArbInt euler_phi(const Factorization& f) {
    if (!f.complete) throw std::invalid_argument("euler_phi: factorization is incomplete");
    ArbInt r = 1;
    for (const auto& pp : f.factors) {
        ArbInt pe;
        mpz_pow_ui(pe.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent - 1);
        r *= pe * (pp.prime - 1);
    }
    return r;
}

ArbInt tau(const Factorization& f) {
    if (!f.complete) throw std::invalid_argument("tau: factorization is incomplete");
    ArbInt r = 1;
    for (const auto& pp : f.factors) r *= pp.exponent + 1;
    return r;
}

MertensResult mertens_product(std::uint64_t x) {
    if (x < 2) throw std::invalid_argument("mertens_product: x must be >= 2");
    const PrimeList ps = primes_up_to(x);
    long double prod = 1.0L;
    for (std::uint32_t p : ps.primes()) prod *= 1.0L - 1.0L / p;
    const long double expected =
        std::exp(-static_cast<long double>(std::numbers::egamma)) / std::log(static_cast<long double>(x));
    return {static_cast<double>(prod), static_cast<double>(prod / expected)};
}

}  // namespace sparse_smooth::arith
