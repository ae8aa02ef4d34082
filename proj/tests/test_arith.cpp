#include <doctest.h>

#include <random>
#include <numeric>
#include <thread>

#include "oracles.hpp"
#include "sparse_smooth/arith.hpp"

using namespace sparse_smooth;
using namespace sparse_smooth::arith;

namespace {

ArbInt reassemble_naive(const Factorization& f) {
    ArbInt v = f.cofactor;
    for (const auto& pp : f.factors)
        for (unsigned e = 0; e < pp.exponent; ++e) v *= pp.prime;
    return v;
}

void check_factorization(const ArbInt& n, const Factorization& f) {
    CHECK(reassemble_naive(f) == n);
    CHECK(f.reassemble() == n);
    CHECK(f.complete == (f.cofactor == 1));
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
        CHECK(is_prime(f.factors[i].prime));
        CHECK(f.factors[i].exponent >= 1);
        if (i) CHECK(f.factors[i - 1].prime < f.factors[i].prime);
    }
}

}  // namespace

TEST_SUITE("arith") {

TEST_CASE("primality against trial division") {
    CHECK(is_prime(ArbInt(2)));
    CHECK(is_prime(ArbInt(331)));
    CHECK_FALSE(is_prime(ArbInt(32769)));
    CHECK_FALSE(is_prime(ArbInt(0)));
    CHECK_FALSE(is_prime(ArbInt(1)));
    for (std::uint64_t n = 0; n < 20000; ++n) CHECK(is_prime_u64(n) == oracle::is_prime_naive(n));
    // strong pseudoprimes to several small bases
    for (std::uint64_t n : {2047ULL, 1373653ULL, 25326001ULL, 3215031751ULL, 2152302898747ULL, 3474749660383ULL,
                            341550071728321ULL, 3825123056546413051ULL})
        CHECK_FALSE(is_prime_u64(n));
    CHECK(is_prime_u64(18446744073709551557ULL));  // largest 64-bit prime
    CHECK_FALSE(is_prime_u64(18446744073709551615ULL));
    ArbInt m127 = 1;
    m127 <<= 127;
    m127 -= 1;
    CHECK(is_prime(m127));
    CHECK_FALSE(is_prime(m127 * 3));
}

TEST_CASE("sieve agrees with naive primes") {
    const auto ps = primes_up_to(5000);
    const auto ref = oracle::primes_naive(5000);
    REQUIRE(ps.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(ps[i] == ref[i]);
    const auto first = first_primes(10);
    CHECK(first.size() == 10);
    CHECK(first[9] == 29);
    CHECK(primes_up_to(1).size() == 0);
}

TEST_CASE("sieve is safe under concurrent readers") {
    std::vector<std::thread> ts;
    std::vector<std::size_t> counts(8);
    for (int i = 0; i < 8; ++i)
        ts.emplace_back([&, i] { counts[i] = primes_up_to(i % 2 ? 20'000'000 : 1'000'000).size(); });
    for (auto& t : ts) t.join();
    for (int i = 0; i < 8; ++i) CHECK(counts[i] == (i % 2 ? 1'270'607u : 78'498u));
}

TEST_CASE("factor examples") {
    const auto one = factor(ArbInt(1));
    CHECK(one.factors.empty());
    CHECK(one.complete);
    const auto f = factor(ArbInt(32769));
    REQUIRE(f.factors.size() == 3);
    CHECK(f.factors[0].prime == 3);
    CHECK(f.factors[0].exponent == 2);
    CHECK(f.factors[1].prime == 11);
    CHECK(f.factors[2].prime == 331);
    CHECK(f.complete);
    CHECK(f.largest_prime() == 331);
    CHECK_THROWS_AS(factor(ArbInt(0)), std::invalid_argument);
}

TEST_CASE("factor round trip against trial division") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 3000; ++i) {
        const std::uint64_t n = 1 + rng() % 10'000'000'000ULL;
        const auto f = factor(from_u64(n));
        check_factorization(from_u64(n), f);
        REQUIRE(f.complete);
        const auto ref = oracle::factor_naive(n);
        REQUIRE(ref.size() == f.factors.size());
        std::size_t i2 = 0;
        for (const auto& [p, e] : ref) {
            CHECK(f.factors[i2].prime == from_u64(p));
            CHECK(f.factors[i2].exponent == e);
            ++i2;
        }
    }
}

TEST_CASE("rho splits semiprimes and perfect powers") {
    const ArbInt p("1000000007"), q("998244353"), r("4294967311");
    check_factorization(p * q, factor(p * q));
    CHECK(factor(p * q).complete);
    const ArbInt big = p * q * r * r;
    const auto f = factor(big);
    check_factorization(big, f);
    CHECK(f.complete);
    ArbInt pw;
    mpz_pow_ui(pw.get_mpz_t(), r.get_mpz_t(), 7);
    const auto g = factor(pw);
    REQUIRE(g.factors.size() == 1);
    CHECK(g.factors[0].exponent == 7);
    // two 40-bit primes past the trial bound, split by rho in machine words
    const ArbInt a("1099511627791"), b("1099511628401");
    REQUIRE(is_prime(a));
    REQUIRE(is_prime(b));
    const auto h = factor(a * b);
    CHECK(h.complete);
    check_factorization(a * b, h);
}

TEST_CASE("budget exhaustion is reported in-band") {
    const ArbInt p("170141183460469231731687303715884105727");  // 2^127 - 1
    const ArbInt q("618970019642690137449562111");              // 2^89 - 1
    FactorEffort tiny;
    tiny.rho_iterations = 64;
    tiny.rho_attempts = 1;
    const auto f = factor(p * q * 9, tiny);
    check_factorization(p * q * 9, f);
    CHECK_FALSE(f.complete);
    CHECK(f.cofactor == p * q);
    CHECK(f.largest_prime() == 3);
}

TEST_CASE("merge") {
    std::vector<Factorization> parts{factor(ArbInt(12)), factor(ArbInt(45)), factor(ArbInt(7))};
    const auto m = merge(parts);
    check_factorization(ArbInt(12 * 45 * 7), m);
    CHECK(m.complete);
    REQUIRE(m.factors.size() == 4);
    CHECK(m.factors[1].prime == 3);
    CHECK(m.factors[1].exponent == 3);
}

TEST_CASE("smooth_part") {
    auto s = smooth_part(ArbInt(1), ArbInt(2));
    CHECK(s.smooth == 1);
    CHECK(s.rough == 1);
    s = smooth_part(ArbInt(32769), ArbInt(331));
    CHECK(s.smooth == 32769);
    CHECK(s.rough == 1);
    s = smooth_part(ArbInt(32769), ArbInt(330));
    CHECK(s.smooth == 99);
    CHECK(s.rough == 331);
    const auto lp = oracle::lpf_table(20000);
    for (std::uint64_t n = 1; n <= 20000; n += 7) {
        for (std::uint64_t y : {2ULL, 3ULL, 10ULL, 97ULL, 150ULL}) {
            const auto sp = smooth_part(from_u64(n), from_u64(y));
            CHECK(sp.smooth * sp.rough == from_u64(n));
            for (auto p : oracle::primes_naive(y)) CHECK(mpz_divisible_ui_p(sp.rough.get_mpz_t(), p) == 0);
            CHECK(is_smooth(from_u64(n), from_u64(y)) == (lp[n] <= y));
            CHECK(is_smooth_u64(n, y) == (lp[n] <= y));
            CHECK((sp.rough == 1) == (lp[n] <= y));
        }
    }
    // a smoothness bound above the sieve ceiling falls back to factoring
    const ArbInt big = ArbInt("1099511627791") * 9;
    CHECK(is_smooth(big, ArbInt("1099511627791")));
    CHECK_FALSE(is_smooth(big, ArbInt("1099511627790")));
}

TEST_CASE("odd primorial, phi, tau") {
    CHECK(odd_primorial(2).k == 3);
    CHECK(odd_primorial(4).k == 105);
    CHECK(odd_primorial(6).k == 15015);
    CHECK(odd_primorial(6).largest_prime == 13);
    CHECK_THROWS_AS(odd_primorial(1), std::invalid_argument);
    for (unsigned r = 2; r <= 12; ++r) {
        const auto op = odd_primorial(r);
        const auto f = factor(op.k);
        CHECK(f.factors.size() == r - 1);
        for (const auto& pp : f.factors) CHECK(pp.exponent == 1);
        CHECK(mpz_odd_p(op.k.get_mpz_t()));
    }
    CHECK(euler_phi(factor(ArbInt(1))) == 1);
    CHECK(euler_phi(factor(ArbInt(105))) == 48);
    CHECK(euler_phi(factor(ArbInt(15015))) == 5760);
    CHECK(tau(factor(ArbInt(1))) == 1);
    CHECK(tau(factor(ArbInt(12))) == 6);
    CHECK(tau(factor(ArbInt(105))) == 8);
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        std::uint64_t phi = 0, t = 0;
        for (std::uint64_t d = 1; d <= n; ++d) {
            if (std::gcd(d, n) == 1) ++phi;
            if (n % d == 0) ++t;
        }
        const auto f = factor(from_u64(n));
        CHECK(euler_phi(f) == from_u64(phi));
        CHECK(tau(f) == from_u64(t));
    }
    Factorization partial;
    partial.complete = false;
    partial.cofactor = 77;
    CHECK_THROWS_AS(euler_phi(partial), std::invalid_argument);
    CHECK_THROWS_AS(tau(partial), std::invalid_argument);
}

TEST_CASE("mertens product") {
    CHECK(mertens_product(2).product == doctest::Approx(0.5));
    CHECK(mertens_product(10).product == doctest::Approx(8.0 / 35.0).epsilon(1e-14));
    const auto m = mertens_product(1'000'000);
    CHECK(m.ratio >= 0.95);
    CHECK(m.ratio <= 1.05);
    CHECK_THROWS_AS(mertens_product(1), std::invalid_argument);
}

}
