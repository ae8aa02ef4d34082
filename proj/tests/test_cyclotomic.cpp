#include <doctest.h>

#include <thread>

#include "oracles.hpp"
#include "sparse_smooth/cyclotomic.hpp"

using namespace sparse_smooth;
using namespace sparse_smooth::cyclotomic;

namespace {

ArbInt pow2(unsigned long k) {
    ArbInt v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, k);
    return v;
}

}  // namespace

TEST_SUITE("cyclotomic") {

TEST_CASE("small polynomials") {
    CHECK(cyclotomic_poly(1).coeffs == std::vector<std::int64_t>{-1, 1});
    CHECK(cyclotomic_poly(2).coeffs == std::vector<std::int64_t>{1, 1});
    CHECK(cyclotomic_poly(6).coeffs == std::vector<std::int64_t>{1, -1, 1});
    CHECK(cyclotomic_poly(105).height == 2);
    for (std::uint64_t n = 1; n < 105; ++n) CHECK(cyclotomic_poly(n).height == 1);
    CHECK_THROWS_AS(cyclotomic_poly(0), std::invalid_argument);
    CHECK_THROWS_AS(cyclotomic_poly(kMaxIndex + 1), std::invalid_argument);
}

TEST_CASE("agrees with the division route") {
    oracle::DivisionCyclotomic ref;
    for (std::uint64_t n = 1; n <= 420; ++n) {
        const auto& r = ref.get(n);
        const auto p = cyclotomic_poly(n);
        REQUIRE(p.coeffs.size() == r.size());
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(p.coeffs[i] == r[i]);
    }
}

TEST_CASE("structural invariants") {
    std::vector<std::uint64_t> deg(10'001, 0);
    for (std::uint64_t n = 1; n <= 10'000; ++n) deg[n] = cyclotomic_poly(n).degree();
    for (std::uint64_t n = 1; n <= 10'000; ++n) {
        std::uint64_t s = 0;
        for (auto d : divisors(n)) s += deg[d];
        CHECK(s == n);
    }
    for (std::uint64_t n : {2ULL, 15ULL, 105ULL, 385ULL, 1155ULL, 3003ULL, 15015ULL, 4096ULL, 9690ULL}) {
        const auto p = cyclotomic_poly(n);
        CHECK(p.coeffs.back() == 1);
        CHECK((p.coeffs.front() == 1 || p.coeffs.front() == -1));
        const std::size_t L = p.coeffs.size();
        for (std::size_t i = 0; i < L; ++i) CHECK(p.coeffs[i] == p.coeffs[L - 1 - i]);
    }
    CHECK(cyclotomic_poly(15015).height == 23);
}

TEST_CASE("values at -2") {
    const std::vector<std::pair<std::uint64_t, const char*>> ref{
        {1, "-3"}, {3, "3"}, {5, "11"}, {7, "43"}, {15, "331"}, {21, "5419"}, {35, "24214051"},
        {105, "219397309247971"}};
    for (const auto& [d, v] : ref) CHECK(eval_at_minus_two(d) == ArbInt(v));
    CHECK(evaluate(cyclotomic_poly(12), 3) == 73);
}

TEST_CASE("product identity") {
    for (std::uint64_t k = 1; k <= 301; k += 2) CHECK(product_identity_holds(k));
    CHECK_THROWS_AS(product_identity_holds(4), std::invalid_argument);
}

TEST_CASE("fermat-like splits") {
    const auto f3 = fermat_like_factor(3);
    REQUIRE(f3.pieces.size() == 2);
    CHECK(f3.pieces[0].sign == -1);
    CHECK(f3.pieces[0].magnitude == 3);
    CHECK(f3.pieces[1].sign == 1);
    REQUIRE(f3.merged.factors.size() == 1);
    CHECK(f3.merged.factors[0].exponent == 2);

    const auto f15 = fermat_like_factor(15);
    CHECK(f15.merged.complete);
    CHECK(f15.merged.largest_prime() == 331);
    CHECK(f15.merged.reassemble() == pow2(15) + 1);

    const auto f105 = fermat_like_factor(105);
    CHECK(f105.merged.complete);
    CHECK(f105.merged.reassemble() == pow2(105) + 1);
    CHECK(f105.merged.largest_prime() == 1564921);
    for (const auto& p : f105.pieces) CHECK(p.magnitude < pow2(49));

    for (std::uint64_t k : {3ULL, 5ULL, 9ULL, 15ULL, 21ULL, 33ULL, 105ULL}) {
        const auto f = fermat_like_factor(k);
        REQUIRE(f.merged.complete);
        for (const auto& pp : f.merged.factors) {
            CHECK(pp.prime <= f.largest_piece);
            bool divides_piece = false;
            for (const auto& pc : f.pieces)
                divides_piece = divides_piece || mpz_divisible_p(pc.magnitude.get_mpz_t(), pp.prime.get_mpz_t());
            CHECK(divides_piece);
        }
    }
    const auto m15 = mersenne_like_factor(15);
    CHECK(m15.merged.reassemble() == pow2(15) - 1);
    CHECK(m15.merged.largest_prime() == 151);
    CHECK_THROWS_AS(fermat_like_factor(10), std::invalid_argument);
    CHECK_THROWS_AS(mersenne_like_factor(0), std::invalid_argument);
}

TEST_CASE("height bound") {
    const auto rep = height_bound_check(2000);
    CHECK(rep.all_hold);
    CHECK(rep.checked == 1999);
    CHECK(rep.max_height == 5);
    CHECK(rep.max_height_at == 1785);
    CHECK(cyclotomic_poly(385).height == 3);
    CHECK_THROWS_AS(height_bound_check(kMaxHeightScan + 1), std::invalid_argument);
}

TEST_CASE("cache under concurrent access") {
    CyclotomicCache cache;
    std::vector<std::thread> ts;
    for (int t = 0; t < 8; ++t)
        ts.emplace_back([&] {
            for (std::uint64_t n = 1; n <= 300; ++n) CHECK(cache.get(n)->index == n);
        });
    for (auto& t : ts) t.join();
    CHECK(cache.size() == 300);
}

}
