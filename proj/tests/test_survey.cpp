#include <doctest.h>

#include "oracles.hpp"
#include "sparse_smooth/smoothcount.hpp"
#include "sparse_smooth/survey.hpp"

using namespace sparse_smooth;
using namespace sparse_smooth::survey;

namespace {

struct Brute {
    std::uint64_t population = 0;
    unsigned max_zeros = 0;
    std::uint64_t argmax = 0;
};

std::uint64_t psi0(std::uint64_t x, std::uint64_t y) { return x ? smoothcount::psi_exact(x, y) : 0; }

Brute brute(unsigned n, std::uint64_t y) {
    Brute b;
    for (std::uint64_t v = (1ULL << (n - 1)) | 1; v < (1ULL << n); v += 2) {
        if (!oracle::smooth_naive(v, y)) continue;
        ++b.population;
        const unsigned z = n - static_cast<unsigned>(__builtin_popcountll(v));
        if (b.argmax == 0 || z > b.max_zeros) {
            b.max_zeros = z;
            b.argmax = v;
        }
    }
    return b;
}

}  // namespace

TEST_SUITE("survey") {

TEST_CASE("desk instances") {
    const auto r = survey_theorem1(16, 2.0, 0.05);
    CHECK(r.y == 256);
    CHECK(r.population == 3739);
    CHECK(r.max_zeros == 13);
    CHECK(r.argmax == 32785);
    CHECK(*r.predicted_zeros == doctest::Approx(4.6));
    CHECK(*r.claim_holds);
    const auto v = survey_theorem1(8, 3.0, 0.1);
    CHECK(v.y == 512);
    CHECK(v.population == 64);
    CHECK(v.max_zeros == 6);
    CHECK(v.argmax == 129);
    CHECK_THROWS_AS(survey_theorem1(16, 2.0, 0.0615), std::invalid_argument);
    CHECK_THROWS_AS(survey_theorem1(33, 2.0, 0.01), std::invalid_argument);
}

TEST_CASE("agrees with brute force and psi") {
    for (unsigned n = 2; n <= 18; ++n)
        for (std::uint64_t y : {3ULL, 7ULL, 30ULL, 200ULL}) {
            const auto r = survey_window(n, y);
            const auto b = brute(n, y);
            CHECK(r.population == b.population);
            CHECK(r.max_zeros == b.max_zeros);
            if (b.population) CHECK(r.argmax == b.argmax);
            std::uint64_t hist = 0;
            for (auto h : r.zero_histogram) hist += h;
            CHECK(hist == r.population);
            CHECK(r.max_zeros <= n - 1);
            // odd count via the halving bijection
            const std::uint64_t hi = (1ULL << n) - 1, lo = (1ULL << (n - 1)) - 1;
            const std::uint64_t all = psi0(hi, y) - psi0(lo, y);
            const std::uint64_t even = psi0(hi / 2, y) - psi0(lo / 2, y);
            CHECK(r.population == all - even);
        }
}

TEST_CASE("witness validity, monotone in y, thread independence") {
    unsigned prev = 0;
    for (std::uint64_t y : {5ULL, 17ULL, 100ULL, 484ULL, 5000ULL}) {
        const auto r = survey_window(22, y);
        REQUIRE(r.population > 0);
        CHECK(r.argmax % 2 == 1);
        CHECK((r.argmax >> 21) == 1);
        CHECK(oracle::smooth_naive(r.argmax, y));
        CHECK(22 - __builtin_popcountll(r.argmax) == static_cast<int>(r.max_zeros));
        CHECK(r.max_zeros >= prev);
        prev = r.max_zeros;
        const auto one = survey_window(22, y, 1);
        CHECK(one.population == r.population);
        CHECK(one.argmax == r.argmax);
        CHECK(one.zero_histogram == r.zero_histogram);
    }
}

TEST_CASE("binomial tail") {
    for (unsigned n = 10; n <= 200; ++n)
        for (int g = 1; g <= 10; ++g) CHECK(binomial_tail_check(n, 0.05 * g).holds);
    const auto half = binomial_tail_check(40, 0.5);
    CHECK(half.sum >= ArbInt(1) << 39);
    CHECK(half.log2_bound == doctest::Approx(40.0));
    const auto t = binomial_tail_check(60, 0.25);
    ArbInt ref = 0;
    for (unsigned k = 0; k <= 15; ++k) ref += oracle::binomial(60, k);
    CHECK(t.sum == ref);
    CHECK(t.holds);
    CHECK(binomial_tail_check(100, 0.1).holds);
    CHECK_THROWS_AS(binomial_tail_check(10, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(binomial_tail_check(10, 0.0), std::invalid_argument);
}

TEST_CASE("log binomial sum") {
    CHECK(log_binomial_sum_check(10).sum == doctest::Approx(38.01712280003918).epsilon(1e-12));
    const auto one = log_binomial_sum_check(1);
    CHECK(one.sum == 0.0);
    CHECK(one.half_n_sq == 0.5);
    CHECK(log_binomial_sum_check(10'000).deviation <= 2.0);
    CHECK(log_binomial_sum_check(10'000).holds);
}

TEST_CASE("lemma battery at reduced sizes") {
    LemmaBatteryConfig cfg;
    cfg.height_n_max = 500;
    cfg.subadditivity_pairs = 1000;
    cfg.log_binomial_n_max = 300;
    cfg.tau_n_max = 10'000;
    const auto checks = run_lemma_battery(cfg);
    CHECK(checks.size() == 7);
    for (const auto& c : checks) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
}

}
