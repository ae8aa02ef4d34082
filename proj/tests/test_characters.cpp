#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "sparse_smooth/characters.hpp"
#include "sparse_smooth/smoothcount.hpp"

using namespace sparse_smooth;
using namespace sparse_smooth::characters;

namespace {

std::complex<double> value_of(const CharValue& v, unsigned j) {
    if (v.zero) return 0.0;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(v.root_exp) /
                               static_cast<double>(group_order(j)));
}

}  // namespace

TEST_SUITE("characters") {

TEST_CASE("unit decomposition") {
    CHECK(unit_decompose(1, 5).epsilon == 0);
    CHECK(unit_decompose(1, 5).ind == 0);
    CHECK(unit_decompose(5, 5).ind == 1);
    CHECK(unit_decompose(5, 5).epsilon == 0);
    CHECK(unit_decompose(31, 5).epsilon == 1);
    CHECK(unit_decompose(31, 5).ind == 0);
    CHECK_THROWS_AS(unit_decompose(4, 5), std::invalid_argument);
    for (unsigned j = 3; j <= 12; ++j)
        for (std::uint64_t u = 1; u < (1ULL << j); u += 2) {
            const auto lg = unit_decompose(u, j);
            const auto [eps, ind] = oracle::unit_log_naive(u, j);
            CHECK(lg.epsilon == eps);
            CHECK(lg.ind == ind);
        }
    // large modulus: reassemble (-1)^eps 5^ind
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t u = rng() | 1;
        const auto lg = unit_decompose(u, 62);
        ArbInt v;
        mpz_powm_ui(v.get_mpz_t(), ArbInt(5).get_mpz_t(), lg.ind, ArbInt(ArbInt(1) << 62).get_mpz_t());
        if (lg.epsilon) v = (ArbInt(1) << 62) - v;
        CHECK(v == from_u64(u & ((1ULL << 62) - 1)));
    }
}

TEST_CASE("modular inverse") {
    std::mt19937_64 rng(2);
    for (unsigned j : {3u, 8u, 14u, 32u, 62u})
        for (int i = 0; i < 500; ++i) {
            const std::uint64_t w = rng() | 1;
            const std::uint64_t mask = (1ULL << j) - 1;
            CHECK(((w * inverse_mod_pow2(w, j)) & mask) == 1);
        }
}

TEST_CASE("character values against a complex-number oracle") {
    for (unsigned j = 3; j <= 7; ++j) {
        const auto chars = all_characters(j);
        REQUIRE(chars.size() == group_order(j));
        CHECK(chars.front().principal());
        for (const auto& chi : chars)
            for (std::uint64_t u = 0; u < (1ULL << j) + 3; ++u) {
                const auto ref = oracle::char_naive(chi.sign_part, chi.power_part, u, j);
                const auto got = value_of(char_eval(chi, u), j);
                CHECK(std::abs(ref - got) < 1e-9);
            }
    }
    const CharacterIndex chi{10, 1, 77};
    CHECK(char_eval(chi, ArbInt("123456789012345678901")) == char_eval(chi, 123456789012345678901_mpz % 1024));
    CHECK(char_eval(chi, 1).root_exp == 0);
    CHECK(char_eval(chi, 6).zero);
}

TEST_CASE("multiplicativity and conjugate symmetry") {
    for (unsigned j = 3; j <= 8; ++j) {
        const std::uint64_t mod = 1ULL << j;
        for (const auto& chi : all_characters(j)) {
            for (std::uint64_t u = 1; u < mod; u += 2) {
                const auto cu = char_eval(chi, u);
                for (std::uint64_t v = 1; v < mod; v += 2)
                    CHECK(char_eval(chi, (u * v) % mod) == multiply(cu, char_eval(chi, v), j));
                CHECK(char_eval(chi, inverse_mod_pow2(u, j)) == conjugate(cu, j));
            }
        }
    }
    // the distinct indices give distinct characters
    for (unsigned j = 3; j <= 6; ++j) {
        std::set<std::vector<std::uint64_t>> tables;
        for (const auto& chi : all_characters(j)) {
            std::vector<std::uint64_t> row;
            for (std::uint64_t u = 1; u < (1ULL << j); u += 2) row.push_back(char_eval(chi, u).root_exp);
            tables.insert(row);
        }
        CHECK(tables.size() == group_order(j));
    }
}

TEST_CASE("orthogonality both ways") {
    CHECK(orthogonality_sum(ArbInt(1), 10) == 512);
    CHECK(orthogonality_sum(ArbInt(3), 10) == 0);
    CHECK(orthogonality_sum(ArbInt(1 + 1024), 10) == 512);
    CHECK_THROWS_AS(orthogonality_sum(ArbInt(2), 10), std::invalid_argument);
    for (unsigned j = 3; j <= 9; ++j) {
        for (std::uint64_t u = 1; u < (1ULL << j); u += 2) {
            RootSum s(j - 1);
            for (const auto& chi : all_characters(j)) s.add_root(char_eval(chi, u).root_exp);
            const auto v = s.as_integer();
            REQUIRE(v.has_value());
            CHECK(*v == orthogonality_sum(from_u64(u), j));
        }
        for (const auto& chi : all_characters(j)) {
            RootSum s(j - 1);
            for (std::uint64_t u = 1; u < (1ULL << j); u += 2) s.add_root(char_eval(chi, u).root_exp);
            CHECK(s.is_zero() == !chi.principal());
        }
    }
}

TEST_CASE("RootSum arithmetic") {
    RootSum a(4), b(4);  // zeta = e(1/16), h = 8
    a.add_root(3);
    a.add_root(9, 2);  // zeta^9 = -zeta
    b.add_root(5);
    const auto p = a * b;
    const auto direct = a.to_complex() * b.to_complex();
    CHECK(std::abs(p.to_complex() - direct) < 1e-12);
    CHECK(std::abs(a.conj().to_complex() - std::conj(a.to_complex())) < 1e-12);
    CHECK(std::abs(a.rotated(7).to_complex() - a.to_complex() * std::polar(1.0, 2 * std::numbers::pi * 7 / 16)) <
          1e-12);
    RootSum z(4);
    z.add_root(0);
    z.add_root(8);
    CHECK(z.is_zero());
}

TEST_CASE("short sums") {
    const auto chars = all_characters(10);
    const auto principal = short_char_sum(chars.front(), 3, 10, 4);
    CHECK(principal.exact.as_integer() == std::optional<std::int64_t>(32));
    for (std::size_t i = 1; i < chars.size(); i += 37) {
        const auto full = short_char_sum(chars[i], 0, 10, 0);
        CHECK(full.exact.is_zero());
        std::complex<double> ref = 0;
        for (std::uint64_t k = 0; k < 64; ++k)
            ref += oracle::char_naive(chars[i].sign_part, chars[i].power_part, 5 * 64 + k, 10);
        CHECK(std::abs(short_char_sum(chars[i], 5, 10, 4).value - ref) < 1e-9);
    }
}

TEST_CASE("scan is deterministic across thread counts") {
    const auto a = scan_short_sums(10, 3, 2, 1);
    const auto b = scan_short_sums(10, 3, 2, 5);
    CHECK(a.principal_sum == 64);
    CHECK(a.full_period_sums_vanish);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].abs_sum == b.rows[i].abs_sum);
        CHECK(a.rows[i].chi == b.rows[i].chi);
    }
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.argmax == b.argmax);
}

TEST_CASE("T(k) against the literal double loop") {
    const auto w = smoothcount::enumerate_smooth(724, 1024, 400, true);
    REQUIRE(w.size() == 106);
    for (auto [n0, m, s] : std::vector<std::tuple<unsigned, unsigned, std::uint64_t>>{
             {8, 3, 0}, {8, 3, 5}, {10, 2, 1}, {6, 0, 0}, {12, 5, 17}}) {
        std::vector<std::uint64_t> ks;
        for (std::uint64_t k = 0; k < (1ULL << (n0 - m)); k += 3) ks.push_back(k);
        const auto pc = count_products(w, n0, m, s, ks);
        CHECK(pc.t == oracle::t_naive(w, n0, m, s));
        CHECK(pc.identity_ok);
        for (const auto& smp : pc.samples) {
            CHECK(smp.rel_error <= kIdentityRelTolerance);
            if (n0 <= 10) CHECK(smp.exact_match == std::optional<bool>(true));
        }
    }
    const auto all = count_products(w, 9, 0, 0, {});
    CHECK(all.total == 106 * 106);
    const std::vector<std::uint64_t> single{77};
    const auto one = count_products(single, 8, 0, 0, {});
    std::uint64_t nonzero = 0;
    for (auto t : one.t) nonzero += t != 0;
    CHECK(nonzero == 1);
    CHECK(one.t[(77 * 77) % 256] == 1);
}

TEST_CASE("prescribed products instance") {
    const auto pc = count_prescribed_products(20, 2.0, 8, 3, "000");
    CHECK(pc.y == 400);
    CHECK(pc.w_size == 106);
    CHECK(pc.samples.size() == 8);
    CHECK(pc.identity_ok);
    CHECK(pc.main_term == doctest::Approx(106.0 * 106.0 / 4.0));
    CHECK(pc.odd_main_term == doctest::Approx(106.0 * 106.0 / 8.0));
    const auto m0 = count_prescribed_products(20, 2.0, 8, 0, "");
    CHECK(m0.total == m0.w_size * m0.w_size);
    CHECK_THROWS_AS(count_prescribed_products(41, 2.0, 8, 3, "000"), std::invalid_argument);
    CHECK_THROWS_AS(count_prescribed_products(20, 2.0, 8, 3, "00"), std::invalid_argument);
    CHECK_THROWS_AS(count_prescribed_products(20, 2.0, 8, 3, "0a0"), std::invalid_argument);
}

}
