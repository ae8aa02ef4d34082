#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparse_smooth/types.hpp"

namespace sparse_smooth::characters {

inline constexpr unsigned kMaxModulusExp = 62;

/// Character of (Z / 2^j)^* indexed by its values on the generators -1 and 5:
/// chi(-1) = (-1)^sign_part, chi(5) = e(power_part / 2^(j-2)).
struct CharacterIndex {
    unsigned modulus_exp = 3;
    unsigned sign_part = 0;
    std::uint64_t power_part = 0;

    bool principal() const { return sign_part == 0 && power_part == 0; }
    bool operator==(const CharacterIndex&) const = default;
};

/// Zero, or e(root_exp / 2^(j-1)).
struct CharValue {
    bool zero = false;
    std::uint64_t root_exp = 0;
    bool operator==(const CharValue&) const = default;
};

struct UnitLog {
    unsigned epsilon = 0;   // u = (-1)^epsilon * 5^ind mod 2^j
    std::uint64_t ind = 0;  // in [0, 2^(j-2))
};

std::uint64_t group_order(unsigned modulus_exp);  // 2^(j-1)

/// Odd u (reduced mod 2^j first), j >= 3. Bit-by-bit discrete log base 5.
UnitLog unit_decompose(std::uint64_t u, unsigned modulus_exp);

/// Inverse of odd w modulo 2^j.
std::uint64_t inverse_mod_pow2(std::uint64_t w, unsigned modulus_exp);

CharValue char_eval(const CharacterIndex& chi, std::uint64_t u);
CharValue char_eval(const CharacterIndex& chi, const ArbInt& u);
CharValue char_eval_log(const CharacterIndex& chi, const UnitLog& log);

CharValue multiply(const CharValue& a, const CharValue& b, unsigned modulus_exp);
CharValue conjugate(const CharValue& a, unsigned modulus_exp);

/// Enumerates all 2^(j-1) characters, principal first.
std::vector<CharacterIndex> all_characters(unsigned modulus_exp);

/// Exact element of Z[zeta], zeta = e(1 / 2^e), in the power basis
/// 1, zeta, ..., zeta^(h-1) with h = 2^(e-1) (zeta^h = -1).
class RootSum {
public:
    explicit RootSum(unsigned root_order_exp);

    unsigned root_order_exp() const { return e_; }
    std::span<const std::int64_t> coeffs() const { return c_; }

    void add_root(std::uint64_t root_exp, std::int64_t count = 1);
    RootSum& operator+=(const RootSum& o);
    RootSum operator*(const RootSum& o) const;
    RootSum rotated(std::uint64_t root_exp) const;  // times zeta^root_exp
    RootSum conj() const;

    /// The value if it is a rational integer.
    std::optional<std::int64_t> as_integer() const;
    bool is_zero() const;
    std::complex<double> to_complex() const;

private:
    unsigned e_;
    std::vector<std::int64_t> c_;
};

/// sum over all characters chi(u) mod 2^j, exactly: 2^(j-1) if u == 1 mod 2^j,
/// else 0. Throws for even u or j outside [3, 24].
std::int64_t orthogonality_sum(const ArbInt& u, unsigned modulus_exp);

struct ShortSum {
    RootSum exact;
    std::complex<double> value;
};

/// sum_{k < 2^(n0-m)} chi(2^(n0-m) s + k), characters mod 2^n0.
ShortSum short_char_sum(const CharacterIndex& chi, std::uint64_t s, unsigned n0, unsigned m);

struct ScanRow {
    CharacterIndex chi;
    double abs_sum = 0;
    double bound = 0;  // 2^(n0-m) / n0^2
    double ratio = 0;
};

struct ScanReport {
    unsigned n0 = 0, m = 0;
    std::uint64_t s = 0;
    std::int64_t principal_sum = 0;        // exact
    bool full_period_sums_vanish = true;   // every nontrivial chi sums to 0 over all residues
    std::vector<ScanRow> rows;             // nontrivial characters, index order
    double max_ratio = 0;
    CharacterIndex argmax{};
};

/// Short sums for every character mod 2^n0 (n0 <= 20), threads partitioning
/// the character index space; output is identical for any thread count.
ScanReport scan_short_sums(unsigned n0, unsigned m, std::uint64_t s, unsigned threads = 0);

struct IdentitySample {
    std::uint64_t k = 0;
    std::uint64_t brute = 0;
    double via_characters = 0;
    double rel_error = 0;
    std::optional<bool> exact_match;  // exact Z[zeta] check, when n0 is small enough
};

struct PrescribedCount {
    unsigned n = 0;
    double a_param = 0;
    unsigned n0 = 0, m = 0;
    std::uint64_t s = 0;
    std::uint64_t y = 0;
    std::uint64_t w_lo = 0, w_hi = 0;  // W lies in (w_lo, w_hi]
    std::uint64_t w_size = 0;
    std::vector<std::uint64_t> t;      // T(k), k < 2^(n0-m)
    std::uint64_t total = 0;
    double main_term = 0;              // (#W)^2 / 2^(m-1), principal term summed over every k
    double total_over_main = 0;
    double odd_main_term = 0;          // (#W)^2 / 2^m: even targets receive no products
    double total_over_odd_main = 0;
    std::vector<IdentitySample> samples;
    bool identity_ok = true;
};

inline constexpr unsigned kMaxSurveyBitsForW = 40;
inline constexpr double kIdentityRelTolerance = 1e-6;

/// T(k) for a caller-supplied multiset W of odd integers, by counting
/// residue-class pairs, plus the character-sum expression at `sample_ks`.
PrescribedCount count_products(std::span<const std::uint64_t> w, unsigned n0, unsigned m, std::uint64_t s,
                               std::span<const std::uint64_t> sample_ks);

/// W = odd floor(n^A)-smooth integers in (2^((n-1)/2), 2^(n/2)], sigma read
/// most significant bit first. Samples 8 evenly spaced k values.
PrescribedCount count_prescribed_products(unsigned n, double a_param, unsigned n0, unsigned m,
                                          const std::string& sigma);

}  // namespace sparse_smooth::characters
