#include "sparse_smooth/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "sparse_smooth/smoothcount.hpp"

namespace sparse_smooth::characters {

namespace {

using u64 = std::uint64_t;

u64 mask_of(unsigned j) { return (u64{1} << j) - 1; }

void check_modulus(unsigned j) {
    if (j < 3 || j > kMaxModulusExp)
        throw std::invalid_argument("characters: modulus exponent must lie in [3, " + std::to_string(kMaxModulusExp) + "]");
}

// floor(2^(t/2))
u64 floor_pow2_half(unsigned t) {
    if (t % 2 == 0) return u64{1} << (t / 2);
    ArbInt v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, t);
    mpz_sqrt(v.get_mpz_t(), v.get_mpz_t());
    return to_u64(v);
}

std::vector<std::complex<double>> root_table(unsigned e) {
    const u64 h = u64{1} << (e - 1);
    std::vector<std::complex<double>> t(h);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(u64{1} << e);
    for (u64 i = 0; i < h; ++i) t[i] = std::polar(1.0, step * static_cast<double>(i));
    return t;
}

std::complex<double> render(const RootSum& r, const std::vector<std::complex<double>>& table) {
    std::complex<double> acc = 0;
    const auto c = r.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) acc += static_cast<double>(c[i]) * table[i];
    return acc;
}

unsigned pick_threads(unsigned requested) {
    if (requested) return requested;
    return std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
}

}  // namespace

std::uint64_t group_order(unsigned modulus_exp) {
    check_modulus(modulus_exp);
    return u64{1} << (modulus_exp - 1);
}

UnitLog unit_decompose(std::uint64_t u, unsigned j) {
    check_modulus(j);
    if (u % 2 == 0) throw std::invalid_argument("unit_decompose: u must be odd");
    const u64 mask = mask_of(j);
    u &= mask;
    UnitLog out;
    if ((u & 3) == 3) {
        out.epsilon = 1;
        u = (0 - u) & mask;
    }
    // 5^(2^i) = 1 + 2^(i+2) * odd: bit i of ind is fixed by agreement mod 2^(i+3).
    u64 y = 1, g = 5;
    for (unsigned i = 0; i + 2 < j; ++i) {
        const u64 m = mask_of(i + 3);
        if ((y & m) != (u & m)) {
            y = (y * g) & mask;
            out.ind |= u64{1} << i;
        }
        g = (g * g) & mask;
    }
    return out;
}

std::uint64_t inverse_mod_pow2(std::uint64_t w, unsigned j) {
    check_modulus(j);
    if (w % 2 == 0) throw std::invalid_argument("inverse_mod_pow2: w must be odd");
    // Newton: each step doubles the number of correct low bits.
    u64 x = w;  // correct mod 2^3
    for (int i = 0; i < 6; ++i) x *= 2 - w * x;
    return x & mask_of(j);
}

CharValue char_eval_log(const CharacterIndex& chi, const UnitLog& lg) {
    const unsigned j = chi.modulus_exp;
    const u64 order = u64{1} << (j - 1);
    const u64 half = u64{1} << (j - 2);
    const u64 t = (static_cast<u64>(chi.sign_part & lg.epsilon) * half + 2 * (chi.power_part * lg.ind)) & (order - 1);
    return CharValue{false, t};
}

CharValue char_eval(const CharacterIndex& chi, std::uint64_t u) {
    check_modulus(chi.modulus_exp);
    if (u % 2 == 0) return CharValue{true, 0};
    return char_eval_log(chi, unit_decompose(u, chi.modulus_exp));
}

CharValue char_eval(const CharacterIndex& chi, const ArbInt& u) {
    if (sgn(u) < 0) throw std::invalid_argument("char_eval: u must be non-negative");
    const u64 low = mpz_getlimbn(u.get_mpz_t(), 0);
    return char_eval(chi, sgn(u) == 0 ? u64{0} : low);
}

CharValue multiply(const CharValue& a, const CharValue& b, unsigned j) {
    if (a.zero || b.zero) return CharValue{true, 0};
    return CharValue{false, (a.root_exp + b.root_exp) & mask_of(j - 1)};
}

CharValue conjugate(const CharValue& a, unsigned j) {
    if (a.zero) return a;
    return CharValue{false, (0 - a.root_exp) & mask_of(j - 1)};
}

std::vector<CharacterIndex> all_characters(unsigned j) {
    check_modulus(j);
    const u64 half = u64{1} << (j - 2);
    std::vector<CharacterIndex> out;
    out.reserve(2 * half);
    for (unsigned a = 0; a < 2; ++a)
        for (u64 b = 0; b < half; ++b) out.push_back(CharacterIndex{j, a, b});
    return out;
}

RootSum::RootSum(unsigned root_order_exp) : e_(root_order_exp) {
    if (e_ < 1 || e_ > 30) throw std::invalid_argument("RootSum: root order exponent out of range");
    c_.assign(std::size_t{1} << (e_ - 1), 0);
}

void RootSum::add_root(std::uint64_t root_exp, std::int64_t count) {
    const u64 h = c_.size();
    root_exp &= (2 * h - 1);
    if (root_exp < h) c_[root_exp] += count;
    else c_[root_exp - h] -= count;
}

RootSum& RootSum::operator+=(const RootSum& o) {
    if (o.e_ != e_) throw std::invalid_argument("RootSum: mismatched root orders");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

RootSum RootSum::operator*(const RootSum& o) const {
    if (o.e_ != e_) throw std::invalid_argument("RootSum: mismatched root orders");
    RootSum r(e_);
    const std::size_t h = c_.size();
    for (std::size_t i = 0; i < h; ++i) {
        if (!c_[i]) continue;
        for (std::size_t k = 0; k < h; ++k) {
            if (!o.c_[k]) continue;
            const std::size_t t = i + k;
            if (t < h) r.c_[t] += c_[i] * o.c_[k];
            else r.c_[t - h] -= c_[i] * o.c_[k];
        }
    }
    return r;
}

RootSum RootSum::rotated(std::uint64_t root_exp) const {
    RootSum r(e_);
    const std::size_t h = c_.size();
    for (std::size_t i = 0; i < h; ++i)
        if (c_[i]) r.add_root(i + root_exp, c_[i]);
    return r;
}

RootSum RootSum::conj() const {
    RootSum r(e_);
    const std::size_t h = c_.size();
    r.c_[0] = c_[0];
    for (std::size_t i = 1; i < h; ++i) r.c_[h - i] = -c_[i];
    return r;
}

std::optional<std::int64_t> RootSum::as_integer() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i]) return std::nullopt;
    return c_[0];
}

bool RootSum::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t v) { return v == 0; });
}

std::complex<double> RootSum::to_complex() const { return render(*this, root_table(e_)); }

std::int64_t orthogonality_sum(const ArbInt& u, unsigned j) {
    if (j < 3 || j > 24) throw std::invalid_argument("orthogonality_sum: modulus exponent must lie in [3, 24]");
    if (sgn(u) < 0 || mpz_even_p(u.get_mpz_t())) throw std::invalid_argument("orthogonality_sum: u must be odd");
    const u64 low = mpz_getlimbn(u.get_mpz_t(), 0) & mask_of(j);
    const UnitLog lg = unit_decompose(low, j);
    RootSum sum(j - 1);
    for (const auto& chi : all_characters(j)) sum.add_root(char_eval_log(chi, lg).root_exp);
    const auto v = sum.as_integer();
    if (!v) throw std::logic_error("orthogonality_sum: character sum is not a rational integer");
    return *v;
}

ShortSum short_char_sum(const CharacterIndex& chi, std::uint64_t s, unsigned n0, unsigned m) {
    check_modulus(n0);
    if (chi.modulus_exp != n0) throw std::invalid_argument("short_char_sum: character modulus differs from 2^n0");
    if (m >= n0) throw std::invalid_argument("short_char_sum: m must be below n0");
    if (m < 64 && s >= (u64{1} << m)) throw std::invalid_argument("short_char_sum: s must be below 2^m");
    if (n0 - m > 32) throw std::invalid_argument("short_char_sum: window 2^(n0-m) too long");
    const u64 len = u64{1} << (n0 - m);
    const u64 base = (s << (n0 - m)) & mask_of(n0);
    RootSum sum(n0 - 1);
    for (u64 k = 0; k < len; ++k) {
        const u64 arg = base + k;
        if (arg % 2 == 0) continue;
        sum.add_root(char_eval_log(chi, unit_decompose(arg, n0)).root_exp);
    }
    ShortSum out{sum, {}};
    out.value = sum.to_complex();
    return out;
}

ScanReport scan_short_sums(unsigned n0, unsigned m, std::uint64_t s, unsigned threads) {
    check_modulus(n0);
    if (n0 > 20) throw std::invalid_argument("scan_short_sums: n0 must be <= 20");
    if (m >= n0) throw std::invalid_argument("scan_short_sums: m must be below n0");
    if (s >= (u64{1} << m)) throw std::invalid_argument("scan_short_sums: s must be below 2^m");

    const u64 len = u64{1} << (n0 - m);
    const u64 base = s << (n0 - m);
    std::vector<UnitLog> window;  // logs of the odd arguments in the window
    for (u64 k = 0; k < len; ++k)
        if ((base + k) % 2) window.push_back(unit_decompose(base + k, n0));
    std::vector<UnitLog> units;  // logs of every unit mod 2^n0
    for (u64 u = 1; u < (u64{1} << n0); u += 2) units.push_back(unit_decompose(u, n0));

    const auto chars = all_characters(n0);
    const auto table = root_table(n0 - 1);
    const double bound = static_cast<double>(len) / (static_cast<double>(n0) * n0);

    ScanReport rep;
    rep.n0 = n0;
    rep.m = m;
    rep.s = s;
    std::vector<ScanRow> rows(chars.size());
    std::vector<char> vanish(chars.size(), 1);
    std::int64_t principal = 0;

    const unsigned workers = pick_threads(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < chars.size(); i += workers) {
                const auto& chi = chars[i];
                RootSum sum(n0 - 1);
                for (const auto& lg : window) sum.add_root(char_eval_log(chi, lg).root_exp);
                if (chi.principal()) {
                    principal = *sum.as_integer();
                    continue;
                }
                RootSum full(n0 - 1);
                for (const auto& lg : units) full.add_root(char_eval_log(chi, lg).root_exp);
                vanish[i] = full.is_zero();
                const double a = std::abs(render(sum, table));
                rows[i] = ScanRow{chi, a, bound, a / bound};
            }
        });
    }
    for (auto& t : pool) t.join();

    rep.principal_sum = principal;
    for (std::size_t i = 1; i < chars.size(); ++i) {
        rep.full_period_sums_vanish = rep.full_period_sums_vanish && vanish[i];
        if (rows[i].ratio > rep.max_ratio || i == 1) {
            rep.max_ratio = rows[i].ratio;
            rep.argmax = rows[i].chi;
        }
        rep.rows.push_back(rows[i]);
    }
    return rep;
}

PrescribedCount count_products(std::span<const std::uint64_t> w, unsigned n0, unsigned m, std::uint64_t s,
                               std::span<const std::uint64_t> sample_ks) {
    check_modulus(n0);
    if (n0 > 24) throw std::invalid_argument("count_products: n0 must be <= 24");
    if (m > n0) throw std::invalid_argument("count_products: m must be <= n0");
    if (s >= (u64{1} << m)) throw std::invalid_argument("count_products: s must be below 2^m");
    const u64 modulus = u64{1} << n0;
    const u64 mask = modulus - 1;
    const u64 len = u64{1} << (n0 - m);
    const u64 base = s << (n0 - m);

    PrescribedCount out;
    out.n0 = n0;
    out.m = m;
    out.s = s;
    out.w_size = w.size();

    std::vector<u64> hist(modulus, 0);
    for (u64 v : w) {
        if (v % 2 == 0) throw std::invalid_argument("count_products: W must contain odd integers only");
        ++hist[v & mask];
    }
    std::vector<u64> residues;
    for (u64 r = 1; r < modulus; r += 2)
        if (hist[r]) residues.push_back(r);
    std::vector<u64> inv(residues.size());
    for (std::size_t i = 0; i < residues.size(); ++i) inv[i] = inverse_mod_pow2(residues[i], n0);

    // T(t) = sum over residues r1 of H[r1] * H[t * r1^-1].
    out.t.assign(len, 0);
    for (u64 k = 0; k < len; ++k) {
        const u64 t = base + k;
        if (t % 2 == 0) continue;
        u64 acc = 0;
        for (std::size_t i = 0; i < residues.size(); ++i) acc += hist[residues[i]] * hist[(t * inv[i]) & mask];
        out.t[k] = acc;
        out.total += acc;
    }
    const double ws = static_cast<double>(w.size());
    out.main_term = 2.0 * ws * ws / std::ldexp(1.0, static_cast<int>(m));
    out.total_over_main = out.main_term > 0 ? static_cast<double>(out.total) / out.main_term : 0.0;
    out.odd_main_term = out.main_term / 2;
    out.total_over_odd_main = out.odd_main_term > 0 ? static_cast<double>(out.total) / out.odd_main_term : 0.0;

    if (sample_ks.empty()) return out;
    if (n0 > 16) throw std::invalid_argument("count_products: character identity check needs n0 <= 16");

    // S_chi = sum_w chi(w), exact; the identity uses conj(S_chi)^2.
    const auto chars = all_characters(n0);
    std::vector<UnitLog> logs(residues.size());
    for (std::size_t i = 0; i < residues.size(); ++i) logs[i] = unit_decompose(residues[i], n0);
    const auto table = root_table(n0 - 1);
    const bool exact = n0 <= 10;
    std::vector<std::complex<double>> sq(chars.size());
    std::vector<RootSum> sq_exact;
    for (std::size_t c = 0; c < chars.size(); ++c) {
        RootSum sum(n0 - 1);
        for (std::size_t i = 0; i < residues.size(); ++i)
            sum.add_root(char_eval_log(chars[c], logs[i]).root_exp, static_cast<std::int64_t>(hist[residues[i]]));
        const std::complex<double> cj = std::conj(render(sum, table));
        sq[c] = cj * cj;
        if (exact) {
            const RootSum cx = sum.conj();
            sq_exact.push_back(cx * cx);
        }
    }

    const double norm = std::ldexp(1.0, static_cast<int>(n0 - 1));
    for (u64 k : sample_ks) {
        if (k >= len) throw std::invalid_argument("count_products: sample k outside [0, 2^(n0-m))");
        const u64 t = base + k;
        IdentitySample smp;
        smp.k = k;
        smp.brute = out.t[k];
        if (t % 2 == 0) {
            smp.via_characters = 0.0;
            if (exact) smp.exact_match = (smp.brute == 0);
        } else {
            const UnitLog lg = unit_decompose(t, n0);
            std::complex<double> acc = 0;
            RootSum acc_exact(n0 - 1);
            for (std::size_t c = 0; c < chars.size(); ++c) {
                const u64 a = char_eval_log(chars[c], lg).root_exp;
                const std::complex<double> z = a < table.size() ? table[a] : -table[a - table.size()];
                acc += z * sq[c];
                if (exact) acc_exact += sq_exact[c].rotated(a);
            }
            smp.via_characters = acc.real() / norm;
            if (exact) {
                const auto v = acc_exact.as_integer();
                smp.exact_match = v && *v == static_cast<std::int64_t>(smp.brute) * static_cast<std::int64_t>(norm);
            }
        }
        smp.rel_error = std::fabs(static_cast<double>(smp.brute) - smp.via_characters) /
                        std::max(1.0, static_cast<double>(smp.brute));
        const bool ok = smp.rel_error <= kIdentityRelTolerance && smp.exact_match.value_or(true);
        out.identity_ok = out.identity_ok && ok;
        out.samples.push_back(smp);
    }
    return out;
}

PrescribedCount count_prescribed_products(unsigned n, double a_param, unsigned n0, unsigned m,
                                          const std::string& sigma) {
    if (n < 2 || n > kMaxSurveyBitsForW)
        throw std::invalid_argument("count_prescribed_products: n must lie in [2, " +
                                    std::to_string(kMaxSurveyBitsForW) + "]");
    if (!(a_param > 1.0)) throw std::invalid_argument("count_prescribed_products: A must exceed 1");
    if (sigma.size() != m) throw std::invalid_argument("count_prescribed_products: sigma must have length m");
    u64 s = 0;
    for (char c : sigma) {
        if (c != '0' && c != '1') throw std::invalid_argument("count_prescribed_products: sigma must be a bit string");
        s = 2 * s + static_cast<u64>(c - '0');
    }

    const u64 y = static_cast<u64>(std::floor(std::pow(static_cast<long double>(n), a_param)));
    const u64 lo = floor_pow2_half(n - 1);
    const u64 hi = floor_pow2_half(n);
    std::vector<u64> w;
    smoothcount::for_each_smooth(lo, hi, y, true, [&](u64 v) { w.push_back(v); });
    std::sort(w.begin(), w.end());

    const u64 len = u64{1} << (n0 - std::min(m, n0));
    std::vector<u64> ks;
    if (len <= 8) {
        for (u64 k = 0; k < len; ++k) ks.push_back(k);
    } else {
        for (u64 i = 0; i < 8; ++i) ks.push_back(i * (len / 8) + 1);
    }

    PrescribedCount out = count_products(w, n0, m, s, ks);
    out.n = n;
    out.a_param = a_param;
    out.y = y;
    out.w_lo = lo;
    out.w_hi = hi;
    return out;
}

}  // namespace sparse_smooth::characters
