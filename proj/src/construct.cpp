#include "sparse_smooth/construct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sparse_smooth/cyclotomic.hpp"
#include "sparse_smooth/digits.hpp"

namespace sparse_smooth::construct {

namespace {

double log_of(const ArbInt& v) {
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
}

// ln ln ln N, or nothing when it is not positive (N < e^e^e).
std::optional<double> log3(double log_n) {
    if (!(log_n > 1.0)) return std::nullopt;
    const double ll = std::log(log_n);
    if (!(ll > 1.0)) return std::nullopt;
    return std::log(ll);
}

std::optional<double> log_y(Kind kind, double alpha, double log_n) {
    const auto l3 = log3(log_n);
    if (!l3) return std::nullopt;
    switch (kind) {
        case Kind::theorem2:
            return std::pow(alpha, -0.5) * std::sqrt(log_n) / *l3;
        case Kind::theorem3:
            return std::pow(std::numbers::ln2, alpha / 2) * std::pow(log_n, 1.0 - alpha / 2) / *l3;
        case Kind::balanced:
            return 0.75 * log_n / *l3;
    }
    return std::nullopt;
}

std::uint64_t checked_k(const ArbInt& k) {
    if (!fits_u64(k)) throw std::invalid_argument("construction: k does not fit a machine word");
    return to_u64(k);
}

void fill_digits(ConstructionReport& rep) {
    const auto prof = digits::digit_profile(rep.value);
    rep.n_bits = prof.bit_length;
    rep.ones = prof.ones;
    rep.zeros = prof.zeros;
}

}  // namespace

std::string_view kind_name(Kind k) {
    switch (k) {
        case Kind::theorem2: return "theorem2";
        case Kind::theorem3: return "theorem3";
        case Kind::balanced: return "balanced";
    }
    return "unknown";
}

long double binomial_log_sum(std::uint64_t ell) {
    // ln C(ell, j) = lf[ell] - lf[j] - lf[ell - j]
    std::vector<long double> lf(ell + 1, 0.0L);
    for (std::uint64_t i = 2; i <= ell; ++i) lf[i] = lf[i - 1] + std::log(static_cast<long double>(i));
    long double sum = 0.0L;
    for (std::uint64_t j = 0; j <= ell; ++j) sum += lf[ell] - lf[j] - lf[ell - j];
    return sum;
}

ConstructionReport construct_power(Kind kind, double alpha, unsigned r, const ArbInt& k, std::uint64_t ell,
                                   const ConstructOptions& opts) {
    if (ell < 1) throw std::invalid_argument("construction: ell must be >= 1");
    const std::uint64_t kk = checked_k(k);
    if (kk % 2 == 0) throw std::invalid_argument("construction: k must be odd");

    ConstructionReport rep;
    rep.kind = kind;
    rep.alpha = alpha;
    rep.r = r;
    rep.k = k;
    rep.ell = static_cast<unsigned long>(ell);
    rep.degenerate = (ell == 1);

    ArbInt m;
    mpz_ui_pow_ui(m.get_mpz_t(), 2, kk);
    m += 1;
    mpz_pow_ui(rep.value.get_mpz_t(), m.get_mpz_t(), ell);
    fill_digits(rep);

    const long double lsum = binomial_log_sum(ell);
    rep.binomial_log_sum = static_cast<double>(lsum);
    rep.digit_ceiling = static_cast<std::uint64_t>(std::ceil(lsum / std::numbers::ln2_v<long double>)) + ell + 1;

    const double n = static_cast<double>(rep.n_bits);
    rep.sparsity_bound = kind == Kind::theorem3 ? std::pow(n, alpha) / (2.0 * std::numbers::ln2) : 0.5 * alpha * n;

    const double log_n = log_of(rep.value);
    rep.log_y_target = log_y(kind, alpha, log_n);

    if (opts.certify) {
        const auto f = cyclotomic::fermat_like_factor(kk, opts.effort);
        rep.smoothness_complete = f.merged.complete;
        rep.largest_prime_found = f.merged.largest_prime();
    }
    return rep;
}

ConstructionReport construct_theorem2(double alpha, unsigned r, const ConstructOptions& opts) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("construct_theorem2: alpha must lie in (0, 2)");
    if (r < 2) throw std::invalid_argument("construct_theorem2: r must be >= 2");
    if (r > opts.max_r) throw std::invalid_argument("construct_theorem2: r exceeds the powering guard");
    const auto prim = arith::odd_primorial(r);
    const long double beta = static_cast<long double>(alpha) * std::numbers::ln2_v<long double>;
    const long double ell = std::floor(beta * prim.k.get_d());
    if (ell < 1) throw std::invalid_argument("construct_theorem2: alpha * ln2 * k < 1 gives ell < 1");
    return construct_power(Kind::theorem2, alpha, r, prim.k, static_cast<std::uint64_t>(ell), opts);
}

ConstructionReport construct_theorem3(double alpha, unsigned r, const ConstructOptions& opts) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("construct_theorem3: alpha must lie in [0, 1]");
    if (r < 2) throw std::invalid_argument("construct_theorem3: r must be >= 2");
    if (r > opts.max_r) throw std::invalid_argument("construct_theorem3: r exceeds the powering guard");
    const auto prim = arith::odd_primorial(r);
    const long double beta = static_cast<long double>(alpha) / (2.0L - alpha);
    long double root = std::pow(static_cast<long double>(prim.k.get_d()), beta);
    // Snap values a rounding error away from an integer (exact cubes etc.).
    if (std::fabs(root - std::round(root)) < 1e-9L) root = std::round(root);
    const auto ell = static_cast<std::uint64_t>(std::floor(root));
    return construct_power(Kind::theorem3, alpha, r, prim.k, ell, opts);
}

ConstructionReport construct_balanced(unsigned r, const ConstructOptions& opts) {
    if (r < 2) throw std::invalid_argument("construct_balanced: r must be >= 2");
    if (r > opts.max_r) throw std::invalid_argument("construct_balanced: r exceeds the construction guard");
    const auto prim = arith::odd_primorial(r);
    const std::uint64_t k1 = checked_k(prim.k);
    const std::uint64_t k2 = k1 / 3;

    ConstructionReport rep;
    rep.kind = Kind::balanced;
    rep.r = r;
    rep.k = prim.k;
    rep.k2 = static_cast<unsigned long>(k2);
    rep.ell = 1;
    rep.degenerate = false;

    ArbInt a, b;
    mpz_ui_pow_ui(a.get_mpz_t(), 2, k1);
    mpz_ui_pow_ui(b.get_mpz_t(), 2, k2);
    rep.value = (a + 1) * (b - 1);
    fill_digits(rep);
    if (rep.n_bits != 4 * k2 || rep.ones != 2 * k2)
        throw std::logic_error("construct_balanced: digit counts differ from 4*k2 bits / 2*k2 ones");

    rep.sparsity_bound = 0.5 * static_cast<double>(rep.n_bits);
    rep.digit_ceiling = rep.n_bits;
    rep.log_y_target = log_y(Kind::balanced, 0.0, log_of(rep.value));

    if (opts.certify) {
        const auto plus = cyclotomic::fermat_like_factor(k1, opts.effort);
        const auto minus = cyclotomic::mersenne_like_factor(k2, opts.effort);
        const arith::Factorization parts[] = {plus.merged, minus.merged};
        const auto merged = arith::merge(parts);
        rep.smoothness_complete = merged.complete;
        rep.largest_prime_found = merged.largest_prime();
    }
    return rep;
}

double smoothness_exponent(const ConstructionReport& report) {
    if (!report.smoothness_complete)
        throw std::invalid_argument("smoothness_exponent: report has no complete smoothness certificate");
    if (!report.log_y_target || !(*report.log_y_target > 0.0))
        throw std::invalid_argument("smoothness_exponent: ln Y is undefined for this N (ln ln ln N <= 0)");
    return log_of(report.largest_prime_found) / *report.log_y_target;
}

}  // namespace sparse_smooth::construct
