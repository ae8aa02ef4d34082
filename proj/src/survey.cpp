#include "sparse_smooth/survey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sparse_smooth/arith.hpp"
#include "sparse_smooth/cyclotomic.hpp"
#include "sparse_smooth/digits.hpp"
#include "sparse_smooth/smoothcount.hpp"

namespace sparse_smooth::survey {

namespace {

using u64 = std::uint64_t;

struct Partial {
    u64 population = 0;
    unsigned max_zeros = 0;
    u64 argmax = 0;
    std::vector<u64> hist;
};

void absorb(Partial& acc, unsigned n, u64 v) {
    const unsigned z = n - digits::ones_u64(v);
    ++acc.population;
    ++acc.hist[z];
    if (acc.argmax == 0 || z > acc.max_zeros || (z == acc.max_zeros && v < acc.argmax)) {
        acc.max_zeros = z;
        acc.argmax = v;
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

SurveyResult survey_window(unsigned n, std::uint64_t y, unsigned threads) {
    if (n < 2 || n > kMaxSurveyBits)
        throw std::invalid_argument("survey: n must lie in [2, " + std::to_string(kMaxSurveyBits) + "]");
    if (y < 2) throw std::invalid_argument("survey: y must be >= 2");

    const u64 lo = u64{1} << (n - 1);  // even, so (lo, hi] holds the same odd values as [lo, hi]
    const u64 hi = (u64{1} << n) - 1;
    const arith::PrimeList ps = arith::primes_up_to(std::min(y, hi));
    const auto all = ps.primes();
    // Partition on the exponent of 3; each subtree uses primes >= 5.
    const auto rest = all.size() > 2 ? all.subspan(2) : std::span<const std::uint32_t>{};
    const bool has3 = all.size() > 1;
    std::vector<u64> bases{1};
    if (has3)
        while (bases.back() <= hi / 3) bases.push_back(bases.back() * 3);

    const unsigned workers =
        threads ? threads : std::max(1u, std::min<unsigned>(8u, std::thread::hardware_concurrency()));
    std::vector<Partial> parts(bases.size(), Partial{0, 0, 0, std::vector<u64>(n, 0)});
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < bases.size(); i += workers) {
                smoothcount::for_each_smooth_multiple(bases[i], rest, lo, hi,
                                                      [&](u64 v) { absorb(parts[i], n, v); });
            }
        });
    }
    for (auto& t : pool) t.join();

    SurveyResult res;
    res.n = n;
    res.y = y;
    res.zero_histogram.assign(n, 0);
    Partial total{0, 0, 0, std::vector<u64>(n, 0)};
    for (const auto& p : parts) {
        total.population += p.population;
        for (unsigned z = 0; z < n; ++z) total.hist[z] += p.hist[z];
        if (p.population && (total.argmax == 0 || p.max_zeros > total.max_zeros ||
                             (p.max_zeros == total.max_zeros && p.argmax < total.argmax))) {
            total.max_zeros = p.max_zeros;
            total.argmax = p.argmax;
        }
    }
    res.population = total.population;
    res.max_zeros = total.max_zeros;
    res.argmax = total.argmax;
    res.zero_histogram = std::move(total.hist);
    return res;
}

SurveyResult survey_theorem1(unsigned n, double a_param, double theta, unsigned threads) {
    if (!(a_param > 1.0)) throw std::invalid_argument("survey: A must exceed 1");
    const double t0 = digits::theta0(a_param).theta0;
    if (!(theta < t0 - 1e-9)) throw std::invalid_argument("survey: theta must lie below theta0(A) = " + fmt(t0));
    if (n < 2 || n > kMaxSurveyBits)
        throw std::invalid_argument("survey: n must lie in [2, " + std::to_string(kMaxSurveyBits) + "]");
    const auto y = static_cast<u64>(std::floor(std::pow(static_cast<long double>(n), a_param)));
    SurveyResult res = survey_window(n, y, threads);
    res.a_param = a_param;
    res.theta = theta;
    res.predicted_zeros = digits::zero_bound_formula(a_param, theta, n);
    res.claim_holds = res.population > 0 && static_cast<double>(res.max_zeros) >= *res.predicted_zeros;
    return res;
}

TailCheck binomial_tail_check(unsigned n, double gamma) {
    if (n < 1 || n > 10'000) throw std::invalid_argument("binomial_tail_check: n must lie in [1, 10^4]");
    if (!(gamma > 0.0 && gamma <= 0.5)) throw std::invalid_argument("binomial_tail_check: gamma must lie in (0, 1/2]");
    TailCheck out;
    out.n = n;
    out.gamma = gamma;
    const auto kmax = static_cast<unsigned>(std::floor(gamma * n));
    ArbInt c = 1;  // C(n, 0)
    out.sum = 0;
    for (unsigned k = 0; k <= kmax; ++k) {
        out.sum += c;
        c = c * (n - k) / (k + 1);
    }
    long e = 0;
    const double mant = mpz_get_d_2exp(&e, out.sum.get_mpz_t());
    out.log2_sum = std::log2(mant) + static_cast<double>(e);
    out.log2_bound = n * digits::binary_entropy(gamma);
    out.holds = out.log2_sum <= out.log2_bound;
    return out;
}

LogBinomialCheck log_binomial_sum_check(unsigned n) {
    if (n < 1 || n > 100'000) throw std::invalid_argument("log_binomial_sum_check: n must lie in [1, 10^5]");
    std::vector<double> lf(n + 1, 0.0);
    for (unsigned i = 2; i <= n; ++i) lf[i] = lf[i - 1] + std::log(static_cast<double>(i));
    LogBinomialCheck out;
    out.n = n;
    for (unsigned k = 0; k <= n; ++k) out.sum += lf[n] - lf[k] - lf[n - k];
    out.half_n_sq = 0.5 * static_cast<double>(n) * n;
    const double scale = n * std::log(static_cast<double>(n));
    out.deviation = scale > 0 ? std::fabs(out.sum - out.half_n_sq) / scale : 0.0;
    out.holds = n < 16 || out.deviation <= kLogBinomialDeviationCap;
    return out;
}

std::vector<LemmaCheck> run_lemma_battery(const LemmaBatteryConfig& cfg) {
    std::vector<LemmaCheck> out;

    {  // tau(w) <= w^o(1): log tau(n) log log n / (log n log 2) stays bounded
        std::vector<std::uint32_t> tau(cfg.tau_n_max + 1, 0);
        for (u64 d = 1; d <= cfg.tau_n_max; ++d)
            for (u64 m = d; m <= cfg.tau_n_max; m += d) ++tau[m];
        double worst = 0;
        u64 at = 0;
        for (u64 n = 3; n <= cfg.tau_n_max; ++n) {
            const double ln = std::log(static_cast<double>(n));
            const double v = std::log(static_cast<double>(tau[n])) * std::log(ln) / (ln * std::numbers::ln2);
            if (v > worst) {
                worst = v;
                at = n;
            }
        }
        out.push_back({"divisor_bound", worst <= 1.6, true,
                       "max log(tau) loglog(n)/(log(n) log 2) = " + fmt(worst) + " at n = " + std::to_string(at) +
                           " (cap 1.6, n <= " + std::to_string(cfg.tau_n_max) + ")"});
    }
    {
        const auto rep = cyclotomic::height_bound_check(cfg.height_n_max);
        out.push_back({"cyclotomic_height", rep.all_hold, true,
                       "A_n < exp(tau(n) log(n)/2) for 2 <= n <= " + std::to_string(rep.n_max) +
                           "; max log ratio " + fmt(rep.max_log_ratio) + " at n = " +
                           std::to_string(rep.max_log_ratio_at) + "; max height " + std::to_string(rep.max_height) +
                           " at n = " + std::to_string(rep.max_height_at)});
    }
    {
        const auto m = arith::mertens_product(cfg.mertens_x);
        out.push_back({"mertens_product", m.ratio >= 0.95 && m.ratio <= 1.05, true,
                       "prod(1-1/p) = " + fmt(m.product) + ", ratio to e^-gamma/log x = " + fmt(m.ratio) +
                           " at x = " + std::to_string(cfg.mertens_x)});
    }
    {  // phi(p_2...p_r) log log k / k over r = 3..r_max, capped at 1.3 for r >= 5
        bool ok = true;
        std::string seq;
        for (unsigned r = 3; r <= cfg.phi_r_max; ++r) {
            const auto prim = arith::odd_primorial(r);
            const auto phi = arith::euler_phi(arith::factor(prim.k));
            const double lk = std::log(prim.k.get_d());
            const double v = phi.get_d() * std::log(lk) / prim.k.get_d();
            if (r >= 5 && v > 1.3) ok = false;
            seq += (seq.empty() ? "" : ", ") + fmt(v);
        }
        out.push_back({"primorial_phi", ok, true, "phi(k) loglog(k)/k for r = 3.." + std::to_string(cfg.phi_r_max) +
                                                      ": " + seq + " (cap 1.3 for r >= 5)"});
    }
    {  // s2(m + n) <= s2(m) + s2(n)
        gmp_randclass rng(gmp_randinit_mt);
        rng.seed(static_cast<unsigned long>(cfg.seed));
        u64 violations = 0;
        for (u64 i = 0; i < cfg.subadditivity_pairs; ++i) {
            const auto bits_a = 1 + ArbInt(rng.get_z_range(cfg.subadditivity_bits)).get_ui();
            const auto bits_b = 1 + ArbInt(rng.get_z_range(cfg.subadditivity_bits)).get_ui();
            const ArbInt a = rng.get_z_bits(bits_a);
            const ArbInt b = rng.get_z_bits(bits_b);
            const ArbInt c = a + b;
            if (mpz_popcount(c.get_mpz_t()) > mpz_popcount(a.get_mpz_t()) + mpz_popcount(b.get_mpz_t())) ++violations;
        }
        out.push_back({"digit_sum_subadditivity", violations == 0, true,
                       std::to_string(cfg.subadditivity_pairs) + " random pairs up to " +
                           std::to_string(cfg.subadditivity_bits) + " bits, seed " + std::to_string(cfg.seed) +
                           ", violations " + std::to_string(violations)});
    }
    {
        u64 cases = 0, fails = 0;
        for (unsigned n = 10; n <= 200; ++n)
            for (int g = 1; g <= 10; ++g) {
                ++cases;
                if (!binomial_tail_check(n, 0.05 * g).holds) ++fails;
            }
        out.push_back({"binomial_tail", fails == 0, true,
                       std::to_string(cases) + " grid points n in [10, 200], gamma in {0.05, ..., 0.5}; failures " +
                           std::to_string(fails)});
    }
    {
        double worst = 0;
        unsigned at = 0;
        bool ok = true;
        std::vector<double> lf(cfg.log_binomial_n_max + 1, 0.0);
        for (unsigned i = 2; i <= cfg.log_binomial_n_max; ++i) lf[i] = lf[i - 1] + std::log(static_cast<double>(i));
        for (unsigned n = 16; n <= cfg.log_binomial_n_max; ++n) {
            double sum = 0;
            for (unsigned k = 0; k <= n; ++k) sum += lf[n] - lf[k] - lf[n - k];
            const double dev = std::fabs(sum - 0.5 * n * static_cast<double>(n)) / (n * std::log(static_cast<double>(n)));
            if (dev > worst) {
                worst = dev;
                at = n;
            }
            if (dev > kLogBinomialDeviationCap) ok = false;
        }
        out.push_back({"log_binomial_sum", ok, true,
                       "max |sum log C(n,k) - n^2/2| / (n log n) = " + fmt(worst) + " at n = " + std::to_string(at) +
                           " over 16 <= n <= " + std::to_string(cfg.log_binomial_n_max) + " (cap 2)"});
    }
    return out;
}

}  // namespace sparse_smooth::survey
