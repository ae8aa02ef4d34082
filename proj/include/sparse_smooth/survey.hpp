#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparse_smooth/types.hpp"

namespace sparse_smooth::survey {

inline constexpr unsigned kMaxSurveyBits = 32;

struct SurveyResult {
    unsigned n = 0;
    double a_param = 0;
    std::optional<double> theta;
    std::uint64_t y = 0;
    std::uint64_t population = 0;   // odd y-smooth n-bit integers
    unsigned max_zeros = 0;
    std::uint64_t argmax = 0;       // smallest witness attaining max_zeros
    std::optional<double> predicted_zeros;
    std::optional<bool> claim_holds;  // max_zeros >= predicted_zeros
    std::vector<std::uint64_t> zero_histogram;  // index = zero count
};

/// Every odd y-smooth integer in [2^(n-1), 2^n), streamed; partitions by the
/// exponent of 3 run on separate threads and reduce deterministically.
SurveyResult survey_window(unsigned n, std::uint64_t y, unsigned threads = 0);

/// survey_window at y = floor(n^A) compared against the zero bound at theta.
/// theta must lie below theta0(A) - 1e-9.
SurveyResult survey_theorem1(unsigned n, double a_param, double theta, unsigned threads = 0);

struct TailCheck {
    unsigned n = 0;
    double gamma = 0;
    ArbInt sum;             // sum_{0 <= k <= gamma n} C(n, k)
    double log2_sum = 0;
    double log2_bound = 0;  // n H(gamma)
    bool holds = false;
};

/// Lemma: sum_{k <= gamma n} C(n, k) <= 2^(n H(gamma)), 0 < gamma <= 1/2.
TailCheck binomial_tail_check(unsigned n, double gamma);

struct LogBinomialCheck {
    unsigned n = 0;
    double sum = 0;         // sum_k ln C(n, k)
    double half_n_sq = 0;
    double deviation = 0;   // |sum - n^2/2| / (n ln n); 0 for n = 1
    bool holds = true;      // deviation <= 2 when n >= 16
};

LogBinomialCheck log_binomial_sum_check(unsigned n);

inline constexpr double kLogBinomialDeviationCap = 2.0;

struct LemmaCheck {
    std::string name;
    bool passed = false;
    bool asserted = true;  // false: reported trend only
    std::string detail;
};

struct LemmaBatteryConfig {
    std::uint64_t seed = 1;
    std::uint64_t height_n_max = 10'000;
    std::uint64_t subadditivity_pairs = 100'000;
    unsigned subadditivity_bits = 512;
    unsigned log_binomial_n_max = 10'000;
    std::uint64_t mertens_x = 1'000'000;
    std::uint64_t tau_n_max = 1'000'000;
    unsigned phi_r_max = 12;
};

/// Runs every supporting-lemma check with the configured sizes.
std::vector<LemmaCheck> run_lemma_battery(const LemmaBatteryConfig& cfg = {});

}  // namespace sparse_smooth::survey
