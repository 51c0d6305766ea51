#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catalysis/conference.hpp"

namespace catalysis {

enum class Alternative { two_sided, greater, less };

enum class PValueMethod { exact, normal_approx };

struct TestReport {
    double statistic = 0;
    double p_value = 1;
    PValueMethod method = PValueMethod::normal_approx;
    std::size_t n1 = 0, n2 = 0;
    bool ties_corrected = false;
};

// Sample sizes up to this use exact enumeration; above it, the normal
// approximation with tie-corrected variance and continuity correction.
inline constexpr std::size_t k_exact_test_cutoff = 20;

// Mann-Whitney U from rank sums with midranks for ties. The statistic is
// U of `x`; `greater` means x tends to exceed y. Exact p-values enumerate
// the conditional permutation distribution given the tie pattern.
TestReport mann_whitney_u(const std::vector<double>& x, const std::vector<double>& y,
                          Alternative alternative = Alternative::two_sided,
                          std::size_t exact_cutoff = k_exact_test_cutoff);

// Wilcoxon signed-rank on a vector of differences: zeros dropped, midranks
// of |d|, statistic W = min(W+, W-). `greater` tests median > 0.
TestReport wilcoxon_signed_rank(const std::vector<double>& differences,
                                Alternative alternative = Alternative::two_sided,
                                std::size_t exact_cutoff = k_exact_test_cutoff);

struct BootstrapSummary {
    double mean = 0;
    double ci_low = 0;
    double ci_high = 0;
    std::size_t n_resamples = 0;
    std::uint64_t seed = 0;
};

// Percentile CI of the resampled mean. Deterministic given seed.
BootstrapSummary bootstrap_mean(const std::vector<double>& x, std::size_t n_resamples,
                                double level, std::uint64_t seed);
std::vector<double> bootstrap_mean_samples(const std::vector<double>& x,
                                           std::size_t n_resamples, std::uint64_t seed);

struct KdePoint {
    double x = 0;
    double density = 0;
};

// Gaussian KDE with Silverman's rule-of-thumb bandwidth, sampled on a grid.
std::vector<KdePoint> kde_samples(const std::vector<double>& data,
                                  std::size_t n_points = 256);

// Interaction record used by the pooled analyses.
struct PairStatRecord {
    double i_tot = 0;
    int k0 = 0;
    bool collaborated = false;
    int small_groups_shared = 0;
};

std::vector<PairStatRecord> pair_stat_records(const Conference& c);

struct GapReport {
    std::size_t n_collaborators = 0, n_non_collaborators = 0;
    double mean_collaborators = 0, mean_non_collaborators = 0;
    double ratio = 1;
    TestReport u_test;
    BootstrapSummary bootstrap_collaborators, bootstrap_non_collaborators;
    std::vector<KdePoint> kde_collaborators, kde_non_collaborators;
};

struct GapOptions {
    std::size_t n_resamples = 2000;
    double level = 0.95;
    Alternative alternative = Alternative::two_sided;
};

// Splits eligible pairs by outcome and compares total effective interaction:
// means, ratio, U test, bootstrap CIs, and KDEs of the bootstrapped means.
GapReport collaboration_gap_analysis(const Conference& c, std::uint64_t seed,
                                     const GapOptions& options = {});
GapReport collaboration_gap_analysis(const std::vector<PairStatRecord>& records,
                                     std::uint64_t seed, const GapOptions& options = {});

struct OddsReport {
    bool computable = false;
    std::string note;
    std::size_t n_zero = 0, n_one = 0;  // stratum sizes (0 vs exactly 1 mini session)
    double odds_zero = 0, odds_one = 0;
    double ci_zero_low = 0, ci_zero_high = 0;
    double ci_one_low = 0, ci_one_high = 0;
    double odds_ratio = 0;
    double ratio_ci_low = 0, ratio_ci_high = 0;
};

// Restricted to K0 = 0 pairs: odds of collaboration for pairs co-attending
// exactly one small-group session vs. none, with bootstrap CIs.
OddsReport mini_session_odds(const Conference& c, std::size_t n_resamples,
                             std::uint64_t seed);
OddsReport mini_session_odds(const std::vector<PairStatRecord>& records,
                             std::size_t n_resamples, std::uint64_t seed);

}  // namespace catalysis
