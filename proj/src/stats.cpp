#include "catalysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "catalysis/interaction.hpp"
#include "catalysis/rng.hpp"

namespace catalysis {

namespace {

// midranks (average rank for ties), 1-based
std::vector<double> midranks(const std::vector<double>& pooled_sorted) {
    const std::size_t n = pooled_sorted.size();
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled_sorted[j + 1] == pooled_sorted[i]) ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) r[k] = avg;
        i = j + 1;
    }
    return r;
}

double tie_term(const std::vector<double>& pooled_sorted) {
    double t = 0;
    std::size_t i = 0;
    while (i < pooled_sorted.size()) {
        std::size_t j = i;
        while (j + 1 < pooled_sorted.size() && pooled_sorted[j + 1] == pooled_sorted[i]) ++j;
        const double m = static_cast<double>(j - i + 1);
        t += m * m * m - m;
        i = j + 1;
    }
    return t;
}

bool has_ties(const std::vector<double>& pooled_sorted) {
    for (std::size_t i = 0; i + 1 < pooled_sorted.size(); ++i) {
        if (pooled_sorted[i] == pooled_sorted[i + 1]) return true;
    }
    return false;
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double two_sided_from_one_sided(double p_greater, double p_less) {
    return std::min(1.0, 2.0 * std::min(p_greater, p_less));
}

// Exact null distribution of the x-group doubled-rank sum: counts[k][s] =
// number of k-subsets of the pooled doubled midranks with sum s.
// Enumerates the conditional permutation distribution given ties.
struct RankSumDistribution {
    std::vector<std::vector<double>> count;  // [k][sum]
    double total_choose = 0;

    RankSumDistribution(const std::vector<long>& doubled_ranks, std::size_t k_pick) {
        long max_sum = 0;
        for (long r : doubled_ranks) max_sum += r;
        count.assign(k_pick + 1, std::vector<double>(max_sum + 1, 0.0));
        count[0][0] = 1.0;
        for (long r : doubled_ranks) {
            for (std::size_t k = std::min(k_pick, count.size() - 1); k >= 1; --k) {
                auto& row = count[k];
                const auto& prev = count[k - 1];
                for (long s = max_sum; s >= r; --s) {
                    if (prev[s - r] != 0.0) row[s] += prev[s - r];
                }
            }
        }
        for (double c : count[k_pick]) total_choose += c;
    }

    // P(doubled rank sum >= s0) and <= s0
    double p_geq(std::size_t k, long s0) const {
        double acc = 0;
        for (long s = std::max<long>(0, s0); s < static_cast<long>(count[k].size()); ++s) {
            acc += count[k][s];
        }
        return acc / total_choose;
    }
    double p_leq(std::size_t k, long s0) const {
        double acc = 0;
        for (long s = 0; s <= std::min<long>(s0, static_cast<long>(count[k].size()) - 1);
             ++s) {
            acc += count[k][s];
        }
        return acc / total_choose;
    }
};

}  // namespace

TestReport mann_whitney_u(const std::vector<double>& x, const std::vector<double>& y,
                          Alternative alternative, std::size_t exact_cutoff) {
    if (x.empty() || y.empty()) throw DomainError("both samples must be nonempty");
    const std::size_t n1 = x.size(), n2 = y.size(), n = n1 + n2;

    std::vector<double> pooled;
    pooled.reserve(n);
    pooled.insert(pooled.end(), x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = pooled[order[i]];
    const std::vector<double> ranks = midranks(sorted);

    double rank_sum_x = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (order[i] < n1) rank_sum_x += ranks[i];
    }
    const double u_x = rank_sum_x - 0.5 * static_cast<double>(n1) * (n1 + 1);

    TestReport report;
    report.statistic = u_x;
    report.n1 = n1;
    report.n2 = n2;
    report.ties_corrected = has_ties(sorted);

    if (n <= exact_cutoff) {
        report.method = PValueMethod::exact;
        std::vector<long> doubled(n);
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<long>(std::llround(2.0 * ranks[i]));
        }
        const RankSumDistribution dist(doubled, n1);
        const long s_obs = static_cast<long>(std::llround(2.0 * rank_sum_x));
        const double p_g = dist.p_geq(n1, s_obs);
        const double p_l = dist.p_leq(n1, s_obs);
        switch (alternative) {
            case Alternative::greater: report.p_value = p_g; break;
            case Alternative::less: report.p_value = p_l; break;
            default: report.p_value = two_sided_from_one_sided(p_g, p_l); break;
        }
        return report;
    }

    report.method = PValueMethod::normal_approx;
    const double mu = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);
    const double nn = static_cast<double>(n);
    const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                       ((nn + 1.0) - tie_term(sorted) / (nn * (nn - 1.0)));
    if (var <= 0) {  // all observations tied
        report.p_value = 1.0;
        return report;
    }
    const double sd = std::sqrt(var);
    const double p_g = 1.0 - std_normal_cdf((u_x - 0.5 - mu) / sd);
    const double p_l = std_normal_cdf((u_x + 0.5 - mu) / sd);
    switch (alternative) {
        case Alternative::greater: report.p_value = p_g; break;
        case Alternative::less: report.p_value = p_l; break;
        default: report.p_value = two_sided_from_one_sided(p_g, p_l); break;
    }
    return report;
}

TestReport wilcoxon_signed_rank(const std::vector<double>& differences,
                                Alternative alternative, std::size_t exact_cutoff) {
    std::vector<double> d;
    for (double v : differences) {
        if (v != 0.0) d.push_back(v);
    }
    if (d.empty()) throw DomainError("all differences are zero");
    const std::size_t n = d.size();

    std::vector<double> absd(n);
    for (std::size_t i = 0; i < n; ++i) absd[i] = std::abs(d[i]);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return absd[a] < absd[b]; });
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = absd[order[i]];
    const std::vector<double> ranks = midranks(sorted);

    double w_plus = 0, w_minus = 0;
    for (std::size_t i = 0; i < n; ++i) {
        (d[order[i]] > 0 ? w_plus : w_minus) += ranks[i];
    }

    TestReport report;
    report.statistic = std::min(w_plus, w_minus);
    report.n1 = n;
    report.n2 = 0;
    report.ties_corrected = has_ties(sorted);

    if (n <= exact_cutoff) {
        report.method = PValueMethod::exact;
        // distribution of the doubled positive-rank sum over all 2^n signs
        long max_sum = 0;
        std::vector<long> doubled(n);
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<long>(std::llround(2.0 * ranks[i]));
            max_sum += doubled[i];
        }
        std::vector<double> count(max_sum + 1, 0.0);
        count[0] = 1.0;
        for (long r : doubled) {
            for (long s = max_sum; s >= r; --s) {
                if (count[s - r] != 0.0) count[s] += count[s - r];
            }
        }
        const double total = std::pow(2.0, static_cast<double>(n));
        const long s_obs = static_cast<long>(std::llround(2.0 * w_plus));
        double p_g = 0, p_l = 0;
        for (long s = s_obs; s <= max_sum; ++s) p_g += count[s];
        for (long s = 0; s <= s_obs; ++s) p_l += count[s];
        p_g /= total;
        p_l /= total;
        switch (alternative) {
            case Alternative::greater: report.p_value = p_g; break;
            case Alternative::less: report.p_value = p_l; break;
            default: report.p_value = two_sided_from_one_sided(p_g, p_l); break;
        }
        return report;
    }

    report.method = PValueMethod::normal_approx;
    const double nn = static_cast<double>(n);
    const double mu = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term(sorted) / 48.0;
    if (var <= 0) {
        report.p_value = 1.0;
        return report;
    }
    const double sd = std::sqrt(var);
    const double p_g = 1.0 - std_normal_cdf((w_plus - 0.5 - mu) / sd);
    const double p_l = std_normal_cdf((w_plus + 0.5 - mu) / sd);
    switch (alternative) {
        case Alternative::greater: report.p_value = p_g; break;
        case Alternative::less: report.p_value = p_l; break;
        default: report.p_value = two_sided_from_one_sided(p_g, p_l); break;
    }
    return report;
}

std::vector<double> bootstrap_mean_samples(const std::vector<double>& x,
                                           std::size_t n_resamples, std::uint64_t seed) {
    if (x.empty()) throw DomainError("empty sample");
    std::vector<double> means(n_resamples);
    const std::size_t n = x.size();
    Rng rng(seed);
    for (std::size_t b = 0; b < n_resamples; ++b) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += x[rng.uniform_index(n)];
        means[b] = s / static_cast<double>(n);
    }
    return means;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(sorted.size() - 1, lo + 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0 || sorted[lo] == sorted[hi]) return sorted[lo];
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

BootstrapSummary bootstrap_mean(const std::vector<double>& x, std::size_t n_resamples,
                                double level, std::uint64_t seed) {
    if (!(level > 0 && level < 1)) throw DomainError("level must be in (0,1)");
    auto means = bootstrap_mean_samples(x, n_resamples, seed);
    std::sort(means.begin(), means.end());
    BootstrapSummary s;
    s.n_resamples = n_resamples;
    s.seed = seed;
    double m = 0;
    for (double v : means) m += v;
    s.mean = m / static_cast<double>(means.size());
    const double alpha = 1.0 - level;
    s.ci_low = quantile_sorted(means, alpha / 2.0);
    s.ci_high = quantile_sorted(means, 1.0 - alpha / 2.0);
    return s;
}

std::vector<KdePoint> kde_samples(const std::vector<double>& data,
                                  std::size_t n_points) {
    if (data.empty()) throw DomainError("empty sample");
    if (n_points < 2) throw DomainError("need at least two grid points");
    const std::size_t n = data.size();
    double mean = 0;
    for (double v : data) mean += v;
    mean /= static_cast<double>(n);
    double var = 0;
    for (double v : data) var += (v - mean) * (v - mean);
    var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
    const double sd = std::sqrt(var);

    std::vector<double> sorted = data;
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

    // Silverman's rule of thumb
    double spread = sd;
    if (iqr > 0) spread = std::min(spread, iqr / 1.34);
    if (spread <= 0) spread = std::max(std::abs(mean) * 1e-6, 1e-9);
    const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);

    const double lo = sorted.front() - 3.0 * h;
    const double hi = sorted.back() + 3.0 * h;
    const double inv = 1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * M_PI));
    std::vector<KdePoint> out(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double xg = lo + (hi - lo) * static_cast<double>(i) /
                                   static_cast<double>(n_points - 1);
        double dens = 0;
        for (double v : data) {
            const double z = (xg - v) / h;
            dens += std::exp(-0.5 * z * z);
        }
        out[i] = {xg, dens * inv};
    }
    return out;
}

std::vector<PairStatRecord> pair_stat_records(const Conference& c) {
    std::vector<PairStatRecord> out;
    for (const auto& pair : eligible_pairs(c)) {
        PairStatRecord r;
        r.k0 = pair.k0;
        r.collaborated = pair.collaborated;
        r.i_tot = total_effective_interaction(c, pair.id_a, pair.id_b);
        for (const auto& s : c.sessions) {
            if (s.kind != SessionKind::small_group) continue;
            for (const auto& g : s.groups) {
                const bool a_in = std::find(g.begin(), g.end(), pair.id_a) != g.end();
                const bool b_in = std::find(g.begin(), g.end(), pair.id_b) != g.end();
                if (a_in && b_in) {
                    ++r.small_groups_shared;
                    break;
                }
            }
        }
        out.push_back(r);
    }
    return out;
}

GapReport collaboration_gap_analysis(const std::vector<PairStatRecord>& records,
                                     std::uint64_t seed, const GapOptions& options) {
    std::vector<double> collab, non_collab;
    for (const auto& r : records) {
        (r.collaborated ? collab : non_collab).push_back(r.i_tot);
    }
    if (collab.empty() || non_collab.empty()) {
        throw DomainError("need at least one collaborating and one non-collaborating pair");
    }
    GapReport g;
    g.n_collaborators = collab.size();
    g.n_non_collaborators = non_collab.size();
    auto mean = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    g.mean_collaborators = mean(collab);
    g.mean_non_collaborators = mean(non_collab);
    if (g.mean_non_collaborators != 0.0) {
        g.ratio = g.mean_collaborators / g.mean_non_collaborators;
    } else {
        g.ratio = g.mean_collaborators == g.mean_non_collaborators
                      ? 1.0
                      : std::numeric_limits<double>::infinity();
    }
    g.u_test = mann_whitney_u(collab, non_collab, options.alternative);
    g.bootstrap_collaborators =
        bootstrap_mean(collab, options.n_resamples, options.level, Rng::derive(seed, 0));
    g.bootstrap_non_collaborators = bootstrap_mean(non_collab, options.n_resamples,
                                                   options.level, Rng::derive(seed, 1));
    g.kde_collaborators = kde_samples(
        bootstrap_mean_samples(collab, options.n_resamples, Rng::derive(seed, 0)));
    g.kde_non_collaborators = kde_samples(
        bootstrap_mean_samples(non_collab, options.n_resamples, Rng::derive(seed, 1)));
    return g;
}

GapReport collaboration_gap_analysis(const Conference& c, std::uint64_t seed,
                                     const GapOptions& options) {
    return collaboration_gap_analysis(pair_stat_records(c), seed, options);
}

namespace {

double odds_of(double collaborations, double n) {
    if (n <= 0) return 0;
    if (collaborations >= n) return std::numeric_limits<double>::infinity();
    return collaborations / (n - collaborations);
}

}  // namespace

OddsReport mini_session_odds(const std::vector<PairStatRecord>& records,
                             std::size_t n_resamples, std::uint64_t seed) {
    std::vector<char> zero_outcomes, one_outcomes;
    for (const auto& r : records) {
        if (r.k0 != 0) continue;  // restricted to K0 = 0 pairs
        if (r.small_groups_shared == 0) {
            zero_outcomes.push_back(r.collaborated ? 1 : 0);
        } else if (r.small_groups_shared == 1) {
            one_outcomes.push_back(r.collaborated ? 1 : 0);
        }
    }
    OddsReport rep;
    rep.n_zero = zero_outcomes.size();
    rep.n_one = one_outcomes.size();
    if (zero_outcomes.empty() || one_outcomes.empty()) {
        rep.note = "empty stratum (need K0=0 pairs with 0 and exactly 1 mini session)";
        return rep;
    }
    auto count = [](const std::vector<char>& v) {
        double s = 0;
        for (char c : v) s += c;
        return s;
    };
    rep.computable = true;
    rep.odds_zero = odds_of(count(zero_outcomes), static_cast<double>(rep.n_zero));
    rep.odds_one = odds_of(count(one_outcomes), static_cast<double>(rep.n_one));
    rep.odds_ratio = rep.odds_zero > 0 ? rep.odds_one / rep.odds_zero
                                       : std::numeric_limits<double>::infinity();

    // paired bootstrap over both strata
    std::vector<double> odds0(n_resamples), odds1(n_resamples), ratio(n_resamples);
    Rng rng(seed);
    for (std::size_t b = 0; b < n_resamples; ++b) {
        double c0 = 0, c1 = 0;
        for (std::size_t i = 0; i < zero_outcomes.size(); ++i) {
            c0 += zero_outcomes[rng.uniform_index(zero_outcomes.size())];
        }
        for (std::size_t i = 0; i < one_outcomes.size(); ++i) {
            c1 += one_outcomes[rng.uniform_index(one_outcomes.size())];
        }
        odds0[b] = odds_of(c0, static_cast<double>(rep.n_zero));
        odds1[b] = odds_of(c1, static_cast<double>(rep.n_one));
        ratio[b] = odds0[b] > 0 ? odds1[b] / odds0[b]
                                : std::numeric_limits<double>::infinity();
    }
    std::sort(odds0.begin(), odds0.end());
    std::sort(odds1.begin(), odds1.end());
    std::sort(ratio.begin(), ratio.end());
    rep.ci_zero_low = quantile_sorted(odds0, 0.025);
    rep.ci_zero_high = quantile_sorted(odds0, 0.975);
    rep.ci_one_low = quantile_sorted(odds1, 0.025);
    rep.ci_one_high = quantile_sorted(odds1, 0.975);
    rep.ratio_ci_low = quantile_sorted(ratio, 0.025);
    rep.ratio_ci_high = quantile_sorted(ratio, 0.975);
    return rep;
}

OddsReport mini_session_odds(const Conference& c, std::size_t n_resamples,
                             std::uint64_t seed) {
    return mini_session_odds(pair_stat_records(c), n_resamples, seed);
}

}  // namespace catalysis
