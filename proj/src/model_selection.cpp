#include "catalysis/model_selection.hpp"

#include <algorithm>
#include <cmath>

#include "catalysis/parallel.hpp"
#include "catalysis/rng.hpp"

namespace catalysis {

namespace {

// extra multistart points derived from already-fitted nested models
std::vector<std::vector<double>> nested_starts(
    ModelKind kind, const std::vector<SelectionRow>& done) {
    auto find = [&](ModelKind k) -> const FitResult* {
        for (const auto& row : done) {
            if (row.kind == k && row.ok) return &row.fit;
        }
        return nullptr;
    };
    std::vector<std::vector<double>> out;
    switch (kind) {
        case ModelKind::linear_k0:
        case ModelKind::linear_itot:
            if (const auto* c = find(ModelKind::constant_p)) {
                out.push_back({0.0, c->params.values.at(0)});
            }
            break;
        case ModelKind::linear_k0_itot:
            if (const auto* m = find(ModelKind::linear_k0)) {
                out.push_back({m->params.values.at(0), 0.0, m->params.values.at(1)});
            }
            if (const auto* m = find(ModelKind::linear_itot)) {
                out.push_back({0.0, m->params.values.at(0), m->params.values.at(1)});
            }
            if (const auto* c = find(ModelKind::constant_p)) {
                out.push_back({0.0, 0.0, c->params.values.at(0)});
            }
            break;
        default:
            break;
    }
    return out;
}

}  // namespace

std::vector<SelectionRow> select(const PairDataset& data,
                                 const std::vector<ModelKind>& kinds,
                                 std::uint64_t seed, const SelectOptions& options) {
    if (kinds.empty()) throw DomainError("no models requested");

    std::vector<SelectionRow> rows;
    for (ModelKind kind : kinds) {
        SelectionRow row;
        row.kind = kind;
        FitOptions fo = options.fit_options;
        if (options.nested_warm_starts) {
            auto extra = nested_starts(kind, rows);
            fo.extra_starts.insert(fo.extra_starts.end(), extra.begin(), extra.end());
        }
        try {
            row.fit = fit(kind, data, default_grid(kind), seed, fo);
            row.aic = aic(row.fit.nll, row.fit.k_params);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }

    double aic_min = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        if (row.ok) aic_min = std::min(aic_min, row.aic);
    }
    for (auto& row : rows) {
        if (row.ok) {
            row.delta_aic = row.aic - aic_min;
            row.relative_likelihood = relative_likelihood(row.aic, aic_min);
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SelectionRow& a,
                                                  const SelectionRow& b) {
        if (a.ok != b.ok) return a.ok;
        return a.aic < b.aic;
    });
    return rows;
}

std::vector<SelectionRow> select(const Conference& c,
                                 const std::vector<ModelKind>& kinds,
                                 std::uint64_t seed, const SelectOptions& options) {
    return select(PairDataset::build(c), kinds, seed, options);
}

CurveResult cumulative_collaboration_curve(const Conference& c,
                                           const ModelParams& params,
                                           std::uint64_t seed,
                                           const CurveOptions& options) {
    if (options.n_bins < 1) throw DomainError("need at least one bin");
    if (options.n_sims < 1) throw DomainError("need at least one simulation");
    const PairDataset data = PairDataset::build(c);
    const std::size_t n = data.records.size();
    if (n == 0) throw DomainError("conference has no eligible pairs");

    double lambda = options.lambda;
    if (lambda < 0) {
        // time integral of the K0-proportional intensity floor, in minutes
        double prior_scale = 0;
        if (params.kind == ModelKind::linear_ode) prior_scale = params.values.at(5);
        if (params.kind == ModelKind::catalysis) prior_scale = params.values.at(7);
        lambda = prior_scale * (c.t_collab - c.t_start);
    }

    // per-pair probabilities from the model
    const unsigned workers = options.workers == 0 ? default_workers() : options.workers;
    std::vector<double> probs(n);
    {
        const bool ode = params.kind == ModelKind::linear_ode ||
                         params.kind == ModelKind::catalysis;
        if (ode) {
            std::vector<double> class_p(data.n_classes());
            parallel_for(data.n_classes(), workers, [&](std::size_t ci) {
                class_p[ci] = predict(params, data.records[data.class_rep[ci]],
                                      options.step_minutes);
            });
            for (std::size_t i = 0; i < n; ++i) probs[i] = class_p[data.class_index[i]];
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                probs[i] = predict(params, data.records[i], options.step_minutes);
            }
        }
    }

    // order pairs along the total-interaction axis
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = data.records[i].i_tot + lambda * data.records[i].k0;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    const double x_lo = x[order.front()], x_hi = x[order.back()];
    const int nb = options.n_bins;
    const double width = (x_hi > x_lo) ? (x_hi - x_lo) / nb : 1.0;

    // bin assignment of each (sorted) pair
    std::vector<int> bin_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        int b = static_cast<int>((x[order[i]] - x_lo) / width);
        bin_of[i] = std::min(nb - 1, std::max(0, b));
    }

    CurveResult result;
    result.lambda = lambda;
    result.n_sims = static_cast<std::size_t>(options.n_sims);
    result.bins.resize(nb);

    // observed cumulative counts per bin
    {
        long cum = 0;
        std::size_t i = 0;
        for (int b = 0; b < nb; ++b) {
            while (i < n && bin_of[i] == b) {
                cum += data.records[order[i]].collaborated ? 1 : 0;
                ++i;
            }
            result.bins[b].x_upper = x_lo + width * (b + 1);
            result.bins[b].observed_cum = cum;
        }
    }

    // simulated cumulative counts: sims x bins
    std::vector<std::vector<double>> sims(nb, std::vector<double>(options.n_sims));
    parallel_for(static_cast<std::size_t>(options.n_sims), workers, [&](std::size_t s) {
        Rng rng(Rng::derive(seed, s));
        long cum = 0;
        std::size_t i = 0;
        for (int b = 0; b < nb; ++b) {
            while (i < n && bin_of[i] == b) {
                cum += rng.bernoulli(probs[order[i]]) ? 1 : 0;
                ++i;
            }
            sims[b][s] = static_cast<double>(cum);
        }
    });

    int covered = 0;
    for (int b = 0; b < nb; ++b) {
        auto& v = sims[b];
        std::sort(v.begin(), v.end());
        double mean = 0;
        for (double t : v) mean += t;
        mean /= static_cast<double>(v.size());
        const auto pick = [&](double q) {
            const double pos = q * (v.size() - 1);
            const std::size_t lo = static_cast<std::size_t>(pos);
            const std::size_t hi = std::min(v.size() - 1, lo + 1);
            const double frac = pos - static_cast<double>(lo);
            return v[lo] * (1.0 - frac) + v[hi] * frac;
        };
        auto& bin = result.bins[b];
        bin.predicted_mean = mean;
        bin.predicted_lo = pick(0.025);
        bin.predicted_hi = pick(0.975);
        bin.residual = static_cast<double>(bin.observed_cum) - mean;
        if (bin.observed_cum >= bin.predicted_lo - 1e-12 &&
            bin.observed_cum <= bin.predicted_hi + 1e-12) {
            ++covered;
        }
    }
    result.band_coverage = static_cast<double>(covered) / nb;
    return result;
}

}  // namespace catalysis
