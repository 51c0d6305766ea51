#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "catalysis/fitting.hpp"
#include "catalysis/models.hpp"

namespace catalysis {

// Akaike information criterion: 2k + 2*NLL.
inline double aic(double nll, int k_params) { return 2.0 * k_params + 2.0 * nll; }

// Evidence weight of a model against the best one.
inline double relative_likelihood(double aic_value, double aic_min) {
    return std::exp(0.5 * (aic_min - aic_value));
}

struct SelectionRow {
    ModelKind kind = ModelKind::constant_p;
    FitResult fit;
    double aic = 0;
    double delta_aic = 0;
    double relative_likelihood = 0;
    bool ok = false;
    std::string error;
};

struct SelectOptions {
    FitOptions fit_options;
    // warm-start richer regression models from the optima of nested ones
    bool nested_warm_starts = true;
};

// Fits every requested model and ranks by AIC (ascending). A failed fit
// yields a row with ok = false and does not abort the others.
std::vector<SelectionRow> select(const Conference& c,
                                 const std::vector<ModelKind>& kinds,
                                 std::uint64_t seed,
                                 const SelectOptions& options = {});
std::vector<SelectionRow> select(const PairDataset& data,
                                 const std::vector<ModelKind>& kinds,
                                 std::uint64_t seed,
                                 const SelectOptions& options = {});

struct CurveBin {
    double x_upper = 0;        // bin's upper edge on the total-interaction axis
    long observed_cum = 0;     // cumulative observed collaborations
    double predicted_mean = 0;
    double predicted_lo = 0;   // central 95% band over simulations
    double predicted_hi = 0;
    double residual = 0;       // observed - predicted_mean
};

struct CurveResult {
    double lambda = 0;  // weight of K0 on the total-interaction axis
    std::size_t n_sims = 0;
    std::vector<CurveBin> bins;
    double band_coverage = 0;  // fraction of bins with observed inside the band
};

struct CurveOptions {
    int n_bins = 20;
    int n_sims = 100;
    // < 0 = derive from params: prior_scale * (t_collab - t_start) for ODE
    // models, otherwise 0
    double lambda = -1;
    double step_minutes = k_default_step_minutes;
    unsigned workers = 0;
};

// Cumulative collaborations vs. total interaction (i_tot + lambda*K0):
// observed curve plus the mean and central 95% band of n_sims simulated
// outcome vectors drawn from the model's per-pair probabilities.
CurveResult cumulative_collaboration_curve(const Conference& c,
                                           const ModelParams& params,
                                           std::uint64_t seed,
                                           const CurveOptions& options = {});

}  // namespace catalysis
