#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catalysis/conference.hpp"
#include "catalysis/dynamics.hpp"
#include "catalysis/interaction.hpp"

namespace catalysis {

// The eight candidate models compared by AIC.
enum class ModelKind {
    random_uniform,  // P ~ U(0,1) per pair; marginal likelihood 1/2 per outcome
    constant_p,      // single probability for all pairs
    linear_k0,       // clip(a*K0 + b)
    linear_itot,     // clip(a*I_tot + b)
    linear_k0_itot,  // clip(a*K0 + b*I_tot + c)
    threshold,       // p_high if the profile ever exceeds i_c, else p_low
    linear_ode,      // bounded linear dynamics (LinearParams, 6 free)
    catalysis,       // nonlinear catalysis dynamics (CatalysisParams, 8 free)
};

std::string model_name(ModelKind kind);
ModelKind model_from_name(const std::string& name);
const std::vector<ModelKind>& all_model_kinds();

// Free-parameter count used in the AIC penalty.
int param_count(ModelKind kind);

// Flat parameter vector; value order per kind:
//   constant_p:     {p}
//   linear_k0:      {a, b}
//   linear_itot:    {a, b}
//   linear_k0_itot: {a, b, c}
//   threshold:      {i_c, p_low, p_high}
//   linear_ode:     {S, W, p_min, p_max, i_max, prior_scale}
//   catalysis:      {S, W, p_min, p_mem, p_max, i_c, i_max, prior_scale}
struct ModelParams {
    ModelKind kind = ModelKind::constant_p;
    std::vector<double> values;

    LinearParams to_linear() const;
    CatalysisParams to_catalysis() const;
    static ModelParams from_linear(const LinearParams& p);
    static ModelParams from_catalysis(const CatalysisParams& p);
};

// Reference profile scaling for the threshold model's max-intensity feature.
// Any fixed choice only reparametrizes i_c monotonically.
inline constexpr double k_threshold_ref_prior_scale = 0.02;
inline constexpr double k_threshold_ref_i_max = 1.0;

// Everything a candidate model needs to score one pair.
struct PairRecord {
    std::string id_a, id_b;
    bool collaborated = false;
    int k0 = 0;
    double i_tot = 0;
    PairExposure exposure;
    double threshold_feature = 0;  // max intensity at the reference scaling
};

std::vector<PairRecord> build_pair_records(const Conference& c);

// Pair records plus deduplication classes: records with identical (K0,
// exposure segments) get identical ODE predictions, so each class is
// integrated once.
struct PairDataset {
    std::vector<PairRecord> records;
    std::vector<std::size_t> class_index;  // record -> class
    std::vector<std::size_t> class_rep;    // class -> representative record
    static PairDataset build(const Conference& c);
    std::size_t n_classes() const { return class_rep.size(); }
};

// Per-pair probability clip for the regression-style models.
inline constexpr double k_regression_clip = 1e-6;

double predict(const ModelParams& params, const PairRecord& record,
               double step_minutes = k_default_step_minutes);

// Per-record probabilities, ODE models integrated once per dedup class.
std::vector<double> predicted_probabilities(const ModelParams& params,
                                            const PairDataset& data,
                                            double step_minutes = k_default_step_minutes,
                                            unsigned workers = 1);

// Bernoulli negative log-likelihood over the dataset; ODE models integrate
// one representative per dedup class, terms are combined with pairwise
// summation in record order (worker count does not change the result).
double negative_log_likelihood(const ModelParams& params, const PairDataset& data,
                               double step_minutes = k_default_step_minutes,
                               unsigned workers = 1);
double negative_log_likelihood(const ModelParams& params, const Conference& c,
                               double step_minutes = k_default_step_minutes,
                               unsigned workers = 1);

// Smooth bijection between a model's admissible parameter set and R^k:
// log for rates/intensities, logistic stick-breaking for ordered
// probabilities, i_c = i_max * sigmoid(u).
struct ParamTransform {
    std::vector<double> (*to_unconstrained)(const std::vector<double>&) = nullptr;
    std::vector<double> (*to_constrained)(const std::vector<double>&) = nullptr;
};
ParamTransform transform_for(ModelKind kind);

// Multistart specification: the fit starts from every point of the cartesian
// product of per-parameter value lists.
struct MultistartGrid {
    std::vector<std::vector<double>> axis_values;
    std::vector<std::vector<double>> expand() const;
};

// Documented default grids. Cheap models use a full 3-per-parameter
// factorial; the two ODE models use a small curated factorial to keep
// multistart tractable.
MultistartGrid default_grid(ModelKind kind);

}  // namespace catalysis
