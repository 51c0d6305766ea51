#include "catalysis/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "catalysis/parallel.hpp"

namespace catalysis {

namespace {

struct KindInfo {
    ModelKind kind;
    const char* name;
    int k;
};

constexpr KindInfo k_kinds[] = {
    {ModelKind::random_uniform, "random_uniform", 0},
    {ModelKind::constant_p, "constant_p", 1},
    {ModelKind::linear_k0, "linear_k0", 2},
    {ModelKind::linear_itot, "linear_itot", 2},
    {ModelKind::linear_k0_itot, "linear_k0_itot", 3},
    {ModelKind::threshold, "threshold", 3},
    {ModelKind::linear_ode, "linear_ode", 6},
    {ModelKind::catalysis, "catalysis", 8},
};

double sigmoid(double u) {
    if (u >= 0) {
        return 1.0 / (1.0 + std::exp(-u));
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

double logit(double p) {
    p = std::min(1.0 - 1e-12, std::max(1e-12, p));
    return std::log(p / (1.0 - p));
}

double safe_exp(double u) {
    return std::exp(std::min(27.0, std::max(-27.0, u)));  // ~[1.9e-12, 5.3e11]
}

double safe_log(double x) { return std::log(std::max(1e-12, x)); }

double clip_regression(double p) {
    return std::min(1.0 - k_regression_clip, std::max(k_regression_clip, p));
}

}  // namespace

std::string model_name(ModelKind kind) {
    for (const auto& k : k_kinds) {
        if (k.kind == kind) return k.name;
    }
    throw DomainError("unknown model kind");
}

ModelKind model_from_name(const std::string& name) {
    for (const auto& k : k_kinds) {
        if (name == k.name) return k.kind;
    }
    throw DomainError("unknown model name: " + name);
}

const std::vector<ModelKind>& all_model_kinds() {
    static const std::vector<ModelKind> kinds = [] {
        std::vector<ModelKind> v;
        for (const auto& k : k_kinds) v.push_back(k.kind);
        return v;
    }();
    return kinds;
}

int param_count(ModelKind kind) {
    for (const auto& k : k_kinds) {
        if (k.kind == kind) return k.k;
    }
    throw DomainError("unknown model kind");
}

LinearParams ModelParams::to_linear() const {
    if (kind != ModelKind::linear_ode || values.size() != 6) {
        throw DomainError("not a linear_ode parameter vector");
    }
    LinearParams p;
    p.strengthening = values[0];
    p.weakening = values[1];
    p.p_min = values[2];
    p.p_max = values[3];
    p.i_max = values[4];
    p.prior_scale = values[5];
    return p;
}

CatalysisParams ModelParams::to_catalysis() const {
    if (kind != ModelKind::catalysis || values.size() != 8) {
        throw DomainError("not a catalysis parameter vector");
    }
    CatalysisParams p;
    p.strengthening = values[0];
    p.weakening = values[1];
    p.p_min = values[2];
    p.p_mem = values[3];
    p.p_max = values[4];
    p.i_c = values[5];
    p.i_max = values[6];
    p.prior_scale = values[7];
    return p;
}

ModelParams ModelParams::from_linear(const LinearParams& p) {
    return {ModelKind::linear_ode,
            {p.strengthening, p.weakening, p.p_min, p.p_max, p.i_max, p.prior_scale}};
}

ModelParams ModelParams::from_catalysis(const CatalysisParams& p) {
    return {ModelKind::catalysis,
            {p.strengthening, p.weakening, p.p_min, p.p_mem, p.p_max, p.i_c, p.i_max,
             p.prior_scale}};
}

std::vector<PairRecord> build_pair_records(const Conference& c) {
    std::vector<PairRecord> out;
    for (const auto& pair : eligible_pairs(c)) {
        PairRecord r;
        r.id_a = pair.id_a;
        r.id_b = pair.id_b;
        r.collaborated = pair.collaborated;
        r.k0 = pair.k0;
        r.exposure = pair_exposure(c, pair.id_a, pair.id_b);
        r.i_tot = r.exposure.i_tot;
        const double scale =
            intensity_scale(k_threshold_ref_prior_scale, k_threshold_ref_i_max);
        double max_occ = 0;
        for (const auto& seg : r.exposure.segments) {
            max_occ = std::max(max_occ, seg.occupancy);
        }
        r.threshold_feature = scale * (k_threshold_ref_prior_scale * r.k0 + max_occ);
        out.push_back(std::move(r));
    }
    return out;
}

PairDataset PairDataset::build(const Conference& c) {
    PairDataset d;
    d.records = build_pair_records(c);
    d.class_index.resize(d.records.size());

    // key: k0 + exact segment bytes
    std::map<std::pair<int, std::vector<std::pair<double, double>>>, std::size_t> seen;
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        std::vector<std::pair<double, double>> sig;
        double prev_end = d.records[i].exposure.t_begin();
        for (const auto& seg : d.records[i].exposure.segments) {
            sig.emplace_back(seg.t_end - prev_end, seg.occupancy);
            prev_end = seg.t_end;
        }
        auto key = std::make_pair(d.records[i].k0, std::move(sig));
        auto [it, inserted] = seen.try_emplace(std::move(key), d.class_rep.size());
        if (inserted) d.class_rep.push_back(i);
        d.class_index[i] = it->second;
    }
    return d;
}

double predict(const ModelParams& params, const PairRecord& record,
               double step_minutes) {
    switch (params.kind) {
        case ModelKind::random_uniform:
            // marginal probability of either outcome under P ~ U(0,1)
            return 0.5;
        case ModelKind::constant_p:
            return clip_regression(params.values.at(0));
        case ModelKind::linear_k0:
            return clip_regression(params.values.at(0) * record.k0 + params.values.at(1));
        case ModelKind::linear_itot:
            return clip_regression(params.values.at(0) * record.i_tot +
                                   params.values.at(1));
        case ModelKind::linear_k0_itot:
            return clip_regression(params.values.at(0) * record.k0 +
                                   params.values.at(1) * record.i_tot +
                                   params.values.at(2));
        case ModelKind::threshold: {
            const double i_c = params.values.at(0);
            const double p_low = params.values.at(1);
            const double p_high = params.values.at(2);
            return record.threshold_feature > i_c ? p_high : p_low;
        }
        case ModelKind::linear_ode: {
            const LinearParams lp = params.to_linear();
            lp.validate();
            const auto segs = intensity_segments(record.exposure, lp.prior_scale, lp.i_max);
            const double p =
                final_probability_linear(lp, segs, lp.p_min, step_minutes, nullptr);
            return std::min(1.0 - k_probability_clip, std::max(k_probability_clip, p));
        }
        case ModelKind::catalysis: {
            const Potential pot(params.to_catalysis());
            const auto& cp = pot.params();
            const auto segs =
                intensity_segments(record.exposure, cp.prior_scale, cp.i_max);
            const double p =
                final_probability_catalysis(pot, segs, cp.p_min, step_minutes, nullptr);
            return std::min(1.0 - k_probability_clip, std::max(k_probability_clip, p));
        }
    }
    throw DomainError("unknown model kind");
}

namespace {

double bernoulli_term(double p, bool y) {
    p = std::min(1.0 - k_probability_clip, std::max(k_probability_clip, p));
    return y ? -std::log(p) : -std::log1p(-p);
}

}  // namespace

std::vector<double> predicted_probabilities(const ModelParams& params,
                                            const PairDataset& data,
                                            double step_minutes, unsigned workers) {
    const std::size_t n = data.records.size();
    std::vector<double> probs(n);
    if (n == 0) return probs;
    if (workers == 0) workers = default_workers();

    const bool ode = params.kind == ModelKind::linear_ode ||
                     params.kind == ModelKind::catalysis;
    if (ode) {
        std::vector<double> class_p(data.n_classes());
        if (params.kind == ModelKind::linear_ode) {
            const LinearParams lp = params.to_linear();
            lp.validate();
            parallel_for(data.n_classes(), workers, [&](std::size_t ci) {
                const auto& rec = data.records[data.class_rep[ci]];
                const auto segs =
                    intensity_segments(rec.exposure, lp.prior_scale, lp.i_max);
                class_p[ci] =
                    final_probability_linear(lp, segs, lp.p_min, step_minutes, nullptr);
            });
        } else {
            const Potential pot(params.to_catalysis());
            const auto& cp = pot.params();
            parallel_for(data.n_classes(), workers, [&](std::size_t ci) {
                const auto& rec = data.records[data.class_rep[ci]];
                const auto segs =
                    intensity_segments(rec.exposure, cp.prior_scale, cp.i_max);
                class_p[ci] = final_probability_catalysis(pot, segs, cp.p_min,
                                                          step_minutes, nullptr);
            });
        }
        for (std::size_t i = 0; i < n; ++i) probs[i] = class_p[data.class_index[i]];
    } else {
        for (std::size_t i = 0; i < n; ++i) probs[i] = predict(params, data.records[i]);
    }
    return probs;
}

double negative_log_likelihood(const ModelParams& params, const PairDataset& data,
                               double step_minutes, unsigned workers) {
    const std::size_t n = data.records.size();
    if (n == 0) return 0;
    const auto probs = predicted_probabilities(params, data, step_minutes, workers);
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        terms[i] = bernoulli_term(probs[i], data.records[i].collaborated);
    }
    return pairwise_sum(terms);
}

double negative_log_likelihood(const ModelParams& params, const Conference& c,
                               double step_minutes, unsigned workers) {
    return negative_log_likelihood(params, PairDataset::build(c), step_minutes, workers);
}

namespace {

// value layouts are documented on ModelParams

std::vector<double> identity_vec(const std::vector<double>& v) { return v; }

std::vector<double> constant_to_u(const std::vector<double>& v) {
    return {logit(v.at(0))};
}
std::vector<double> constant_to_p(const std::vector<double>& u) {
    return {sigmoid(u.at(0))};
}

std::vector<double> threshold_to_u(const std::vector<double>& v) {
    const double ic = v.at(0), lo = v.at(1), hi = v.at(2);
    return {logit(ic / k_threshold_ref_i_max), logit(lo),
            logit((hi - lo) / (1.0 - lo))};
}
std::vector<double> threshold_to_p(const std::vector<double>& u) {
    const double ic = k_threshold_ref_i_max * sigmoid(u.at(0));
    const double lo = sigmoid(u.at(1));
    const double hi = lo + (1.0 - lo) * sigmoid(u.at(2));
    return {ic, lo, hi};
}

std::vector<double> linear_ode_to_u(const std::vector<double>& v) {
    // {S, W, p_min, p_max, i_max, a}
    return {safe_log(v.at(0)), safe_log(v.at(1)), logit(v.at(2)),
            logit((v.at(3) - v.at(2)) / (1.0 - v.at(2))), safe_log(v.at(4)),
            safe_log(v.at(5))};
}
std::vector<double> linear_ode_to_p(const std::vector<double>& u) {
    const double p_min = sigmoid(u.at(2));
    const double p_max = p_min + (1.0 - p_min) * sigmoid(u.at(3));
    return {safe_exp(u.at(0)), safe_exp(u.at(1)), p_min, p_max, safe_exp(u.at(4)),
            safe_exp(u.at(5))};
}

std::vector<double> catalysis_to_u(const std::vector<double>& v) {
    // {S, W, p_min, p_mem, p_max, i_c, i_max, a}
    const double p_min = v.at(2), p_mem = v.at(3), p_max = v.at(4);
    return {safe_log(v.at(0)),
            safe_log(v.at(1)),
            logit(p_min),
            logit((p_mem - p_min) / (1.0 - p_min)),
            logit((p_max - p_mem) / (1.0 - p_mem)),
            logit(v.at(5) / v.at(6)),
            safe_log(v.at(6)),
            safe_log(v.at(7))};
}
std::vector<double> catalysis_to_p(const std::vector<double>& u) {
    const double p_min = sigmoid(u.at(2));
    const double p_mem = p_min + (1.0 - p_min) * sigmoid(u.at(3));
    const double p_max = p_mem + (1.0 - p_mem) * sigmoid(u.at(4));
    const double i_max = safe_exp(u.at(6));
    const double i_c = i_max * sigmoid(u.at(5));
    return {safe_exp(u.at(0)), safe_exp(u.at(1)), p_min, p_mem,
            p_max,            i_c,               i_max, safe_exp(u.at(7))};
}

}  // namespace

ParamTransform transform_for(ModelKind kind) {
    switch (kind) {
        case ModelKind::constant_p:
            return {constant_to_u, constant_to_p};
        case ModelKind::linear_k0:
        case ModelKind::linear_itot:
        case ModelKind::linear_k0_itot:
        case ModelKind::random_uniform:
            return {identity_vec, identity_vec};
        case ModelKind::threshold:
            return {threshold_to_u, threshold_to_p};
        case ModelKind::linear_ode:
            return {linear_ode_to_u, linear_ode_to_p};
        case ModelKind::catalysis:
            return {catalysis_to_u, catalysis_to_p};
    }
    throw DomainError("unknown model kind");
}

std::vector<std::vector<double>> MultistartGrid::expand() const {
    std::vector<std::vector<double>> points{{}};
    for (const auto& axis : axis_values) {
        std::vector<std::vector<double>> next;
        next.reserve(points.size() * axis.size());
        for (const auto& p : points) {
            for (double v : axis) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

MultistartGrid default_grid(ModelKind kind) {
    // Cheap models: full 3-per-parameter factorial. ODE models: curated
    // reduced factorial (a full 3^6 / 3^8 multistart is far too slow).
    switch (kind) {
        case ModelKind::random_uniform:
            return {{}};
        case ModelKind::constant_p:
            return {{{0.01, 0.05, 0.25}}};
        case ModelKind::linear_k0:
            return {{{-0.02, 0.01, 0.05}, {0.01, 0.05, 0.2}}};
        case ModelKind::linear_itot:
            return {{{-0.001, 0.001, 0.01}, {0.01, 0.05, 0.2}}};
        case ModelKind::linear_k0_itot:
            return {{{-0.02, 0.01, 0.05}, {-0.001, 0.001, 0.01}, {0.01, 0.05, 0.2}}};
        case ModelKind::threshold:
            return {{{0.08, 0.22, 0.4}, {0.005, 0.02, 0.08}, {0.15, 0.35, 0.6}}};
        case ModelKind::linear_ode:
            // {S, W, p_min, p_max, i_max, a}
            return {{{0.002, 0.02}, {0.005}, {0.02}, {0.6}, {0.5, 1.0}, {0.01, 0.1}}};
        case ModelKind::catalysis:
            // {S, W, p_min, p_mem, p_max, i_c, i_max, a}
            return {{{0.02, 0.2}, {0.02}, {0.02}, {0.25, 0.45}, {0.85}, {0.12, 0.3},
                     {0.6}, {0.02}}};
    }
    throw DomainError("unknown model kind");
}

}  // namespace catalysis
