#include "catalysis/dynamics.hpp"

#include <cmath>

namespace catalysis {

void LinearParams::validate() const {
    if (!(strengthening > 0) || !(weakening > 0)) {
        throw DomainError("rates must be positive");
    }
    if (!(0 <= p_min && p_min < p_max && p_max <= 1)) {
        throw DomainError("need 0 <= p_min < p_max <= 1");
    }
    if (!(i_max > 0)) throw DomainError("i_max must be positive");
    if (!(prior_scale >= 0)) throw DomainError("prior_scale must be >= 0");
}

namespace {

// dP/dt = gain - decay*P
struct AffineRate {
    double gain = 0;
    double decay = 0;
    double operator()(double p) const { return gain - decay * p; }
};

AffineRate linear_rate(const LinearParams& q, double intensity) {
    const double rel = intensity / q.i_max;
    const double c_s = q.strengthening * rel / (1.0 - q.p_min / q.p_max);
    const double c_w = q.weakening * (1.0 - rel) / q.p_max;
    const double target = q.verbatim_eq2_weakening ? q.p_max : q.p_min;
    return {c_s + c_w * target, c_s / q.p_max + c_w};
}

// Piecewise-linear -dV/dP at fixed intensity: up to 4 branches with shared
// vertices at the wells.
struct CatalysisRate {
    int n_junctions = 0;
    double junction[3] = {0, 0, 0};
    double rate2[4] = {0, 0, 0, 0};   // 2S or 2W per branch
    double vertex[4] = {0, 0, 0, 0};  // p_low or p_high per branch

    double operator()(double p) const {
        int b = 0;
        while (b < n_junctions && p >= junction[b]) ++b;
        return rate2[b] * (vertex[b] - p);
    }
};

CatalysisRate catalysis_rate(const Potential& pot, double intensity) {
    const auto& q = pot.params();
    const double two_s = 2.0 * q.strengthening, two_w = 2.0 * q.weakening;
    const double hi = pot.p_high(intensity);
    CatalysisRate r;
    switch (pot.regime(intensity)) {
        case PotentialRegime::low_i: {
            const double lo = pot.p_low(intensity);
            r.n_junctions = 3;
            r.junction[0] = lo;
            r.junction[1] = pot.p_med(intensity);
            r.junction[2] = hi;
            r.rate2[0] = two_s; r.vertex[0] = lo;
            r.rate2[1] = two_w; r.vertex[1] = lo;
            r.rate2[2] = two_s; r.vertex[2] = hi;
            r.rate2[3] = two_w; r.vertex[3] = hi;
            break;
        }
        case PotentialRegime::med_i: {
            r.n_junctions = 2;
            r.junction[0] = pot.p_int(intensity);
            r.junction[1] = hi;
            r.rate2[0] = two_s; r.vertex[0] = pot.p_low(intensity);
            r.rate2[1] = two_s; r.vertex[1] = hi;
            r.rate2[2] = two_w; r.vertex[2] = hi;
            break;
        }
        default:
            r.n_junctions = 1;
            r.junction[0] = hi;
            r.rate2[0] = two_s; r.vertex[0] = hi;
            r.rate2[1] = two_w; r.vertex[1] = hi;
            break;
    }
    return r;
}

struct NullObserver {
    void operator()(double, double) const {}
};

// Fixed-step RK4 over constant-rate segments; the last step of each segment
// is shortened to land exactly on its end. State clamped to [0,1] after
// every step.
template <typename RateForSegment, typename Observer>
double rk4_piecewise(const std::vector<IntensitySegment>& segments,
                     const RateForSegment& rate_for, double p0, double h,
                     long* clamp_events, Observer&& observe) {
    if (!(h > 0)) throw DomainError("step size must be positive");
    double p = std::min(1.0, std::max(0.0, p0));
    long clamps = 0;
    if (!segments.empty()) observe(segments.front().t_begin, p);
    for (const auto& seg : segments) {
        const double len = seg.t_end - seg.t_begin;
        if (len <= 0) continue;
        const auto rate = rate_for(seg);
        const long n = std::max<long>(1, static_cast<long>(std::ceil(len / h - 1e-9)));
        double t = seg.t_begin;
        for (long i = 0; i < n; ++i) {
            const bool last = (i == n - 1);
            const double dt = last ? seg.t_end - t : h;
            const double k1 = rate(p);
            const double k2 = rate(p + 0.5 * dt * k1);
            const double k3 = rate(p + 0.5 * dt * k2);
            const double k4 = rate(p + dt * k3);
            p += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!std::isfinite(p)) {
                throw NumericalError("non-finite state at t = " + std::to_string(t) +
                                     " (segment intensity " +
                                     std::to_string(seg.intensity) + ")");
            }
            if (p < 0.0) {
                p = 0.0;
                ++clamps;
            } else if (p > 1.0) {
                p = 1.0;
                ++clamps;
            }
            t = last ? seg.t_end : t + dt;
            observe(t, p);
        }
    }
    if (clamp_events) *clamp_events = clamps;
    return p;
}

template <typename RateForSegment>
Trajectory record_trajectory(const std::vector<IntensitySegment>& segments,
                             const RateForSegment& rate_for, double p0, double h) {
    Trajectory tr;
    tr.p_collab = rk4_piecewise(segments, rate_for, p0, h, &tr.clamp_events,
                                [&](double t, double p) {
                                    tr.times.push_back(t);
                                    tr.probabilities.push_back(p);
                                });
    if (tr.times.empty()) {
        tr.p_collab = std::min(1.0, std::max(0.0, p0));
    }
    return tr;
}

}  // namespace

double rhs_linear(const LinearParams& params, double intensity, double p) {
    params.validate();
    if (!(intensity >= 0) || intensity > params.i_max * (1.0 + 1e-9)) {
        throw DomainError("intensity outside [0, i_max]");
    }
    return linear_rate(params, intensity)(p);
}

double rhs_nonlinear(const Potential& potential, double intensity, double p) {
    return -potential.gradient(intensity, p);
}

double rhs_nonlinear(const CatalysisParams& params, double intensity, double p) {
    return -Potential(params).gradient(intensity, p);
}

double linear_potential_value(const LinearParams& params, double intensity, double p) {
    params.validate();
    const AffineRate r = linear_rate(params, intensity);
    const double equilibrium = r.gain / r.decay;
    return 0.5 * r.decay * (p - equilibrium) * (p - equilibrium);
}

double linear_potential_gradient(const LinearParams& params, double intensity,
                                 double p) {
    params.validate();
    return -linear_rate(params, intensity)(p);
}

std::vector<IntensitySegment> intensity_segments(const InteractionProfile& profile) {
    std::vector<IntensitySegment> out;
    for (std::size_t i = 0; i < profile.breakpoints.size(); ++i) {
        const double t0 = profile.breakpoints[i].first;
        const double t1 = i + 1 < profile.breakpoints.size()
                              ? profile.breakpoints[i + 1].first
                              : profile.t_end;
        out.push_back({t0, t1, profile.breakpoints[i].second});
    }
    return out;
}

std::vector<IntensitySegment> intensity_segments(const PairExposure& exposure,
                                                 double prior_scale, double i_max) {
    const double scale = intensity_scale(prior_scale, i_max);
    const double floor = scale * prior_scale * exposure.k0;
    std::vector<IntensitySegment> out;
    out.reserve(exposure.segments.size());
    for (const auto& seg : exposure.segments) {
        out.push_back({seg.t_begin, seg.t_end, floor + scale * seg.occupancy});
    }
    return out;
}

Trajectory integrate(const std::function<double(double, double)>& rhs,
                     const InteractionProfile& profile, double p0,
                     double step_minutes) {
    const auto segments = intensity_segments(profile);
    auto rate_for = [&](const IntensitySegment& seg) {
        return [&rhs, I = seg.intensity](double p) { return rhs(I, p); };
    };
    return record_trajectory(segments, rate_for, p0, step_minutes);
}

Trajectory integrate_linear(const LinearParams& params,
                            const InteractionProfile& profile, double p0,
                            double step_minutes) {
    params.validate();
    const auto segments = intensity_segments(profile);
    auto rate_for = [&](const IntensitySegment& seg) {
        return linear_rate(params, seg.intensity);
    };
    return record_trajectory(segments, rate_for, p0, step_minutes);
}

Trajectory integrate_catalysis(const CatalysisParams& params,
                               const InteractionProfile& profile, double p0,
                               double step_minutes) {
    const Potential pot(params);
    const auto segments = intensity_segments(profile);
    auto rate_for = [&](const IntensitySegment& seg) {
        return catalysis_rate(pot, seg.intensity);
    };
    return record_trajectory(segments, rate_for, p0, step_minutes);
}

double final_probability_linear(const LinearParams& params,
                                const std::vector<IntensitySegment>& segments,
                                double p0, double step_minutes, long* clamp_events) {
    auto rate_for = [&](const IntensitySegment& seg) {
        return linear_rate(params, seg.intensity);
    };
    return rk4_piecewise(segments, rate_for, p0, step_minutes, clamp_events,
                         NullObserver{});
}

double final_probability_catalysis(const Potential& potential,
                                   const std::vector<IntensitySegment>& segments,
                                   double p0, double step_minutes, long* clamp_events) {
    auto rate_for = [&](const IntensitySegment& seg) {
        return catalysis_rate(potential, seg.intensity);
    };
    return rk4_piecewise(segments, rate_for, p0, step_minutes, clamp_events,
                         NullObserver{});
}

namespace {

double clip_probability(double p) {
    return std::min(1.0 - k_probability_clip, std::max(k_probability_clip, p));
}

}  // namespace

double collaboration_probability(const LinearParams& params, const Conference& c,
                                 const std::string& a, const std::string& b,
                                 double step_minutes) {
    params.validate();
    const auto exposure = pair_exposure(c, a, b);
    const auto segments = intensity_segments(exposure, params.prior_scale, params.i_max);
    return clip_probability(
        final_probability_linear(params, segments, params.p_min, step_minutes));
}

double collaboration_probability(const CatalysisParams& params, const Conference& c,
                                 const std::string& a, const std::string& b,
                                 double step_minutes) {
    const Potential pot(params);
    const auto exposure = pair_exposure(c, a, b);
    const auto segments = intensity_segments(exposure, params.prior_scale, params.i_max);
    return clip_probability(
        final_probability_catalysis(pot, segments, params.p_min, step_minutes));
}

}  // namespace catalysis
