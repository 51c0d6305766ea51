#pragma once

#include <functional>
#include <string>
#include <vector>

#include "catalysis/conference.hpp"
#include "catalysis/interaction.hpp"
#include "catalysis/potential.hpp"

namespace catalysis {

inline constexpr double k_default_step_minutes = 0.5;
inline constexpr double k_probability_clip = 1e-9;

// Parameter set of the bounded linear model.
//
// dP/dt = S*(I/i_max)*(1 - P/p_max)/(1 - p_min/p_max)
//         - W*((P - p_min)/p_max)*(1 - I/i_max)
//
// The weakening factor uses (P - p_min) so the model relaxes to p_min once
// interaction stops. verbatim_eq2_weakening switches to (P - p_max) for
// comparison runs; that variant relaxes to p_max instead.
struct LinearParams {
    double strengthening = 1.0;
    double weakening = 1.0;
    double p_min = 0.0;
    double p_max = 1.0;
    double i_max = 1.0;
    double prior_scale = 0.0;
    bool verbatim_eq2_weakening = false;

    void validate() const;
};

double rhs_linear(const LinearParams& params, double intensity, double p);
double rhs_nonlinear(const CatalysisParams& params, double intensity, double p);
double rhs_nonlinear(const Potential& potential, double intensity, double p);

// Quadratic potential of the linear model, offset so its minimum is 0.
double linear_potential_value(const LinearParams& params, double intensity, double p);
double linear_potential_gradient(const LinearParams& params, double intensity,
                                 double p);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> probabilities;
    double p_collab = 0;
    long clamp_events = 0;
};

// Constant-intensity span handed to the integrator.
struct IntensitySegment {
    double t_begin = 0;
    double t_end = 0;
    double intensity = 0;
};

std::vector<IntensitySegment> intensity_segments(const InteractionProfile& profile);
std::vector<IntensitySegment> intensity_segments(const PairExposure& exposure,
                                                 double prior_scale, double i_max);

// Classic fixed-step RK4 over a piecewise-constant intensity profile. Steps
// are shortened to land exactly on every segment boundary, so no step ever
// straddles a discontinuity. State is clamped to [0,1] after each step;
// clamp events are counted. Throws NumericalError on non-finite state.
Trajectory integrate(const std::function<double(double, double)>& rhs,
                     const InteractionProfile& profile, double p0,
                     double step_minutes = k_default_step_minutes);

Trajectory integrate_linear(const LinearParams& params,
                            const InteractionProfile& profile, double p0,
                            double step_minutes = k_default_step_minutes);
Trajectory integrate_catalysis(const CatalysisParams& params,
                               const InteractionProfile& profile, double p0,
                               double step_minutes = k_default_step_minutes);

// Path-free fast equivalents (identical stepping, identical results).
double final_probability_linear(const LinearParams& params,
                                const std::vector<IntensitySegment>& segments,
                                double p0, double step_minutes,
                                long* clamp_events = nullptr);
double final_probability_catalysis(const Potential& potential,
                                   const std::vector<IntensitySegment>& segments,
                                   double p0, double step_minutes,
                                   long* clamp_events = nullptr);

// Builds the pair's profile, integrates from P = p_min, clips the endpoint
// to [k_probability_clip, 1 - k_probability_clip] for likelihood use.
double collaboration_probability(const LinearParams& params, const Conference& c,
                                 const std::string& a, const std::string& b,
                                 double step_minutes = k_default_step_minutes);
double collaboration_probability(const CatalysisParams& params, const Conference& c,
                                 const std::string& a, const std::string& b,
                                 double step_minutes = k_default_step_minutes);

}  // namespace catalysis
