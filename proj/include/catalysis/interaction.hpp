#pragma once

#include <string>
#include <vector>

#include "catalysis/conference.hpp"

namespace catalysis {

// Effective one-on-one minutes contributed by co-attending a session of
// `minutes` length with `group_size` people: 2*T/N (equals T for N = 2).
double session_effective_interaction(double minutes, int group_size);

// Sum of 2*T/N over sessions where both ids sit in the same group.
double total_effective_interaction(const Conference& c, const std::string& a,
                                   const std::string& b);

// One piecewise-constant span of a pair's schedule occupancy.
// occupancy is 2/N inside a co-attended group, 0 during session time spent
// apart, and 2/N_tot between sessions.
struct ProfileSegment {
    double t_begin = 0;
    double t_end = 0;
    double occupancy = 0;
};

// Schedule-derived, parameter-free description of a pair's exposure over
// [t_start, t_collab]. Interaction intensity is an affine rescaling of this.
struct PairExposure {
    int k0 = 0;
    double i_tot = 0;  // effective minutes
    std::vector<ProfileSegment> segments;

    double t_begin() const { return segments.empty() ? 0 : segments.front().t_begin; }
    double t_end() const { return segments.empty() ? 0 : segments.back().t_end; }
};

PairExposure pair_exposure(const Conference& c, const std::string& a,
                           const std::string& b);

// Dimensionless interaction intensity I(t): right-continuous step function
//   I(t) = i_max/(6*prior_scale + 1) * (prior_scale*K0 + occupancy(t)),
// normalized so a 2-person session at K0 = 6 reaches exactly i_max.
struct InteractionProfile {
    std::string id_a, id_b;
    int k0 = 0;
    double i_tot = 0;
    double t_end = 0;
    // (time, intensity) breakpoints; intensity holds from each time to the next
    std::vector<std::pair<double, double>> breakpoints;

    double intensity_at(double t) const;
    double max_intensity() const;
};

InteractionProfile interaction_profile(const Conference& c, const std::string& a,
                                       const std::string& b, double prior_scale,
                                       double i_max);

// Intensity scaling applied to (prior_scale*k0 + occupancy).
inline double intensity_scale(double prior_scale, double i_max) {
    return i_max / (6.0 * prior_scale + 1.0);
}

InteractionProfile scale_exposure(const PairExposure& e, const std::string& a,
                                  const std::string& b, double prior_scale,
                                  double i_max);

}  // namespace catalysis
