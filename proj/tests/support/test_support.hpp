#pragma once

// Shared fixtures and independent oracles for the unit and acceptance suites.
// Oracles here must stay independent of the library's implementation paths.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "catalysis/conference.hpp"
#include "catalysis/interaction.hpp"
#include "catalysis/potential.hpp"
#include "catalysis/rng.hpp"

namespace testsupport {

// ---------------------------------------------------------------------------
// Closed forms of the supplementary special-case potentials (oracles).

// simplest: P_min=0, P_max=1, I_max=1, I_c=1/2, S=W
inline double simplest_potential(double w, double p_mem, double I, double p) {
    if (p < 0.5 * p_mem * (1.0 - I)) {
        return w * ((p - 0.5 * I * p_mem) * (p - 0.5 * I * p_mem) -
                    0.25 * I * (p_mem + 2.0) * (3.0 * I * p_mem - 2.0 * I - 2.0 * p_mem));
    }
    const double r = p - I - (1.0 - I) * p_mem;
    return w * r * r;
}

// simplified: P_min=0, P_max=1, I_max=1, I_c=1/2, S=2W
inline double simplified_p_int(double p_mem, double I) {
    return -p_mem * ((I * I - 2.0 * I + 7.0 / 8.0) * p_mem - I * I + I) /
           (3.0 * I * p_mem - 2.0 * I - 2.0 * p_mem);
}

inline double simplified_potential(double w, double p_mem, double I, double p) {
    const double upper = p - I - (1.0 - I) * p_mem;  // shared (P - upper-well) term
    const double lower = p - 0.5 * I * p_mem;
    const double p_high = p_mem + (1.0 - p_mem) * I;
    const double branch1 = 2.0 * w * (lower * lower +
                                      (-0.25 * p_mem * p_mem - p_mem + 1.0) * I * I +
                                      I * p_mem + 0.125 * p_mem * p_mem);
    if (I <= 0.5) {
        if (p <= 0.5 * I * p_mem) return branch1;
        if (p <= 0.5 * (1.0 - I) * p_mem) {
            return w * (lower * lower + (-0.5 * p_mem * p_mem - 2.0 * p_mem + 2.0) * I * I +
                        2.0 * I * p_mem + 0.25 * p_mem * p_mem);
        }
        return (p <= p_high ? 2.0 : 1.0) * w * upper * upper;
    }
    const double p_int = simplified_p_int(p_mem, I);
    if (p_int >= 0.0 && p_int <= 1.0) {  // medium regime
        if (p <= p_int) return branch1;
        return (p <= p_high ? 2.0 : 1.0) * w * upper * upper;
    }
    return (p <= p_high ? 2.0 : 1.0) * w * upper * upper;
}

// ---------------------------------------------------------------------------
// Random admissible catalysis parameters.

inline catalysis::CatalysisParams random_params(catalysis::Rng& rng) {
    catalysis::CatalysisParams q;
    q.strengthening = std::exp(rng.uniform(std::log(0.05), std::log(5.0)));
    q.weakening = std::exp(rng.uniform(std::log(0.05), std::log(5.0)));
    q.p_min = rng.uniform(0.0, 0.3);
    q.p_mem = q.p_min + 0.05 + rng.uniform() * (0.7 - q.p_min - 0.05);
    q.p_max = q.p_mem + 0.05 + rng.uniform() * (1.0 - q.p_mem - 0.05);
    q.i_max = rng.uniform(0.3, 5.0);
    q.i_c = q.i_max * rng.uniform(0.05, 0.8);
    q.prior_scale = rng.uniform(0.0, 0.2);
    return q;
}

// Fig. 3 caption parameter set.
inline catalysis::CatalysisParams fig3_params() {
    catalysis::CatalysisParams q;
    q.strengthening = 0.5;
    q.weakening = 1.0;
    q.p_min = 0.1;
    q.p_mem = 0.6;
    q.p_max = 0.9;
    q.i_c = 0.2;
    q.i_max = 0.6;
    q.prior_scale = 0.02;
    return q;
}

// Interaction profile of the Fig. 3 demo scenario: 64 participants, one
// 30-min 4-person session followed by two 75-min 12-person sessions over a
// two-day window. K0 = 0.
inline catalysis::InteractionProfile fig3_profile(double prior_scale, double i_max) {
    using catalysis::intensity_scale;
    const double scale = intensity_scale(prior_scale, i_max);
    const double baseline = scale * (2.0 / 64.0);
    catalysis::InteractionProfile p;
    p.id_a = "a";
    p.id_b = "b";
    p.k0 = 0;
    p.t_end = 2340;
    const double small = scale * (2.0 / 4.0);
    const double medium = scale * (2.0 / 12.0);
    p.breakpoints = {
        {0, baseline},     {120, small},     {150, baseline}, {480, medium},
        {555, baseline},   {1320, medium},   {1395, baseline},
    };
    p.i_tot = 2.0 * 30 / 4 + 2.0 * 75 / 12 + 2.0 * 75 / 12;
    return p;
}

// ---------------------------------------------------------------------------
// Tiny hand-built conference fixtures.

inline catalysis::Participant fellow(const std::string& id) {
    catalysis::Participant p;
    p.id = id;
    p.role = catalysis::Role::fellow;
    return p;
}

inline catalysis::Participant facilitator(const std::string& id) {
    catalysis::Participant p;
    p.id = id;
    p.role = catalysis::Role::facilitator;
    return p;
}

// Four fellows, one 60-min discussion with groups {a,b},{c,d}, one 30-min
// small group {a,c},{b,d}; t spans [0, 300].
inline catalysis::Conference mini_conference() {
    catalysis::Conference c;
    for (const char* id : {"a", "b", "c", "d"}) c.participants.push_back(fellow(id));
    catalysis::Session d1;
    d1.id = "d1";
    d1.kind = catalysis::SessionKind::discussion;
    d1.start = 60;
    d1.end = 120;
    d1.groups = {{"a", "b"}, {"c", "d"}};
    catalysis::Session s1;
    s1.id = "s1";
    s1.kind = catalysis::SessionKind::small_group;
    s1.start = 150;
    s1.end = 180;
    s1.groups = {{"a", "c"}, {"b", "d"}};
    c.sessions = {d1, s1};
    c.t_start = 0;
    c.t_collab = 300;
    return c;
}

}  // namespace testsupport
