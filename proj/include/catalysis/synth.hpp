#pragma once

#include <cstdint>
#include <vector>

#include "catalysis/conference.hpp"
#include "catalysis/models.hpp"

namespace catalysis {

// Recipe for a synthetic conference. Defaults give a one-day desk-scale
// program: discussion sessions of 75 min, small-group sessions of 30 min,
// origin one hour before the first session.
struct SynthSpec {
    int n_fellows = 50;
    int n_facilitators = 10;
    int n_discussion_sessions = 3;
    int n_smallgroup_sessions = 2;
    int discussion_minutes = 75;
    int smallgroup_minutes = 30;
    int gap_minutes = 15;
    int pre_first_session_minutes = 60;
    int collab_gap_minutes = 60;
    // categorical distribution of K0 over 0..6; skewed toward 0
    std::vector<double> k0_distribution = {0.62, 0.15, 0.09, 0.06, 0.04, 0.03, 0.01};
    std::uint64_t seed = 1;
};

// Builds participants, timetable, annealed group assignments and sampled
// prior knowledge. Deterministic given spec.seed. No proposal teams yet.
Conference generate_conference(const SynthSpec& spec);

// Draws one Bernoulli outcome per eligible pair from the model's
// probabilities and records collaborating pairs as 2-person proposal teams.
// merge_teams joins overlapping pairs into teams of up to 4.
Conference generate_outcomes(const Conference& c, const ModelParams& model,
                             std::uint64_t seed, bool merge_teams = false,
                             double step_minutes = k_default_step_minutes);

// Documented default generating parameters for synthetic outcomes; tuned so
// the overall collaboration rate lands in a plausible few-percent band.
CatalysisParams default_synth_catalysis_params();

}  // namespace catalysis
