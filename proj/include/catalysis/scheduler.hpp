#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "catalysis/conference.hpp"
#include "catalysis/stats.hpp"

namespace catalysis {

// Energy weights. The "hard" rules (small-group repeat pairing, topic
// interest below the minimum) carry large weights so annealing drives them
// out; anneal() additionally refuses to return solutions violating them.
struct ConstraintWeights {
    double repeat_pair_discussion = 1.0;
    double repeat_pair_small_group = 1000.0;  // hard
    double small_group_prior_knowledge = 5.0;
    double low_topic_interest = 1000.0;  // hard
    double attribute_homogeneity = 0.25;
    double interest_reward = 0.05;  // subtracted per member rating >= 4
    int min_topic_interest = 3;
};

struct AssignmentProblem {
    const Conference* conference = nullptr;
    std::vector<std::string> session_ids;  // sessions whose groups get reassigned
    ConstraintWeights weights;
    // attribute names balanced inside groups; empty = every attribute seen
    std::vector<std::string> diversity_attributes;
};

// Group assignment for the problem's sessions. Only fellows move; any
// facilitators present in the skeleton groups stay where they are.
struct ScheduleSolution {
    std::map<std::string, std::vector<std::vector<std::string>>> groups_by_session;
    double energy = 0;
    int rank = -1;
};

// Penalty total for one assignment; +inf when structurally invalid
// (member missing, duplicated, or group sizes changed).
double energy(const ScheduleSolution& solution, const AssignmentProblem& problem);

struct AnnealSchedule {
    double t0 = -1;           // < 0: calibrated so ~80% of probe moves accept
    double cooling = 0.995;   // geometric factor per sweep
    int sweeps = 500;
    int probe_moves = 100;
};

// Metropolis annealing with within-session swap moves; collects the
// n_solutions best distinct feasible assignments seen. Deterministic given
// seed. Distinctness = equality of group partitions per session.
std::vector<ScheduleSolution> anneal(const AssignmentProblem& problem,
                                     const AnnealSchedule& schedule,
                                     std::size_t n_solutions, std::uint64_t seed);

// Conference with the solution's group assignments substituted in.
Conference apply_solution(const Conference& c, const ScheduleSolution& solution);

struct CounterfactualReport {
    double i_bar_actual = 0;
    std::vector<double> i_bar_cf;              // one per (discussion, small-group) combo
    std::vector<int> discussion_index, small_group_index;
    std::vector<bool> shares_small_groups;     // combo's small groups == actual?
    TestReport wilcoxon;
    bool wilcoxon_computable = false;
    double fraction_actual_greater = 0;
};

// For every combination of discussion x small-group solutions, rebuilds the
// schedule, recomputes mean total effective interaction over the pairs that
// actually collaborated, and compares against the realized schedule.
CounterfactualReport counterfactual_analysis(
    const Conference& c, const std::vector<ScheduleSolution>& discussion_solutions,
    const std::vector<ScheduleSolution>& small_group_solutions);

}  // namespace catalysis
