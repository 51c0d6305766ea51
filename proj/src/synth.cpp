#include "catalysis/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "catalysis/rng.hpp"
#include "catalysis/scheduler.hpp"

namespace catalysis {

namespace {

std::string padded_id(const char* prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
    return buf;
}

// as-even-as-possible group sizes: `count` members into groups within
// [min_size, max_size]
std::vector<int> split_sizes(int count, int min_size, int max_size) {
    if (count < min_size) throw DomainError("too few members for one group");
    int n_groups = std::max(1, (count + max_size - 1) / max_size);
    while (count / n_groups > max_size) ++n_groups;
    std::vector<int> sizes(n_groups, count / n_groups);
    for (int i = 0; i < count % n_groups; ++i) ++sizes[i];
    for (int s : sizes) {
        if (s < min_size || s > max_size) {
            throw DomainError("group-size arithmetic infeasible for " +
                              std::to_string(count) + " members in [" +
                              std::to_string(min_size) + "," +
                              std::to_string(max_size) + "]");
        }
    }
    return sizes;
}

const char* k_disciplines[] = {"chemistry", "physics", "biology", "materials",
                               "computation"};
const char* k_methodologies[] = {"theory", "experiment", "mixed"};

struct BuildAttempt {
    Conference conference;
    std::vector<std::string> discussion_ids, smallgroup_ids;
};

BuildAttempt build_skeleton(const SynthSpec& spec, std::uint64_t attempt_seed) {
    Rng rng(attempt_seed);
    BuildAttempt out;
    Conference& c = out.conference;

    for (int i = 1; i <= spec.n_fellows; ++i) {
        Participant p;
        p.id = padded_id("f", i);
        p.role = Role::fellow;
        p.attributes["discipline"] = k_disciplines[rng.uniform_index(5)];
        p.attributes["methodology"] = k_methodologies[rng.uniform_index(3)];
        p.attributes["gender"] = rng.uniform() < 0.1 ? "x" : (rng.uniform() < 0.5 ? "f" : "m");
        c.participants.push_back(std::move(p));
    }
    for (int i = 1; i <= spec.n_facilitators; ++i) {
        Participant p;
        p.id = padded_id("c", i);
        p.role = Role::facilitator;
        p.attributes["discipline"] = k_disciplines[rng.uniform_index(5)];
        p.attributes["methodology"] = k_methodologies[rng.uniform_index(3)];
        p.attributes["gender"] = rng.uniform() < 0.1 ? "x" : (rng.uniform() < 0.5 ? "f" : "m");
        c.participants.push_back(std::move(p));
    }

    const auto fellows = c.fellow_ids();

    // timetable: alternate discussion / small-group blocks
    struct Slot {
        SessionKind kind;
        int minutes;
    };
    std::vector<Slot> slots;
    int nd = spec.n_discussion_sessions, ns = spec.n_smallgroup_sessions;
    while (nd > 0 || ns > 0) {
        if (nd > 0) {
            slots.push_back({SessionKind::discussion, spec.discussion_minutes});
            --nd;
        }
        if (ns > 0) {
            slots.push_back({SessionKind::small_group, spec.smallgroup_minutes});
            --ns;
        }
    }

    c.t_start = 0;
    int t = spec.pre_first_session_minutes;
    int d_index = 0, s_index = 0;
    for (const auto& slot : slots) {
        Session s;
        s.kind = slot.kind;
        s.start = t;
        s.end = t + slot.minutes;
        t = s.end + spec.gap_minutes;

        if (slot.kind == SessionKind::discussion) {
            s.id = "d" + std::to_string(++d_index);
            const auto sizes = split_sizes(static_cast<int>(fellows.size()), 6, 10);
            // round-robin initial placement; the annealer rearranges
            std::size_t next = 0;
            for (std::size_t g = 0; g < sizes.size(); ++g) {
                std::vector<std::string> group;
                for (int k = 0; k < sizes[g]; ++k) group.push_back(fellows[next++]);
                s.groups.push_back(std::move(group));
                s.group_topics.push_back(s.id + "_t" + std::to_string(g + 1));
            }
            // facilitators are fixed inputs, spread over groups
            for (int f = 0; f < spec.n_facilitators; ++f) {
                s.groups[f % s.groups.size()].push_back(padded_id("c", f + 1));
            }
            out.discussion_ids.push_back(s.id);
        } else {
            s.id = "s" + std::to_string(++s_index);
            const auto sizes = split_sizes(static_cast<int>(fellows.size()), 3, 4);
            std::size_t next = 0;
            for (int size : sizes) {
                std::vector<std::string> group;
                for (int k = 0; k < size; ++k) group.push_back(fellows[next++]);
                s.groups.push_back(std::move(group));
            }
            out.smallgroup_ids.push_back(s.id);
        }
        c.sessions.push_back(std::move(s));
    }
    c.t_collab = c.sessions.empty()
                     ? spec.collab_gap_minutes
                     : c.sessions.back().end + spec.collab_gap_minutes;

    // topic interests: mostly enthusiastic, with a guaranteed pair of
    // >=3 ratings per session so hard assignment constraints stay feasible
    for (auto& p : c.participants) {
        if (p.role != Role::fellow) continue;
        for (const auto& s : c.sessions) {
            if (s.kind != SessionKind::discussion) continue;
            std::vector<std::string> topics = s.group_topics;
            int enough = 0;
            for (const auto& topic : topics) {
                const double u = rng.uniform();
                int rating = u < 0.08 ? 1 : u < 0.2 ? 2 : u < 0.45 ? 3 : u < 0.75 ? 4 : 5;
                p.topic_interests[topic] = rating;
                if (rating >= 3) ++enough;
            }
            while (enough < 2 && !topics.empty()) {
                const auto& topic = topics[rng.uniform_index(topics.size())];
                if (p.topic_interests[topic] < 3) {
                    p.topic_interests[topic] = 3;
                    ++enough;
                }
            }
        }
    }

    // prior knowledge per fellow pair
    std::vector<double> cdf;
    double acc = 0;
    for (double w : spec.k0_distribution) {
        acc += w;
        cdf.push_back(acc);
    }
    if (std::abs(acc - 1.0) > 1e-9) throw DomainError("k0 distribution must sum to 1");
    for (std::size_t i = 0; i < fellows.size(); ++i) {
        for (std::size_t j = i + 1; j < fellows.size(); ++j) {
            const double u = rng.uniform();
            int k0 = 0;
            while (k0 + 1 < static_cast<int>(cdf.size()) && u >= cdf[k0]) ++k0;
            if (k0 > 0) c.prior_knowledge.set(fellows[i], fellows[j], k0);
        }
    }
    return out;
}

}  // namespace

Conference generate_conference(const SynthSpec& spec) {
    if (spec.n_fellows < 4) throw DomainError("need at least 4 fellows");
    if (spec.n_facilitators < 0) throw DomainError("negative facilitator count");

    // annealing occasionally cannot satisfy the hard constraints for an
    // unlucky interest draw; retry with a derived seed
    for (int attempt = 0; attempt < 5; ++attempt) {
        BuildAttempt built = build_skeleton(spec, Rng::derive(spec.seed, attempt));
        Conference& c = built.conference;

        AnnealSchedule sched;
        sched.sweeps = 150;

        bool ok = true;
        if (!built.discussion_ids.empty()) {
            AssignmentProblem problem;
            problem.conference = &c;
            problem.session_ids = built.discussion_ids;
            auto best = anneal(problem, sched, 1, Rng::derive(spec.seed, 100 + attempt));
            if (best.empty()) {
                ok = false;
            } else {
                c = apply_solution(c, best.front());
            }
        }
        if (ok && !built.smallgroup_ids.empty()) {
            AssignmentProblem problem;
            problem.conference = &c;
            problem.session_ids = built.smallgroup_ids;
            auto best = anneal(problem, sched, 1, Rng::derive(spec.seed, 200 + attempt));
            if (best.empty()) {
                ok = false;
            } else {
                c = apply_solution(c, best.front());
            }
        }
        if (!ok) continue;

        auto violations = validate(c);
        if (!violations.empty()) throw ValidationError(std::move(violations));
        return c;
    }
    throw NumericalError("could not build a feasible synthetic conference");
}

Conference generate_outcomes(const Conference& c, const ModelParams& model,
                             std::uint64_t seed, bool merge_teams,
                             double step_minutes) {
    Conference out = c;
    out.proposal_teams.clear();

    const PairDataset data = PairDataset::build(c);
    const auto probs = predicted_probabilities(model, data, step_minutes);

    Rng rng(seed);
    std::vector<PairKey> collaborating;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        if (rng.bernoulli(probs[i])) {
            collaborating.emplace_back(data.records[i].id_a, data.records[i].id_b);
        }
    }

    if (!merge_teams) {
        for (const auto& [a, b] : collaborating) {
            out.proposal_teams.push_back({{a, b}, false});
        }
        return out;
    }

    // greedy merge of overlapping pairs into teams of up to 4; note that a
    // merged team marks all its internal pairs as collaborating
    std::vector<std::set<std::string>> teams;
    for (const auto& [a, b] : collaborating) {
        bool placed = false;
        for (auto& team : teams) {
            if ((team.count(a) || team.count(b)) && team.size() < 4) {
                team.insert(a);
                team.insert(b);
                placed = true;
                break;
            }
        }
        if (!placed) teams.push_back({a, b});
    }
    for (const auto& team : teams) {
        out.proposal_teams.push_back({{team.begin(), team.end()}, false});
    }
    return out;
}

CatalysisParams default_synth_catalysis_params() {
    CatalysisParams p;
    p.strengthening = 0.06;
    p.weakening = 0.008;
    p.p_min = 0.02;
    p.p_mem = 0.32;
    p.p_max = 0.9;
    p.i_c = 0.2;
    p.i_max = 0.6;
    p.prior_scale = 0.02;
    return p;
}

}  // namespace catalysis
