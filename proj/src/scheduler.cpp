#include "catalysis/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "catalysis/interaction.hpp"
#include "catalysis/rng.hpp"

namespace catalysis {

namespace {

constexpr double k_inf = std::numeric_limits<double>::infinity();

const Session* find_session(const Conference& c, const std::string& id) {
    for (const auto& s : c.sessions) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Integer-indexed view of the assignment problem so the annealing loop never
// touches strings.
struct Scorer {
    const AssignmentProblem* problem = nullptr;
    std::vector<std::string> ids;                    // participant index -> id
    std::unordered_map<std::string, int> index_of;   // id -> participant index
    std::vector<char> is_fellow;
    std::vector<std::vector<int>> attr_of;           // [attribute][pidx] -> category (-1 none)
    std::vector<std::vector<int>> k0;                // dense pairwise prior knowledge
    int n = 0;

    struct SessionView {
        SessionKind kind = SessionKind::other;
        std::vector<std::size_t> group_sizes;
        // rating_of[group][pidx]: topic interest, -1 when group has no topic
        std::vector<std::vector<int>> rating_of;
    };
    std::vector<SessionView> sessions;  // order of problem->session_ids

    explicit Scorer(const AssignmentProblem& p) : problem(&p) {
        const Conference& c = *p.conference;
        n = static_cast<int>(c.participants.size());
        ids.reserve(n);
        for (int i = 0; i < n; ++i) {
            ids.push_back(c.participants[i].id);
            index_of[c.participants[i].id] = i;
            is_fellow.push_back(c.participants[i].role == Role::fellow);
        }

        std::vector<std::string> attrs = p.diversity_attributes;
        if (attrs.empty()) {
            std::set<std::string> names;
            for (const auto& part : c.participants) {
                for (const auto& [k, v] : part.attributes) names.insert(k);
            }
            attrs.assign(names.begin(), names.end());
        }
        for (const auto& a : attrs) {
            std::vector<int> col(n, -1);
            std::map<std::string, int> cats;
            for (int i = 0; i < n; ++i) {
                auto it = c.participants[i].attributes.find(a);
                if (it == c.participants[i].attributes.end()) continue;
                auto [cit, ins] = cats.try_emplace(it->second, static_cast<int>(cats.size()));
                col[i] = cit->second;
            }
            attr_of.push_back(std::move(col));
        }

        k0.assign(n, std::vector<int>(n, 0));
        for (const auto& [key, v] : c.prior_knowledge.entries()) {
            auto a = index_of.find(key.first);
            auto b = index_of.find(key.second);
            if (a == index_of.end() || b == index_of.end()) continue;
            k0[a->second][b->second] = v;
            k0[b->second][a->second] = v;
        }

        for (const auto& sid : p.session_ids) {
            const Session* s = find_session(c, sid);
            if (!s) throw DomainError("unknown session id '" + sid + "'");
            SessionView view;
            view.kind = s->kind;
            for (const auto& g : s->groups) view.group_sizes.push_back(g.size());
            view.rating_of.assign(s->groups.size(), {});
            for (std::size_t g = 0; g < s->groups.size(); ++g) {
                if (s->kind != SessionKind::discussion || g >= s->group_topics.size() ||
                    s->group_topics[g].empty()) {
                    continue;
                }
                const std::string& topic = s->group_topics[g];
                std::vector<int> ratings(n, 0);
                for (int i = 0; i < n; ++i) {
                    auto it = c.participants[i].topic_interests.find(topic);
                    ratings[i] = it == c.participants[i].topic_interests.end() ? 0 : it->second;
                }
                view.rating_of[g] = std::move(ratings);
            }
            sessions.push_back(std::move(view));
        }
    }

    struct Breakdown {
        double soft = 0;
        long hard = 0;
    };

    // state: [session][group] -> participant indices
    Breakdown score(const std::vector<std::vector<std::vector<int>>>& state) const {
        const auto& w = problem->weights;
        Breakdown e;
        std::unordered_map<std::uint64_t, int> small_pairs, disc_pairs;
        small_pairs.reserve(256);
        disc_pairs.reserve(1024);

        for (std::size_t si = 0; si < sessions.size(); ++si) {
            const auto& view = sessions[si];
            auto& pair_counts =
                view.kind == SessionKind::small_group ? small_pairs : disc_pairs;
            for (std::size_t gi = 0; gi < state[si].size(); ++gi) {
                const auto& g = state[si][gi];
                for (std::size_t i = 0; i < g.size(); ++i) {
                    for (std::size_t j = i + 1; j < g.size(); ++j) {
                        const int lo = std::min(g[i], g[j]), hi = std::max(g[i], g[j]);
                        ++pair_counts[static_cast<std::uint64_t>(lo) << 32 |
                                      static_cast<std::uint32_t>(hi)];
                        if (view.kind == SessionKind::small_group && k0[lo][hi] > 0) {
                            e.soft += w.small_group_prior_knowledge;
                        }
                    }
                }
                if (!view.rating_of[gi].empty()) {
                    for (int m : g) {
                        if (!is_fellow[m]) continue;
                        const int rating = view.rating_of[gi][m];
                        if (rating < w.min_topic_interest) {
                            e.soft += w.low_topic_interest;
                            ++e.hard;
                        } else if (rating >= 4) {
                            e.soft -= w.interest_reward;
                        }
                    }
                }
                for (const auto& col : attr_of) {
                    // same-category pair count within the group
                    int counts[32] = {0};
                    for (int m : g) {
                        const int cat = col[m];
                        if (cat >= 0 && cat < 32) ++counts[cat];
                    }
                    for (int cat = 0; cat < 32; ++cat) {
                        if (counts[cat] > 1) {
                            e.soft += w.attribute_homogeneity * counts[cat] *
                                      (counts[cat] - 1) / 2.0;
                        }
                    }
                }
            }
        }
        for (const auto& [key, count] : disc_pairs) {
            if (count > 1) e.soft += w.repeat_pair_discussion * (count - 1);
        }
        for (const auto& [key, count] : small_pairs) {
            if (count > 1) {
                e.soft += w.repeat_pair_small_group * (count - 1);
                e.hard += count - 1;
            }
        }
        return e;
    }

    std::uint64_t state_hash(const std::vector<std::vector<std::vector<int>>>& state) const {
        std::uint64_t h = 0x2545f4914f6cdd1dULL;
        for (const auto& session : state) {
            std::vector<std::uint64_t> group_hashes;
            group_hashes.reserve(session.size());
            for (const auto& g : session) {
                auto sorted = g;
                std::sort(sorted.begin(), sorted.end());
                std::uint64_t gh = 0x9e3779b97f4a7c15ULL;
                for (int m : sorted) gh = mix64(gh ^ static_cast<std::uint64_t>(m + 1));
                group_hashes.push_back(gh);
            }
            std::sort(group_hashes.begin(), group_hashes.end());
            std::uint64_t sh = 0x6a09e667f3bcc909ULL;
            for (std::uint64_t gh : group_hashes) sh = mix64(sh ^ gh);
            h = mix64(h ^ sh);
        }
        return h;
    }
};

bool structurally_consistent(
    const std::map<std::string, std::vector<std::vector<std::string>>>& assignment,
    const AssignmentProblem& problem) {
    for (const auto& sid : problem.session_ids) {
        const Session* skel = find_session(*problem.conference, sid);
        auto it = assignment.find(sid);
        if (!skel || it == assignment.end() || it->second.size() != skel->groups.size()) {
            return false;
        }
        std::multiset<std::string> skel_members, now_members;
        std::set<std::string> unique_now;
        for (std::size_t g = 0; g < skel->groups.size(); ++g) {
            if (it->second[g].size() != skel->groups[g].size()) return false;
            skel_members.insert(skel->groups[g].begin(), skel->groups[g].end());
            now_members.insert(it->second[g].begin(), it->second[g].end());
            unique_now.insert(it->second[g].begin(), it->second[g].end());
        }
        if (skel_members != now_members || unique_now.size() != now_members.size()) {
            return false;
        }
    }
    return true;
}

}  // namespace

double energy(const ScheduleSolution& solution, const AssignmentProblem& problem) {
    if (!problem.conference) throw DomainError("assignment problem has no conference");
    if (!structurally_consistent(solution.groups_by_session, problem)) return k_inf;
    const Scorer scorer(problem);
    std::vector<std::vector<std::vector<int>>> state;
    for (const auto& sid : problem.session_ids) {
        const auto& groups = solution.groups_by_session.at(sid);
        std::vector<std::vector<int>> sg;
        for (const auto& g : groups) {
            std::vector<int> gi;
            for (const auto& m : g) gi.push_back(scorer.index_of.at(m));
            sg.push_back(std::move(gi));
        }
        state.push_back(std::move(sg));
    }
    return scorer.score(state).soft;
}

std::vector<ScheduleSolution> anneal(const AssignmentProblem& problem,
                                     const AnnealSchedule& schedule,
                                     std::size_t n_solutions, std::uint64_t seed) {
    if (!problem.conference) throw DomainError("assignment problem has no conference");
    if (problem.session_ids.empty()) throw DomainError("no sessions to assign");
    if (n_solutions == 0) throw DomainError("n_solutions must be positive");
    const Conference& c = *problem.conference;
    const Scorer scorer(problem);

    // state + movable fellow slots per session
    std::vector<std::vector<std::vector<int>>> state;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> slots;
    for (const auto& sid : problem.session_ids) {
        const Session* s = find_session(c, sid);
        std::vector<std::vector<int>> sg;
        std::vector<std::pair<std::size_t, std::size_t>> sl;
        std::set<int> seen;
        for (std::size_t g = 0; g < s->groups.size(); ++g) {
            std::vector<int> gi;
            for (const auto& m : s->groups[g]) {
                auto it = scorer.index_of.find(m);
                if (it == scorer.index_of.end()) {
                    throw DomainError("session '" + sid + "' member '" + m +
                                      "' is not a participant");
                }
                if (!seen.insert(it->second).second) {
                    throw DomainError("session '" + sid + "' repeats member '" + m + "'");
                }
                if (scorer.is_fellow[it->second]) sl.emplace_back(g, gi.size());
                gi.push_back(it->second);
            }
            sg.push_back(std::move(gi));
        }
        state.push_back(std::move(sg));
        slots.push_back(std::move(sl));
    }

    Rng rng(seed);

    // shuffle fellows within each session for the initial state
    for (std::size_t si = 0; si < state.size(); ++si) {
        auto& sl = slots[si];
        std::vector<int> pool;
        for (const auto& [g, i] : sl) pool.push_back(state[si][g][i]);
        for (std::size_t i = pool.size(); i > 1; --i) {
            std::swap(pool[i - 1], pool[rng.uniform_index(i)]);
        }
        for (std::size_t k = 0; k < sl.size(); ++k) {
            state[si][sl[k].first][sl[k].second] = pool[k];
        }
    }

    auto propose = [&](std::size_t& si, std::pair<std::size_t, std::size_t>& a,
                       std::pair<std::size_t, std::size_t>& b) {
        si = rng.uniform_index(state.size());
        const auto& sl = slots[si];
        if (sl.size() < 2) return false;
        for (int tries = 0; tries < 32; ++tries) {
            a = sl[rng.uniform_index(sl.size())];
            b = sl[rng.uniform_index(sl.size())];
            if (a.first != b.first) return true;
        }
        return false;
    };

    Scorer::Breakdown now = scorer.score(state);

    double t0 = schedule.t0;
    if (t0 <= 0) {
        double uphill_sum = 0;
        int uphill_count = 0;
        for (int probe = 0; probe < schedule.probe_moves; ++probe) {
            std::size_t si;
            std::pair<std::size_t, std::size_t> a, b;
            if (!propose(si, a, b)) continue;
            std::swap(state[si][a.first][a.second], state[si][b.first][b.second]);
            const double e_new = scorer.score(state).soft;
            std::swap(state[si][a.first][a.second], state[si][b.first][b.second]);
            if (e_new > now.soft) {
                uphill_sum += e_new - now.soft;
                ++uphill_count;
            }
        }
        const double mean_uphill = uphill_count > 0 ? uphill_sum / uphill_count : 1.0;
        t0 = mean_uphill / std::log(1.0 / 0.8);
        if (!(t0 > 0) || !std::isfinite(t0)) t0 = 1.0;
    }

    // best distinct feasible assignments seen so far
    std::unordered_set<std::uint64_t> visited;
    std::map<std::pair<double, std::uint64_t>, std::vector<std::vector<std::vector<int>>>> kept;
    auto consider = [&](const Scorer::Breakdown& e) {
        if (e.hard > 0) return;
        const std::uint64_t h = scorer.state_hash(state);
        if (!visited.insert(h).second) return;
        if (kept.size() < n_solutions) {
            kept.emplace(std::make_pair(e.soft, h), state);
        } else if (!kept.empty() && e.soft < kept.rbegin()->first.first) {
            kept.erase(std::prev(kept.end()));
            kept.emplace(std::make_pair(e.soft, h), state);
        }
    };
    consider(now);

    std::size_t moves_per_sweep = 0;
    for (const auto& sl : slots) moves_per_sweep += sl.size();
    moves_per_sweep = std::max<std::size_t>(1, moves_per_sweep);

    double temp = t0;
    for (int sweep = 0; sweep < schedule.sweeps; ++sweep) {
        for (std::size_t m = 0; m < moves_per_sweep; ++m) {
            std::size_t si;
            std::pair<std::size_t, std::size_t> a, b;
            if (!propose(si, a, b)) continue;
            std::swap(state[si][a.first][a.second], state[si][b.first][b.second]);
            const Scorer::Breakdown next = scorer.score(state);
            const double delta = next.soft - now.soft;
            if (delta <= 0 || rng.uniform() < std::exp(-delta / temp)) {
                now = next;
                consider(now);
            } else {
                std::swap(state[si][a.first][a.second], state[si][b.first][b.second]);
            }
        }
        temp *= schedule.cooling;
    }

    std::vector<ScheduleSolution> out;
    int rank = 0;
    for (const auto& [key, st] : kept) {
        ScheduleSolution sol;
        sol.energy = key.first;
        sol.rank = rank++;
        for (std::size_t si = 0; si < problem.session_ids.size(); ++si) {
            std::vector<std::vector<std::string>> groups;
            for (const auto& g : st[si]) {
                std::vector<std::string> gs;
                for (int m : g) gs.push_back(scorer.ids[m]);
                groups.push_back(std::move(gs));
            }
            sol.groups_by_session[problem.session_ids[si]] = std::move(groups);
        }
        out.push_back(std::move(sol));
    }
    return out;
}

Conference apply_solution(const Conference& c, const ScheduleSolution& solution) {
    Conference out = c;
    for (auto& s : out.sessions) {
        auto it = solution.groups_by_session.find(s.id);
        if (it != solution.groups_by_session.end()) s.groups = it->second;
    }
    return out;
}

namespace {

std::string canonical_groups_key(
    const std::map<std::string, std::vector<std::vector<std::string>>>& by_session) {
    std::string key;
    for (const auto& [sid, groups] : by_session) {
        std::vector<std::string> gs;
        for (const auto& g : groups) {
            auto sg = g;
            std::sort(sg.begin(), sg.end());
            std::string s;
            for (const auto& m : sg) s += m + ",";
            gs.push_back(std::move(s));
        }
        std::sort(gs.begin(), gs.end());
        key += sid + "{";
        for (const auto& g : gs) key += g + ";";
        key += "}";
    }
    return key;
}

}  // namespace

CounterfactualReport counterfactual_analysis(
    const Conference& c, const std::vector<ScheduleSolution>& discussion_solutions,
    const std::vector<ScheduleSolution>& small_group_solutions) {
    std::set<PairKey> collab_pairs;
    for (const auto& t : c.proposal_teams) {
        for (std::size_t i = 0; i < t.members.size(); ++i) {
            for (std::size_t j = i + 1; j < t.members.size(); ++j) {
                collab_pairs.insert(make_pair_key(t.members[i], t.members[j]));
            }
        }
    }
    if (collab_pairs.empty()) {
        throw DomainError("conference has no recorded collaborations");
    }
    if (discussion_solutions.empty() || small_group_solutions.empty()) {
        throw DomainError("need at least one solution of each kind");
    }

    auto mean_collaborator_interaction = [&](const Conference& conf) {
        double sum = 0;
        for (const auto& [a, b] : collab_pairs) {
            sum += total_effective_interaction(conf, a, b);
        }
        return sum / static_cast<double>(collab_pairs.size());
    };

    auto small_key_of = [&](const Conference& conf) {
        std::map<std::string, std::vector<std::vector<std::string>>> sg;
        for (const auto& s : conf.sessions) {
            if (s.kind == SessionKind::small_group) sg[s.id] = s.groups;
        }
        return canonical_groups_key(sg);
    };
    const std::string actual_small_key = small_key_of(c);

    CounterfactualReport rep;
    rep.i_bar_actual = mean_collaborator_interaction(c);

    for (std::size_t di = 0; di < discussion_solutions.size(); ++di) {
        const Conference with_disc = apply_solution(c, discussion_solutions[di]);
        for (std::size_t si = 0; si < small_group_solutions.size(); ++si) {
            const Conference combo = apply_solution(with_disc, small_group_solutions[si]);
            rep.i_bar_cf.push_back(mean_collaborator_interaction(combo));
            rep.discussion_index.push_back(static_cast<int>(di));
            rep.small_group_index.push_back(static_cast<int>(si));
            rep.shares_small_groups.push_back(small_key_of(combo) == actual_small_key);
        }
    }

    std::vector<double> diffs;
    long greater = 0;
    bool any_nonzero = false;
    for (double cf : rep.i_bar_cf) {
        const double d = rep.i_bar_actual - cf;
        diffs.push_back(d);
        if (d > 0) ++greater;
        if (d != 0) any_nonzero = true;
    }
    rep.fraction_actual_greater =
        static_cast<double>(greater) / static_cast<double>(diffs.size());
    if (any_nonzero) {
        rep.wilcoxon = wilcoxon_signed_rank(diffs);
        rep.wilcoxon_computable = true;
    }
    return rep;
}

}  // namespace catalysis
