#include "catalysis/interaction.hpp"

#include <algorithm>
#include <cmath>

#include "catalysis/common.hpp"

namespace catalysis {

double session_effective_interaction(double minutes, int group_size) {
    if (minutes <= 0) throw DomainError("session duration must be positive");
    if (group_size < 2) throw DomainError("group size must be at least 2");
    return 2.0 * minutes / group_size;
}

namespace {

// Size of the group containing both ids, or 0 if they are not together.
int co_attended_group_size(const Session& s, const std::string& a, const std::string& b) {
    for (const auto& g : s.groups) {
        const bool has_a = std::find(g.begin(), g.end(), a) != g.end();
        const bool has_b = std::find(g.begin(), g.end(), b) != g.end();
        if (has_a && has_b) return static_cast<int>(g.size());
        if (has_a || has_b) return 0;  // groups are disjoint
    }
    return 0;
}

}  // namespace

double total_effective_interaction(const Conference& c, const std::string& a,
                                   const std::string& b) {
    if (!c.find_participant(a)) throw DomainError("unknown participant id '" + a + "'");
    if (!c.find_participant(b)) throw DomainError("unknown participant id '" + b + "'");
    double total = 0;
    for (const auto& s : c.sessions) {
        const int n = co_attended_group_size(s, a, b);
        if (n >= 2) total += session_effective_interaction(s.duration(), n);
    }
    return total;
}

PairExposure pair_exposure(const Conference& c, const std::string& a,
                           const std::string& b) {
    if (!c.find_participant(a)) throw DomainError("unknown participant id '" + a + "'");
    if (!c.find_participant(b)) throw DomainError("unknown participant id '" + b + "'");

    PairExposure e;
    e.k0 = c.prior_knowledge.get(a, b);

    const double baseline =
        c.participant_count() >= 2 ? 2.0 / static_cast<double>(c.participant_count()) : 0.0;

    // Timeline boundaries: window edges plus every session edge inside it.
    std::vector<double> cuts{static_cast<double>(c.t_start),
                             static_cast<double>(c.t_collab)};
    for (const auto& s : c.sessions) {
        cuts.push_back(static_cast<double>(s.start));
        cuts.push_back(static_cast<double>(s.end));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double lo = c.t_start, hi = c.t_collab;
    std::erase_if(cuts, [&](double t) { return t < lo || t > hi; });

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double t0 = cuts[i], t1 = cuts[i + 1];
        if (t1 <= t0) continue;
        const double mid = 0.5 * (t0 + t1);
        bool in_session_time = false;
        double occupancy = 0;
        for (const auto& s : c.sessions) {
            if (s.start <= mid && mid < s.end) {
                in_session_time = true;
                const int n = co_attended_group_size(s, a, b);
                // overlapping co-attended sessions (unusual) add up, keeping
                // the profile integral equal to i_tot
                if (n >= 2) occupancy += 2.0 / n;
            }
        }
        if (!in_session_time) occupancy = baseline;
        e.segments.push_back({t0, t1, occupancy});
        // merge equal neighbours
        auto& segs = e.segments;
        if (segs.size() >= 2 && segs[segs.size() - 2].occupancy == occupancy) {
            segs[segs.size() - 2].t_end = t1;
            segs.pop_back();
        }
    }
    if (e.segments.empty() && hi >= lo) {
        e.segments.push_back({lo, hi, baseline});  // zero-width window kept explicit
    }

    e.i_tot = total_effective_interaction(c, a, b);
    return e;
}

double InteractionProfile::intensity_at(double t) const {
    if (breakpoints.empty()) return 0;
    if (t < breakpoints.front().first) return breakpoints.front().second;
    double v = breakpoints.front().second;
    for (const auto& [bt, bv] : breakpoints) {
        if (bt <= t) {
            v = bv;
        } else {
            break;
        }
    }
    return v;
}

double InteractionProfile::max_intensity() const {
    double m = 0;
    for (const auto& [t, v] : breakpoints) m = std::max(m, v);
    return m;
}

InteractionProfile scale_exposure(const PairExposure& e, const std::string& a,
                                  const std::string& b, double prior_scale,
                                  double i_max) {
    if (prior_scale < 0) throw DomainError("prior_scale must be >= 0");
    if (i_max <= 0) throw DomainError("i_max must be positive");
    InteractionProfile p;
    p.id_a = a <= b ? a : b;
    p.id_b = a <= b ? b : a;
    p.k0 = e.k0;
    p.i_tot = e.i_tot;
    p.t_end = e.t_end();
    const double scale = intensity_scale(prior_scale, i_max);
    const double floor = scale * prior_scale * e.k0;
    for (const auto& seg : e.segments) {
        p.breakpoints.emplace_back(seg.t_begin, floor + scale * seg.occupancy);
    }
    return p;
}

InteractionProfile interaction_profile(const Conference& c, const std::string& a,
                                       const std::string& b, double prior_scale,
                                       double i_max) {
    return scale_exposure(pair_exposure(c, a, b), a, b, prior_scale, i_max);
}

}  // namespace catalysis
