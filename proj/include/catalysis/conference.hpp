#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catalysis/common.hpp"

namespace catalysis {

enum class Role { fellow, facilitator };

enum class SessionKind { discussion, small_group, other };

std::string to_string(Role r);
std::string to_string(SessionKind k);
Role role_from_string(const std::string& s);
SessionKind session_kind_from_string(const std::string& s);

struct Participant {
    std::string id;
    Role role = Role::fellow;
    // categorical attributes, e.g. discipline / methodology / gender
    std::map<std::string, std::string> attributes;
    // topic id -> interest rating 1..5 (optional, discussion assignment input)
    std::map<std::string, int> topic_interests;
};

struct Session {
    std::string id;
    SessionKind kind = SessionKind::other;
    int start = 0;  // minutes from conference origin
    int end = 0;
    std::vector<std::vector<std::string>> groups;  // parallel groups, disjoint
    // optional topic id per group (parallel to `groups`); empty = untopiced
    std::vector<std::string> group_topics;

    int duration() const { return end - start; }
};

// Symmetric pairwise familiarity scores; missing pairs read as 0.
class PriorKnowledge {
  public:
    void set(const std::string& a, const std::string& b, int k0);
    int get(const std::string& a, const std::string& b) const;
    const std::map<PairKey, int>& entries() const { return entries_; }

  private:
    std::map<PairKey, int> entries_;
};

struct ProposalTeam {
    std::vector<std::string> members;  // 2-4 fellows
    bool funded = false;
};

struct Conference {
    std::vector<Participant> participants;
    std::vector<Session> sessions;  // kept sorted by start time
    PriorKnowledge prior_knowledge;
    std::vector<ProposalTeam> proposal_teams;
    int t_start = 0;
    int t_collab = 0;

    std::vector<std::string> fellow_ids() const;
    const Participant* find_participant(const std::string& id) const;
    std::size_t participant_count() const { return participants.size(); }
};

struct PairOutcome {
    std::string id_a, id_b;  // id_a < id_b
    bool collaborated = false;
    int k0 = 0;
};

// Prohibited-pair threshold: fellows with prior knowledge at or above this
// cannot team up, so their pairs are excluded from analysis.
inline constexpr int k_prior_knowledge_exclusion = 5;

inline constexpr int k_conference_schema_version = 1;

// File ingestion. Throws ParseError on malformed input, ValidationError
// (listing every violation) when invariants do not hold.
Conference load_conference(const std::string& path);
Conference conference_from_json_text(const std::string& text);
std::string conference_to_json_text(const Conference& c);
void save_conference(const Conference& c, const std::string& path);

// Every invariant violation as a human-readable line naming the entity.
// Empty result == valid conference.
std::vector<std::string> validate(const Conference& c);

// All unordered fellow pairs with K0 <= 4, labeled with outcome, sorted by
// (id_a, id_b). Facilitators never appear.
std::vector<PairOutcome> eligible_pairs(const Conference& c);

}  // namespace catalysis
