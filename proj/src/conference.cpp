#include "catalysis/conference.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace catalysis {

using nlohmann::json;

std::string to_string(Role r) {
    return r == Role::fellow ? "fellow" : "facilitator";
}

std::string to_string(SessionKind k) {
    switch (k) {
        case SessionKind::discussion: return "discussion";
        case SessionKind::small_group: return "small_group";
        default: return "other";
    }
}

Role role_from_string(const std::string& s) {
    if (s == "fellow") return Role::fellow;
    if (s == "facilitator") return Role::facilitator;
    throw ParseError("unknown role: " + s);
}

SessionKind session_kind_from_string(const std::string& s) {
    if (s == "discussion") return SessionKind::discussion;
    if (s == "small_group") return SessionKind::small_group;
    if (s == "other") return SessionKind::other;
    throw ParseError("unknown session kind: " + s);
}

void PriorKnowledge::set(const std::string& a, const std::string& b, int k0) {
    entries_[make_pair_key(a, b)] = k0;
}

int PriorKnowledge::get(const std::string& a, const std::string& b) const {
    auto it = entries_.find(make_pair_key(a, b));
    return it == entries_.end() ? 0 : it->second;
}

std::vector<std::string> Conference::fellow_ids() const {
    std::vector<std::string> out;
    for (const auto& p : participants) {
        if (p.role == Role::fellow) out.push_back(p.id);
    }
    return out;
}

const Participant* Conference::find_participant(const std::string& id) const {
    for (const auto& p : participants) {
        if (p.id == id) return &p;
    }
    return nullptr;
}

namespace {

Participant parse_participant(const json& j) {
    Participant p;
    p.id = j.at("id").get<std::string>();
    p.role = role_from_string(j.value("role", std::string("fellow")));
    if (j.contains("attributes")) {
        for (auto& [k, v] : j.at("attributes").items()) {
            p.attributes[k] = v.get<std::string>();
        }
    }
    if (j.contains("topic_interests")) {
        for (auto& [k, v] : j.at("topic_interests").items()) {
            p.topic_interests[k] = v.get<int>();
        }
    }
    return p;
}

Session parse_session(const json& j) {
    Session s;
    s.id = j.at("id").get<std::string>();
    s.kind = session_kind_from_string(j.value("kind", std::string("other")));
    s.start = j.at("start").get<int>();
    s.end = j.at("end").get<int>();
    for (const auto& g : j.at("groups")) {
        s.groups.push_back(g.get<std::vector<std::string>>());
    }
    if (j.contains("group_topics")) {
        s.group_topics = j.at("group_topics").get<std::vector<std::string>>();
    }
    return s;
}

}  // namespace

Conference conference_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    Conference c;
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != k_conference_schema_version) {
            throw ParseError("unsupported schema_version " + std::to_string(version));
        }
        for (const auto& p : j.at("participants")) c.participants.push_back(parse_participant(p));
        for (const auto& s : j.at("sessions")) c.sessions.push_back(parse_session(s));
        if (j.contains("prior_knowledge")) {
            for (const auto& e : j.at("prior_knowledge")) {
                if (!e.is_array() || e.size() != 3) {
                    throw ParseError("prior_knowledge entries must be [idA, idB, k0]");
                }
                c.prior_knowledge.set(e[0].get<std::string>(), e[1].get<std::string>(),
                                      e[2].get<int>());
            }
        }
        if (j.contains("proposal_teams")) {
            for (const auto& t : j.at("proposal_teams")) {
                ProposalTeam team;
                team.members = t.at("members").get<std::vector<std::string>>();
                team.funded = t.value("funded", false);
                c.proposal_teams.push_back(team);
            }
        }
        c.t_start = j.at("t_start").get<int>();
        c.t_collab = j.at("t_collab").get<int>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("conference schema error: ") + e.what());
    }
    std::stable_sort(c.sessions.begin(), c.sessions.end(),
                     [](const Session& a, const Session& b) { return a.start < b.start; });
    auto violations = validate(c);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return c;
}

Conference load_conference(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open conference file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return conference_from_json_text(buf.str());
}

std::string conference_to_json_text(const Conference& c) {
    json j;
    j["schema_version"] = k_conference_schema_version;
    j["participants"] = json::array();
    for (const auto& p : c.participants) {
        json jp{{"id", p.id}, {"role", to_string(p.role)}};
        if (!p.attributes.empty()) jp["attributes"] = p.attributes;
        if (!p.topic_interests.empty()) jp["topic_interests"] = p.topic_interests;
        j["participants"].push_back(jp);
    }
    j["sessions"] = json::array();
    for (const auto& s : c.sessions) {
        json js{{"id", s.id},
                {"kind", to_string(s.kind)},
                {"start", s.start},
                {"end", s.end},
                {"groups", s.groups}};
        if (!s.group_topics.empty()) js["group_topics"] = s.group_topics;
        j["sessions"].push_back(js);
    }
    j["prior_knowledge"] = json::array();
    for (const auto& [key, k0] : c.prior_knowledge.entries()) {
        j["prior_knowledge"].push_back(json::array({key.first, key.second, k0}));
    }
    j["proposal_teams"] = json::array();
    for (const auto& t : c.proposal_teams) {
        j["proposal_teams"].push_back(json{{"members", t.members}, {"funded", t.funded}});
    }
    j["t_start"] = c.t_start;
    j["t_collab"] = c.t_collab;
    return j.dump(2) + "\n";
}

void save_conference(const Conference& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write conference file: " + path);
    out << conference_to_json_text(c);
}

std::vector<std::string> validate(const Conference& c) {
    std::vector<std::string> out;
    std::set<std::string> ids;
    std::set<std::string> fellows;
    for (const auto& p : c.participants) {
        if (!ids.insert(p.id).second) {
            out.push_back("duplicate participant id '" + p.id + "'");
        }
        if (p.role == Role::fellow) fellows.insert(p.id);
        for (const auto& [topic, rating] : p.topic_interests) {
            if (rating < 1 || rating > 5) {
                out.push_back("participant '" + p.id + "' has topic interest " +
                              std::to_string(rating) + " for '" + topic +
                              "' outside [1,5]");
            }
        }
    }
    for (const auto& s : c.sessions) {
        if (s.end <= s.start) {
            out.push_back("session '" + s.id + "' has end <= start");
        }
        std::set<std::string> seen;
        for (const auto& g : s.groups) {
            for (const auto& m : g) {
                if (!ids.count(m)) {
                    out.push_back("session '" + s.id + "' group member '" + m +
                                  "' is not a declared participant");
                }
                if (!seen.insert(m).second) {
                    out.push_back("session '" + s.id + "' has '" + m +
                                  "' in more than one group");
                }
            }
        }
        if (!s.group_topics.empty() && s.group_topics.size() != s.groups.size()) {
            out.push_back("session '" + s.id +
                          "' group_topics length does not match groups");
        }
    }
    for (const auto& [key, k0] : c.prior_knowledge.entries()) {
        if (k0 < 0 || k0 > 6) {
            out.push_back("prior knowledge for (" + key.first + ", " + key.second +
                          ") is " + std::to_string(k0) + ", outside [0,6]");
        }
        if (key.first == key.second) {
            out.push_back("prior knowledge self-pair for '" + key.first + "'");
        }
        for (const auto& id : {key.first, key.second}) {
            if (!ids.count(id)) {
                out.push_back("prior knowledge references unknown id '" + id + "'");
            }
        }
    }
    std::size_t team_index = 0;
    for (const auto& t : c.proposal_teams) {
        const std::string label = "proposal team #" + std::to_string(team_index++);
        if (t.members.size() < 2 || t.members.size() > 4) {
            out.push_back(label + " has " + std::to_string(t.members.size()) +
                          " members, expected 2-4");
        }
        for (const auto& m : t.members) {
            if (!fellows.count(m)) {
                out.push_back(label + " member '" + m + "' is not a fellow");
            }
        }
    }
    if (!c.sessions.empty()) {
        int first_start = c.sessions.front().start;
        int last_end = 0;
        for (const auto& s : c.sessions) {
            first_start = std::min(first_start, s.start);
            last_end = std::max(last_end, s.end);
        }
        if (c.t_start > first_start) {
            out.push_back("t_start (" + std::to_string(c.t_start) +
                          ") is after the first session start (" +
                          std::to_string(first_start) + ")");
        }
        if (c.t_collab < last_end) {
            out.push_back("t_collab (" + std::to_string(c.t_collab) +
                          ") is before the last session end (" +
                          std::to_string(last_end) + ")");
        }
    }
    if (c.t_collab < c.t_start) {
        out.push_back("t_collab is before t_start");
    }
    return out;
}

std::vector<PairOutcome> eligible_pairs(const Conference& c) {
    std::vector<std::string> fellows = c.fellow_ids();
    std::sort(fellows.begin(), fellows.end());

    std::set<PairKey> collaborated;
    for (const auto& t : c.proposal_teams) {
        for (std::size_t i = 0; i < t.members.size(); ++i) {
            for (std::size_t j = i + 1; j < t.members.size(); ++j) {
                collaborated.insert(make_pair_key(t.members[i], t.members[j]));
            }
        }
    }

    std::vector<PairOutcome> out;
    for (std::size_t i = 0; i < fellows.size(); ++i) {
        for (std::size_t j = i + 1; j < fellows.size(); ++j) {
            const int k0 = c.prior_knowledge.get(fellows[i], fellows[j]);
            if (k0 >= k_prior_knowledge_exclusion) continue;
            PairOutcome p;
            p.id_a = fellows[i];
            p.id_b = fellows[j];
            p.k0 = k0;
            p.collaborated = collaborated.count({fellows[i], fellows[j]}) > 0;
            out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace catalysis
