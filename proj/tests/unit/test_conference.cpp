#include <doctest.h>

#include <set>

#include "catalysis/conference.hpp"
#include "../support/test_support.hpp"

using namespace catalysis;

namespace {

const char* k_minimal_json = R"({
  "schema_version": 1,
  "participants": [{"id": "a", "role": "fellow"}, {"id": "b", "role": "fellow"}],
  "sessions": [{"id": "s1", "kind": "discussion", "start": 60, "end": 120,
                "groups": [["a", "b"]]}],
  "prior_knowledge": [],
  "proposal_teams": [],
  "t_start": 0,
  "t_collab": 200
})";

}  // namespace

TEST_CASE("minimal conference file loads") {
    const Conference c = conference_from_json_text(k_minimal_json);
    CHECK(c.participants.size() == 2);
    CHECK(c.sessions.size() == 1);
    CHECK(eligible_pairs(c).size() == 1);
}

TEST_CASE("unknown group member is a validation error naming the id") {
    std::string text = k_minimal_json;
    text.replace(text.find("[\"a\", \"b\"]"), 10, "[\"a\", \"z\"]");
    try {
        conference_from_json_text(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        REQUIRE(e.violations.size() == 1);
        CHECK(e.violations[0].find("'z'") != std::string::npos);
        CHECK(e.violations[0].find("s1") != std::string::npos);
    }
}

TEST_CASE("malformed JSON is a parse error") {
    CHECK_THROWS_AS(conference_from_json_text("{not json"), ParseError);
    CHECK_THROWS_AS(conference_from_json_text("{\"schema_version\": 99}"), ParseError);
}

TEST_CASE("eligible pairs: outcomes and exclusion") {
    Conference c;
    for (const char* id : {"a", "b", "c"}) c.participants.push_back(testsupport::fellow(id));
    c.t_start = 0;
    c.t_collab = 10;
    c.proposal_teams.push_back({{"a", "b"}, false});

    auto pairs = eligible_pairs(c);
    REQUIRE(pairs.size() == 3);
    int collaborated = 0;
    for (const auto& p : pairs) {
        if (p.collaborated) {
            ++collaborated;
            CHECK(p.id_a == "a");
            CHECK(p.id_b == "b");
        }
    }
    CHECK(collaborated == 1);

    SUBCASE("K0 >= 5 pairs are excluded") {
        c.prior_knowledge.set("a", "b", 5);
        CHECK(eligible_pairs(c).size() == 2);
    }
    SUBCASE("facilitators never appear") {
        c.participants.push_back(testsupport::facilitator("x"));
        CHECK(eligible_pairs(c).size() == 3);
    }
}

TEST_CASE("tetrad team marks all six internal pairs") {
    Conference c;
    for (const char* id : {"a", "b", "c", "d"}) c.participants.push_back(testsupport::fellow(id));
    c.t_start = 0;
    c.t_collab = 10;
    c.proposal_teams.push_back({{"a", "b", "c", "d"}, true});
    auto pairs = eligible_pairs(c);
    REQUIRE(pairs.size() == 6);
    for (const auto& p : pairs) CHECK(p.collaborated);
}

TEST_CASE("validate reports overlapping groups and bad t_collab") {
    Conference c = testsupport::mini_conference();
    c.sessions[0].groups = {{"a", "b"}, {"b", "c"}};  // b twice
    c.t_collab = 100;                                 // before last session end (180)
    auto violations = validate(c);
    REQUIRE(violations.size() == 2);
    CHECK(violations[0].find("'b'") != std::string::npos);
    CHECK(violations[0].find("d1") != std::string::npos);
    CHECK(violations[1].find("t_collab") != std::string::npos);
}

TEST_CASE("validate accepts the mini fixture") {
    CHECK(validate(testsupport::mini_conference()).empty());
}

TEST_CASE("pair partition: eligible + excluded = all fellow pairs") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Conference c;
        const int n = 3 + static_cast<int>(rng.uniform_index(8));
        for (int i = 0; i < n; ++i) {
            c.participants.push_back(testsupport::fellow("f" + std::to_string(i)));
        }
        c.t_start = 0;
        c.t_collab = 1;
        std::size_t excluded = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const int k0 = static_cast<int>(rng.uniform_index(7));
                if (k0 > 0) {
                    c.prior_knowledge.set("f" + std::to_string(i), "f" + std::to_string(j), k0);
                }
                if (k0 >= k_prior_knowledge_exclusion) ++excluded;
            }
        }
        CHECK(eligible_pairs(c).size() + excluded ==
              static_cast<std::size_t>(n * (n - 1) / 2));
    }
}

TEST_CASE("eligible pairs are sorted and collaboration matches brute force") {
    Rng rng(11);
    Conference c;
    const int n = 8;
    for (int i = 0; i < n; ++i) {
        c.participants.push_back(testsupport::fellow("f" + std::to_string(i)));
    }
    c.t_start = 0;
    c.t_collab = 1;
    for (int t = 0; t < 4; ++t) {
        std::vector<std::string> team;
        const int size = 2 + static_cast<int>(rng.uniform_index(3));
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < size) {
            chosen.insert(static_cast<int>(rng.uniform_index(n)));
        }
        for (int i : chosen) team.push_back("f" + std::to_string(i));
        c.proposal_teams.push_back({team, false});
    }

    auto pairs = eligible_pairs(c);
    for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
        CHECK(std::make_pair(pairs[i].id_a, pairs[i].id_b) <
              std::make_pair(pairs[i + 1].id_a, pairs[i + 1].id_b));
    }
    for (const auto& p : pairs) {
        bool expected = false;
        for (const auto& t : c.proposal_teams) {
            bool a = false, b = false;
            for (const auto& m : t.members) {
                a |= m == p.id_a;
                b |= m == p.id_b;
            }
            expected |= a && b;
        }
        CHECK(p.collaborated == expected);
    }
}

TEST_CASE("json round trip is stable") {
    const Conference c = testsupport::mini_conference();
    const std::string text = conference_to_json_text(c);
    const Conference back = conference_from_json_text(text);
    CHECK(conference_to_json_text(back) == text);
}

TEST_CASE("sessions are sorted by start on load") {
    Conference c = testsupport::mini_conference();
    std::swap(c.sessions[0], c.sessions[1]);
    const Conference back = conference_from_json_text(conference_to_json_text(c));
    CHECK(back.sessions[0].id == "d1");
    CHECK(back.sessions[1].id == "s1");
}
