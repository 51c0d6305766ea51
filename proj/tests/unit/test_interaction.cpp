#include <doctest.h>

#include <algorithm>

#include "catalysis/interaction.hpp"
#include "../support/test_support.hpp"

using namespace catalysis;

TEST_CASE("session effective interaction 2T/N") {
    CHECK(session_effective_interaction(60, 2) == doctest::Approx(60));
    // the two descriptions of the 63% gap are the same effective time
    CHECK(session_effective_interaction(45, 12) == doctest::Approx(7.5));
    CHECK(session_effective_interaction(15, 4) == doctest::Approx(7.5));
    CHECK(session_effective_interaction(75, 3) == doctest::Approx(50));
    CHECK_THROWS_AS(session_effective_interaction(60, 1), DomainError);
    CHECK_THROWS_AS(session_effective_interaction(0, 4), DomainError);
}

TEST_CASE("total effective interaction sums co-attended sessions") {
    Conference c;
    for (const char* id : {"a", "b", "c"}) c.participants.push_back(testsupport::fellow(id));
    for (int i = 0; i < 9; ++i) {
        c.participants.push_back(testsupport::fellow("x" + std::to_string(i)));
    }
    Session d1;  // 75-min 12-person discussion with everyone
    d1.id = "d1";
    d1.kind = SessionKind::discussion;
    d1.start = 0;
    d1.end = 75;
    d1.groups = {{}};
    for (const auto& p : c.participants) d1.groups[0].push_back(p.id);
    Session s1;  // 30-min 4-person small group with a,b
    s1.id = "s1";
    s1.kind = SessionKind::small_group;
    s1.start = 100;
    s1.end = 130;
    s1.groups = {{"a", "b", "x0", "x1"}, {"c", "x2", "x3", "x4"}};
    c.sessions = {d1, s1};
    c.t_start = 0;
    c.t_collab = 200;

    CHECK(total_effective_interaction(c, "a", "b") ==
          doctest::Approx(2.0 * 75 / 12 + 2.0 * 30 / 4));  // 27.5
    CHECK(total_effective_interaction(c, "a", "b") == doctest::Approx(27.5));
    // same session, different parallel groups: contributes nothing
    CHECK(total_effective_interaction(c, "a", "c") == doctest::Approx(2.0 * 75 / 12));
    CHECK_THROWS_AS(total_effective_interaction(c, "a", "nope"), DomainError);
}

TEST_CASE("pair with no shared sessions has zero total") {
    Conference c = testsupport::mini_conference();
    c.sessions[1].groups = {{"a", "c"}, {"b", "d"}};
    CHECK(total_effective_interaction(c, "a", "d") == 0);
}

TEST_CASE("profile intensity values follow the scaling rule") {
    const double i_max = 0.6, a = 0.02;

    SUBCASE("2-person session at K0=0, prior_scale=0 reaches i_max") {
        Conference c;
        c.participants.push_back(testsupport::fellow("a"));
        c.participants.push_back(testsupport::fellow("b"));
        Session s;
        s.id = "s";
        s.kind = SessionKind::small_group;
        s.start = 10;
        s.end = 40;
        s.groups = {{"a", "b"}};
        c.sessions = {s};
        c.t_start = 0;
        c.t_collab = 60;
        auto prof = interaction_profile(c, "a", "b", 0.0, i_max);
        CHECK(prof.intensity_at(20) == doctest::Approx(i_max));
        CHECK(prof.max_intensity() == doctest::Approx(i_max));

        // K0=6 with prior_scale=0.02 also reaches exactly i_max
        c.prior_knowledge.set("a", "b", 6);
        auto prof6 = interaction_profile(c, "a", "b", a, i_max);
        CHECK(prof6.intensity_at(20) ==
              doctest::Approx(i_max * (0.02 * 6 + 1.0) / (6 * 0.02 + 1.0)));
        CHECK(prof6.intensity_at(20) == doctest::Approx(i_max));
    }

    SUBCASE("baseline between sessions uses 2/N_tot") {
        Conference c;
        for (int i = 0; i < 64; ++i) {
            c.participants.push_back(testsupport::fellow("f" + std::to_string(i)));
        }
        c.t_start = 0;
        c.t_collab = 100;
        auto prof = interaction_profile(c, "f0", "f1", a, i_max);
        CHECK(prof.intensity_at(50) == doctest::Approx(i_max / (6 * a + 1) * (2.0 / 64)));
    }
}

TEST_CASE("i_tot is invariant to profile scaling parameters") {
    const Conference c = testsupport::mini_conference();
    const auto p1 = interaction_profile(c, "a", "b", 0.0, 1.0);
    const auto p2 = interaction_profile(c, "a", "b", 0.1, 4.2);
    CHECK(p1.i_tot == p2.i_tot);
    CHECK(p1.i_tot == doctest::Approx(total_effective_interaction(c, "a", "b")));
}

TEST_CASE("occupancy integral over session time equals i_tot") {
    const Conference c = testsupport::mini_conference();
    for (const char* other : {"b", "c", "d"}) {
        const auto e = pair_exposure(c, "a", other);
        double session_integral = 0;
        for (const auto& seg : e.segments) {
            // session windows of the fixture: [60,120] and [150,180]
            const double mid = 0.5 * (seg.t_begin + seg.t_end);
            const bool in_session = (mid >= 60 && mid < 120) || (mid >= 150 && mid < 180);
            if (in_session) session_integral += seg.occupancy * (seg.t_end - seg.t_begin);
        }
        CHECK(session_integral == doctest::Approx(e.i_tot).epsilon(1e-12));
    }
}

TEST_CASE("session order in the file does not change i_tot") {
    Conference c = testsupport::mini_conference();
    const double before = total_effective_interaction(c, "a", "b");
    std::swap(c.sessions[0], c.sessions[1]);
    CHECK(total_effective_interaction(c, "a", "b") == before);
}

TEST_CASE("profile stays within i_max for random pairs") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = rng.uniform(0.0, 0.3);
        const double i_max = rng.uniform(0.2, 3.0);
        Conference c = testsupport::mini_conference();
        c.prior_knowledge.set("a", "b", static_cast<int>(rng.uniform_index(7)));
        const auto prof = interaction_profile(c, "a", "b", a, i_max);
        CHECK(prof.max_intensity() <= i_max * (1 + 1e-12));
    }
}

TEST_CASE("profile covers the whole window and is breakpoint-aligned") {
    const Conference c = testsupport::mini_conference();
    const auto e = pair_exposure(c, "a", "b");
    REQUIRE(!e.segments.empty());
    CHECK(e.segments.front().t_begin == 0);
    CHECK(e.segments.back().t_end == 300);
    for (std::size_t i = 0; i + 1 < e.segments.size(); ++i) {
        CHECK(e.segments[i].t_end == e.segments[i + 1].t_begin);
    }
}
