#include <doctest.h>

#include <cmath>

#include "catalysis/potential.hpp"
#include "../support/test_support.hpp"

using namespace catalysis;

namespace {

CatalysisParams special_case_params(double s_over_w) {
    CatalysisParams q;
    q.strengthening = s_over_w;
    q.weakening = 1.0;
    q.p_min = 0.0;
    q.p_mem = 0.6;
    q.p_max = 1.0;
    q.i_c = 0.5;
    q.i_max = 1.0;
    return q;
}

}  // namespace

TEST_CASE("parameter validation") {
    CatalysisParams q = testsupport::fig3_params();
    CHECK_NOTHROW(q.validate());
    q.p_mem = q.p_min;
    CHECK_THROWS_AS(q.validate(), DomainError);
    q = testsupport::fig3_params();
    q.i_c = q.i_max;
    CHECK_THROWS_AS(q.validate(), DomainError);
    q = testsupport::fig3_params();
    q.strengthening = 0;
    CHECK_THROWS_AS(q.validate(), DomainError);
}

TEST_CASE("simplest special case closed form") {
    const Potential pot(special_case_params(1.0));
    SUBCASE("I=0, P >= 0.3 branch is (P-0.6)^2") {
        for (double p : {0.3, 0.45, 0.6, 0.8, 1.0}) {
            CHECK(pot.value(0.0, p) == doctest::Approx((p - 0.6) * (p - 0.6)).epsilon(1e-12));
        }
    }
    SUBCASE("I=0, low branch is P^2 with minimum at 0") {
        for (double p : {0.0, 0.1, 0.2}) {
            CHECK(pot.value(0.0, p) == doctest::Approx(p * p).epsilon(1e-12));
        }
        CHECK(pot.gradient(0.0, 0.0) == doctest::Approx(0.0));
    }
}

TEST_CASE("special cases match the closed forms pointwise") {
    // full grid version is acceptance criterion 3; spot-check here
    const Potential sym(special_case_params(1.0));
    const Potential asym(special_case_params(2.0));
    for (int ii = 0; ii <= 20; ++ii) {
        const double I = ii / 20.0;
        for (int pp = 0; pp <= 20; ++pp) {
            const double p = pp / 20.0;
            CHECK(sym.value(I, p) ==
                  doctest::Approx(testsupport::simplest_potential(1.0, 0.6, I, p))
                      .epsilon(1e-10));
            CHECK(asym.value(I, p) ==
                  doctest::Approx(testsupport::simplified_potential(1.0, 0.6, I, p))
                      .epsilon(1e-10));
        }
    }
}

TEST_CASE("fig 3(d) parameters: two minima at p_min and p_mem when I=0") {
    const Potential pot(testsupport::fig3_params());
    const auto points = pot.stationary_points(0.0);
    REQUIRE(points.size() == 3);
    CHECK(points[0].p == doctest::Approx(0.1));
    CHECK(points[0].kind == StationaryPoint::Kind::minimum);
    CHECK(points[1].p == doctest::Approx(0.35));  // midpoint barrier
    CHECK(points[1].kind == StationaryPoint::Kind::maximum);
    CHECK(points[2].p == doctest::Approx(0.6));
    CHECK(points[2].kind == StationaryPoint::Kind::minimum);
}

TEST_CASE("single minimum at p_max when I = i_max") {
    const Potential pot(testsupport::fig3_params());
    const auto points = pot.stationary_points(pot.params().i_max);
    REQUIRE(points.size() == 1);
    CHECK(points[0].p == doctest::Approx(0.9));
}

TEST_CASE("fig S1 parameters: barrier disappears exactly at i_c") {
    CatalysisParams q;
    q.strengthening = 1.0;
    q.weakening = 1.0;
    q.p_min = 0.1;
    q.p_mem = 0.4;
    q.p_max = 0.8;
    q.i_c = 1.0;
    q.i_max = 5.0;
    const Potential pot(q);
    for (int g = 0; g <= 200; ++g) {
        const double I = q.i_max * g / 200.0;
        const auto points = pot.stationary_points(I);
        std::size_t minima = 0;
        for (const auto& sp : points) {
            if (sp.kind == StationaryPoint::Kind::minimum) ++minima;
        }
        CHECK(minima == (I < q.i_c ? 2u : 1u));
    }
}

TEST_CASE("analytic gradient matches finite differences") {
    Rng rng(42);
    int checked = 0;
    while (checked < 500) {
        const CatalysisParams q = testsupport::random_params(rng);
        const Potential pot(q);
        const double I = rng.uniform(0.0, q.i_max);
        const double p = rng.uniform(0.0, 1.0);
        const double h = 1e-6;
        if (p < 2 * h || p > 1 - 2 * h) continue;
        // skip points hugging a junction; the derivative jumps there
        bool near_junction = false;
        for (double j : {pot.p_low(I), pot.p_med(I), pot.p_high(I), pot.p_int(I)}) {
            if (std::abs(p - j) < 4 * h) near_junction = true;
        }
        if (near_junction) continue;
        const double fd = (pot.value(I, p + h) - pot.value(I, p - h)) / (2 * h);
        const double an = pot.gradient(I, p);
        CHECK(std::abs(an - fd) <= 1e-5 * (1.0 + std::abs(fd)));
        ++checked;
    }
}

TEST_CASE("gradient vanishes at stationary points") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const CatalysisParams q = testsupport::random_params(rng);
        const Potential pot(q);
        const double I = rng.uniform(0.0, q.i_max);
        for (const auto& sp : pot.stationary_points(I)) {
            if (sp.kind != StationaryPoint::Kind::minimum) continue;
            if (sp.p < 0 || sp.p > 1) continue;
            CHECK(std::abs(pot.gradient(I, sp.p)) <= 1e-9);
        }
    }
}

TEST_CASE("value is continuous across every branch boundary") {
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const CatalysisParams q = testsupport::random_params(rng);
        const Potential pot(q);
        for (int gi = 0; gi <= 16; ++gi) {
            const double I = q.i_max * gi / 16.0;
            const double delta = 1e-12;
            for (double j : {pot.p_low(I), pot.p_med(I), pot.p_high(I), pot.p_int(I)}) {
                if (j <= delta || j >= 1 - delta) continue;
                const double left = pot.value(I, j - delta);
                const double right = pot.value(I, j + delta);
                CHECK(std::abs(left - right) <= 1e-8 * (1.0 + std::abs(left)));
            }
        }
    }
}

TEST_CASE("HighI gradient above p_high is 2W(P - p_high) and positive") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const CatalysisParams q = testsupport::random_params(rng);
        const Potential pot(q);
        if (pot.i_cint() >= q.i_max) continue;  // no high regime for this set
        const double I = 0.5 * (pot.i_cint() + q.i_max);
        const double hi = pot.p_high(I);
        if (hi >= 1) continue;
        const double p = hi + 0.5 * (1 - hi);
        CHECK(pot.gradient(I, p) ==
              doctest::Approx(2 * q.weakening * (p - hi)).epsilon(1e-12));
        CHECK(pot.gradient(I, p) > 0);
    }
}

TEST_CASE("i_cint matches a dense scan of P_int") {
    auto scan_icint = [](const Potential& pot) {
        const auto& q = pot.params();
        const double step = 1e-5 * (q.i_max - q.i_c);
        double prev = pot.p_int(q.i_c + step);
        for (double I = q.i_c + 2 * step; I <= q.i_max; I += step) {
            const double cur = pot.p_int(I);
            if (std::isfinite(prev) && std::isfinite(cur)) {
                if ((prev - 0.0) * (cur - 0.0) <= 0 || (prev - 1.0) * (cur - 1.0) <= 0) {
                    return I - 0.5 * step;
                }
            }
            prev = cur;
        }
        return q.i_max;
    };

    SUBCASE("SI simplified parameter set") {
        const Potential pot(special_case_params(2.0));
        CHECK(pot.i_cint() == doctest::Approx(scan_icint(pot)).epsilon(2e-5));
        CHECK(pot.i_cint() == doctest::Approx(0.92260399).epsilon(1e-6));
    }
    SUBCASE("random parameter sets: i_cint > i_c and matches scan") {
        Rng rng(21);
        for (int trial = 0; trial < 100; ++trial) {
            const CatalysisParams q = testsupport::random_params(rng);
            const Potential pot(q);
            CHECK(pot.i_cint() > q.i_c);
            const double scanned = scan_icint(pot);
            CHECK(std::abs(pot.i_cint() - scanned) <=
                  2e-5 * std::max(1.0, q.i_max - q.i_c) + 1e-9);
        }
    }
    SUBCASE("near-degenerate p_mem close to p_max") {
        CatalysisParams q = testsupport::fig3_params();
        q.p_mem = q.p_max - 1e-4;
        const Potential pot(q);
        CHECK(std::abs(pot.i_cint() - scan_icint(pot)) <= 2e-5 * q.i_max + 1e-9);
    }
}

TEST_CASE("minima positions are piecewise-linear, non-decreasing in I") {
    Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const CatalysisParams q = testsupport::random_params(rng);
        const Potential pot(q);
        double prev_low = -1, prev_high = -1;
        for (int g = 0; g <= 100; ++g) {
            const double I = q.i_max * g / 100.0;
            const double hi = pot.p_high(I);
            CHECK(hi == doctest::Approx(q.p_mem + (q.p_max - q.p_mem) * I / q.i_max)
                             .epsilon(1e-12));
            CHECK(hi >= prev_high);
            prev_high = hi;
            if (I < q.i_c) {
                const double lo = pot.p_low(I);
                CHECK(lo >= prev_low);
                prev_low = lo;
            }
        }
    }
}

TEST_CASE("curvature is steeper on the strengthening side when S >= W") {
    Rng rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        CatalysisParams q = testsupport::random_params(rng);
        if (q.strengthening < q.weakening) {
            std::swap(q.strengthening, q.weakening);
        }
        const Potential pot(q);
        const double I = rng.uniform(0.0, 0.9 * q.i_c);
        const double h = 1e-5;
        for (const auto& sp : pot.stationary_points(I)) {
            if (sp.kind != StationaryPoint::Kind::minimum) continue;
            if (sp.p < 4 * h || sp.p > 1 - 4 * h) continue;
            const double left = (pot.gradient(I, sp.p - h) - pot.gradient(I, sp.p - 3 * h)) / (2 * h);
            const double right = (pot.gradient(I, sp.p + 3 * h) - pot.gradient(I, sp.p + h)) / (2 * h);
            CHECK(left >= right - 1e-6);
        }
    }
}

TEST_CASE("domain errors") {
    const Potential pot(testsupport::fig3_params());
    CHECK_THROWS_AS(pot.value(-0.1, 0.5), DomainError);
    CHECK_THROWS_AS(pot.value(0.7, 0.5), DomainError);  // above i_max=0.6
    CHECK_THROWS_AS(pot.value(0.1, 1.5), DomainError);
    CHECK_THROWS_AS(pot.gradient(0.1, -0.2), DomainError);
}

TEST_CASE("no geometry diagnostic for admissible parameters") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const Potential pot(testsupport::random_params(rng));
        CHECK(!pot.geometry_diagnostic().has_value());
    }
}
