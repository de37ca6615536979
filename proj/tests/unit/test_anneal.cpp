#include <doctest.h>

#include <cmath>

#include "stackpnr/anneal.hpp"
#include "stackpnr/rng.hpp"

using namespace stackpnr;

TEST_CASE("acceptance rule")
{
    CHECK(accept_move(-1.0, 1.0, 0.999999));
    CHECK(accept_move(-1e-9, 1e-9, 0.9999));
    const double T = 2.0, d = 3.0;
    const double p = std::exp(-d / T);
    CHECK(accept_move(d, T, std::nextafter(p, 0.0)));
    CHECK_FALSE(accept_move(d, T, p));
    CHECK(accept_move(0.0, 1.0, 0.5));
}

TEST_CASE("cooling coefficient")
{
    SaSchedule s;
    CoolingTracker c;
    CHECK(c.alpha(s) == 0.9);
    c.record_improvement(100);
    CHECK(c.alpha(s) == 0.9);
    c.record_improvement(90);
    c.record_improvement(80);
    CHECK(c.alpha(s) == 80.0 / 100.0);
    c.reset();
    c.record_improvement(100);
    c.record_improvement(10);
    CHECK(c.alpha(s) == 0.5);
    c.reset();
    c.record_improvement(100);
    c.record_improvement(99.9);
    CHECK(c.alpha(s) == 0.99);
    CHECK(clamp_alpha(0.2, s) == 0.5);
    CHECK(clamp_alpha(1.5, s) == 0.99);
    CHECK(clamp_alpha(0.7, s) == 0.7);
}

TEST_CASE("stall on flat best cost")
{
    SaSchedule s;
    StallDetector d(s, 10);
    for (int i = 0; i < 5; ++i) {
        d.end_temperature(100.0);
        CHECK_FALSE(d.stalled());
    }
    d.end_temperature(99.95);
    REQUIRE(d.stalled());
    CHECK(*d.reason() == StopReason::StallNoImprovement);
}

TEST_CASE("no stall while improving")
{
    SaSchedule s;
    StallDetector d(s, 10);
    double best = 1000;
    for (int i = 0; i < 20; ++i) {
        d.end_temperature(best);
        best *= 0.99;
    }
    CHECK_FALSE(d.stalled());
}

TEST_CASE("stall on consecutive rejections")
{
    SaSchedule s;
    StallDetector d(s, 10);
    for (int i = 0; i < 199; ++i)
        d.record_move(false);
    CHECK_FALSE(d.stalled());
    d.record_move(true);
    for (int i = 0; i < 199; ++i)
        d.record_move(false);
    CHECK_FALSE(d.stalled());
    d.record_move(false);
    REQUIRE(d.stalled());
    CHECK(*d.reason() == StopReason::StallNoAcceptance);
}

TEST_CASE("seed derivation")
{
    CHECK(derive_seed(1, Stage::Partition) != derive_seed(1, Stage::Place));
    CHECK(derive_seed(1, Stage::Place) == derive_seed(1, Stage::Place));
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i)
        CHECK(a.below(17) == b.below(17));
    Rng r(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
