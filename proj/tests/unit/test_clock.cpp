#include <catch2/catch_amalgamated.hpp>

#include "tsnsim/clock.hpp"

using namespace tsnsim;
using namespace tsnsim::literals;

namespace {
ClockParams ideal()
{
    ClockParams p;
    p.granularity = Duration{1};
    return p;
}
} // namespace

TEST_CASE("ideal clock tracks true time exactly", "[clock]")
{
    ClockParams p = ideal();
    p.offset0 = 5_ms;
    LocalClock c(p, 1);
    REQUIRE(c.phase(SimTime{0}).ps == (5_ms).ps);
    REQUIRE(c.phase(at(1_s)).ps == (1_s + 5_ms).ps);
    REQUIRE(c.local_time(at(2_s)).ps == (2_s + 5_ms).ps);
    REQUIRE(c.timestamp(at(3_s)).ps == (3_s + 5_ms).ps);
}

TEST_CASE("constant drift integrates exactly in integer arithmetic", "[clock]")
{
    ClockParams p = ideal();
    p.drift_ppt = 100'000'000; // +100 ppm
    LocalClock c(p, 1);
    REQUIRE(c.phase(at(1_s)).ps == (1_s + 100_us).ps);
    REQUIRE(c.phase(at(10_s)).ps == (10_s + 1_ms).ps);

    ClockParams n = ideal();
    n.drift_ppt = -100'000'000;
    LocalClock d(n, 1);
    REQUIRE(d.phase(at(1_s)).ps == (1_s - 100_us).ps);
}

TEST_CASE("phase differences are history independent", "[clock]")
{
    ClockParams p = ideal();
    p.drift_ppt = 37; // awkward ppt value to exercise rounding
    LocalClock a(p, 1), b(p, 1);
    (void)a.local_time(at(1_s));
    (void)a.local_time(at(2_s));
    REQUIRE(a.phase(at(5_s)).ps == b.phase(at(5_s)).ps);
}

TEST_CASE("clock reads may not move backward", "[clock]")
{
    LocalClock c(ideal(), 1);
    (void)c.local_time(at(1_s));
    REQUIRE_THROWS_AS(c.local_time(at(1_s) - Duration{1}), ContractError);
    REQUIRE_NOTHROW(c.local_time(at(1_s))); // equal time is fine
}

TEST_CASE("timestamps floor onto the granularity grid", "[clock]")
{
    ClockParams p;
    p.granularity = 8_ns;
    p.offset0 = Duration{3}; // misalign the phase from the grid
    LocalClock c(p, 1);
    SimTime ts = c.timestamp(at(1_us));
    REQUIRE(ts.ps % 8000 == 0);
    REQUIRE(ts.ps <= (1_us).ps + 3);
    REQUIRE(ts.ps > (1_us).ps + 3 - 8000);
}

TEST_CASE("glitches superpose from their instant onward", "[clock]")
{
    LocalClock c(ideal(), 1);
    c.inject_glitch({at(5_s), 10_us});
    REQUIRE(c.phase(at(5_s) - Duration{1}).ps == (5_s).ps - 1);
    REQUIRE(c.phase(at(5_s)).ps == (5_s + 10_us).ps);
    c.inject_glitch({at(6_s), -3_us});
    REQUIRE(c.phase(at(7_s)).ps == (7_s + 10_us - 3_us).ps);
}

TEST_CASE("glitch validation rejects zero and rewritten history", "[clock]")
{
    LocalClock c(ideal(), 1);
    REQUIRE_THROWS_AS(c.inject_glitch({at(1_s), Duration{0}}), ContractError);
    (void)c.local_time(at(2_s));
    REQUIRE_THROWS_AS(c.inject_glitch({at(1_s), 1_ns}), ContractError);
    REQUIRE_NOTHROW(c.inject_glitch({at(2_s), 1_ns}));
}

TEST_CASE("wander advances keep phase continuous at the boundary", "[clock]")
{
    ClockParams p = ideal();
    p.drift_ppt = 5'000'000;
    p.wander_sigma_ppm = 0.5;
    LocalClock c(p, 42);
    SimTime before = c.phase(at(10_ms));
    c.advance_wander(10_ms);
    REQUIRE(c.phase(at(10_ms)).ps == before.ps);
    // The frequency may have moved; phase stays continuous regardless.
    REQUIRE_NOTHROW(c.phase(at(20_ms)));
    REQUIRE_THROWS_AS(c.phase(at(10_ms) - Duration{1}), ContractError);
}

TEST_CASE("zero wander sigma never changes frequency", "[clock]")
{
    ClockParams p = ideal();
    p.drift_ppt = 123;
    LocalClock c(p, 42);
    for (int i = 0; i < 100; ++i) c.advance_wander(10_ms);
    REQUIRE(c.freq_offset_ppt() == 0);
    REQUIRE(c.phase(at(1_s)).ps == (1_s).ps + 123); // 123 ppt over 1 s
}

TEST_CASE("jitter replays exactly under one seed", "[clock]")
{
    ClockParams p = ideal();
    p.jitter_sigma_ps = 100.0;
    LocalClock a(p, 7), b(p, 7);
    for (int i = 1; i <= 50; ++i)
        REQUIRE(a.local_time(at(Duration{i * 1000})).ps
                == b.local_time(at(Duration{i * 1000})).ps);
}

TEST_CASE("clock parameter validation", "[clock]")
{
    ClockParams p;
    p.granularity = Duration{0};
    REQUIRE_THROWS_AS(LocalClock(p, 1), ValidationError);
    ClockParams q;
    q.jitter_sigma_ps = -1.0;
    REQUIRE_THROWS_AS(LocalClock(q, 1), ValidationError);
    ClockParams r;
    r.wander_sigma_ppm = -0.1;
    REQUIRE_THROWS_AS(LocalClock(r, 1), ValidationError);
}
