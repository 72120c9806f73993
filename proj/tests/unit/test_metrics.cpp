#include <catch2/catch_amalgamated.hpp>

#include "tsnsim/metrics.hpp"

using namespace tsnsim;

namespace {

TimeErrorSample sample(NodeId node, std::int64_t at, std::int64_t error,
                       DomainId domain = 0)
{
    TimeErrorSample s;
    s.node = node;
    s.at = SimTime{at};
    s.domain = domain;
    s.error = Duration{error};
    s.defined = true;
    s.source = SourceState::Fresh;
    return s;
}

TimeErrorSample undefined_sample(NodeId node, std::int64_t at)
{
    TimeErrorSample s;
    s.node = node;
    s.at = SimTime{at};
    s.defined = false;
    return s;
}

} // namespace

TEST_CASE("max abs error respects the window and skips undefined samples", "[metrics]")
{
    MetricsTrace t;
    t.samples = {sample(1, 0, 5), sample(1, 100, -9), sample(1, 200, 3),
                 sample(1, 300, 100), undefined_sample(1, 150), sample(2, 100, 999)};
    // Window bounds are inclusive on both ends.
    REQUIRE(max_abs_error(t, 1, SimTime{0}, SimTime{200}).ps == 9);
    REQUIRE(max_abs_error(t, 1, SimTime{100}, SimTime{100}).ps == 9);
    REQUIRE(max_abs_error(t, 1, SimTime{0}, SimTime{300}).ps == 100);
    REQUIRE(max_abs_error(t, 1, SimTime{200}, SimTime{200}).ps == 3);
    REQUIRE_THROWS_AS(max_abs_error(t, 1, SimTime{400}, SimTime{500}), NoSamplesError);
    REQUIRE_THROWS_AS(max_abs_error(t, 1, SimTime{150}, SimTime{150}), NoSamplesError);
    REQUIRE_THROWS_AS(max_abs_error(t, 3, SimTime{0}, SimTime{300}), NoSamplesError);
}

TEST_CASE("convergence time is the start of the maximal settled suffix", "[metrics]")
{
    MetricsTrace t;
    t.samples = {sample(1, 0, 50), sample(1, 100, 20), sample(1, 200, 5),
                 sample(1, 300, 3)};
    REQUIRE(convergence_time(t, 1, Duration{10}).ps == 200);
    // The boundary sample counts as settled.
    REQUIRE(convergence_time(t, 1, Duration{20}).ps == 100);
    // Settled from the very first sample reads as zero.
    REQUIRE(convergence_time(t, 1, Duration{50}).ps == 0);
    REQUIRE_THROWS_AS(convergence_time(t, 1, Duration{2}), NotConvergedError);
    REQUIRE_THROWS_AS(convergence_time(t, 2, Duration{100}), NotConvergedError);
}

TEST_CASE("an undefined sample interrupts convergence", "[metrics]")
{
    MetricsTrace t;
    t.samples = {sample(1, 0, 1), sample(1, 100, 1), undefined_sample(1, 200),
                 sample(1, 300, 1), sample(1, 400, 1)};
    REQUIRE(convergence_time(t, 1, Duration{10}).ps == 300);
}

TEST_CASE("failover report aggregates the worst receiver", "[metrics]")
{
    FaultSpec fault;
    fault.kind = FaultKind::GmHardFailure;
    fault.at = SimTime{1000};
    fault.node = 1;

    MetricsTrace t;
    t.end = SimTime{3000};
    t.samples = {sample(1, 500, 0), sample(2, 500, 0), sample(3, 500, 0)};

    Annotation applied;
    applied.at = SimTime{1000};
    applied.node = 1;
    applied.kind = AnnotationKind::FaultApplied;
    t.annotations.push_back(applied);

    SourceChange pre; // before the fault, must not count
    pre.node = 2;
    pre.at = SimTime{500};
    t.switches.push_back(pre);

    SourceChange c2;
    c2.node = 2;
    c2.at = SimTime{1500};
    c2.discontinuity_defined = true;
    c2.discontinuity = Duration{77};
    t.switches.push_back(c2);

    SourceChange c3;
    c3.node = 3;
    c3.at = SimTime{1800};
    c3.discontinuity_defined = true;
    c3.discontinuity = Duration{30};
    t.switches.push_back(c3);

    Annotation lost2{SimTime{1200}, 2, AnnotationKind::SourceLost, 0};
    Annotation fresh2{SimTime{1600}, 2, AnnotationKind::SourceFresh, 0};
    Annotation lost3{SimTime{1100}, 3, AnnotationKind::SourceLost, 0};
    t.annotations.insert(t.annotations.end(), {lost2, fresh2, lost3});

    FailoverReport r = failover_report(t, fault);
    REQUIRE(r.switch_at.ps == 1800);
    REQUIRE(r.latency.ps == 800);
    REQUIRE(r.discontinuity.ps == 77);
    // Node 3 never gets a source back, so its gap runs to the end of trace.
    REQUIRE(r.gap.ps == 2000);
}

TEST_CASE("failover report without any switch spans the whole trace", "[metrics]")
{
    FaultSpec fault;
    fault.at = SimTime{1000};
    fault.node = 1;

    MetricsTrace t;
    t.end = SimTime{4000};
    t.samples = {sample(2, 500, 0)};
    t.annotations.push_back({SimTime{1000}, 1, AnnotationKind::FaultApplied, 0});

    FailoverReport r = failover_report(t, fault);
    REQUIRE(r.switch_at.ps == 4000);
    REQUIRE(r.latency.ps == 3000);
    REQUIRE(r.gap.ps == 0);

    MetricsTrace missing;
    missing.samples = {sample(2, 500, 0)};
    REQUIRE_THROWS_AS(failover_report(missing, fault), ContractError);
}

TEST_CASE("error summaries cover each node once, sorted", "[metrics]")
{
    MetricsTrace t;
    t.samples = {sample(7, 0, -10), sample(3, 0, 1), sample(7, 100, 20),
                 sample(7, 200, 4), undefined_sample(7, 300), sample(3, 100, -1)};
    auto sums = summarize_errors(t);
    REQUIRE(sums.size() == 2);
    REQUIRE(sums[0].node == 3);
    REQUIRE(sums[1].node == 7);
    const ErrorSummary& s = sums[1];
    REQUIRE(s.count == 3);
    REQUIRE(s.min.ps == -10);
    REQUIRE(s.max.ps == 20);
    REQUIRE(s.mean_ps == Catch::Approx(14.0 / 3.0));
    // Nearest-rank 99th percentile of three magnitudes is the largest.
    REQUIRE(s.p99_abs.ps == 20);
}

TEST_CASE("the 99th percentile uses the nearest rank", "[metrics]")
{
    MetricsTrace t;
    for (int i = 1; i <= 100; ++i) t.samples.push_back(sample(1, i, i));
    auto sums = summarize_errors(t);
    REQUIRE(sums.size() == 1);
    REQUIRE(sums[0].p99_abs.ps == 99);
    REQUIRE(sums[0].count == 100);
}

TEST_CASE("csv export sorts by node then time and drops undefined rows", "[metrics]")
{
    MetricsTrace t;
    t.samples = {sample(2, 100, 3, 1), sample(1, 200, 7), undefined_sample(1, 150),
                 sample(1, 100, -5)};
    REQUIRE(write_csv(t) == "node,at_ps,domain,error_ps\n"
                            "1,100,0,-5\n"
                            "1,200,0,7\n"
                            "2,100,1,3\n");
}
