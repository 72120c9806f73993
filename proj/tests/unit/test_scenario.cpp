#include <catch2/catch_amalgamated.hpp>

#include "tsnsim/scenario.hpp"

#include <string>

using namespace tsnsim;

namespace {

Scenario parse(const std::string& text)
{
    return parse_scenario(text, "<memory>");
}

Scenario parse_valid(const std::string& text)
{
    Scenario s = parse(text);
    validate_scenario(s);
    return s;
}

const std::string kMinimal = R"({
    "name": "pair",
    "duration": "2s",
    "nodes": [{"id": 1, "gm_capable": true}, {"id": 2}],
    "links": [{"a": 1, "b": 2}]
})";

} // namespace

TEST_CASE("a minimal scenario parses with documented defaults", "[scenario]")
{
    Scenario s = parse_valid(kMinimal);
    REQUIRE(s.name == "pair");
    REQUIRE(s.duration.ps == 2'000'000'000'000);
    REQUIRE(s.seed == 1);
    REQUIRE(s.gptp.sync_interval.ps == 125'000'000'000);
    REQUIRE(s.gptp.announce_interval.ps == 1'000'000'000'000);
    REQUIRE(s.gptp.announce_timeout_intervals == 3);
    REQUIRE(s.gptp.sync_receipt_timeout_intervals == 3);
    REQUIRE(s.gptp.rate_ratio_estimation);
    REQUIRE(!s.metric_interval);
    REQUIRE(s.nodes.size() == 2);
    const NodeSpec& n = s.nodes[0];
    REQUIRE(n.kind == NodeKind::EndStation);
    REQUIRE(n.announce.priority1 == 128);
    REQUIRE(n.announce.clock_class == 248);
    REQUIRE(n.announce.clock_accuracy == 0xFE);
    REQUIRE(n.announce.variance == 0xFFFF);
    REQUIRE(n.announce.priority2 == 128);
    // Identity defaults to the node id plus one so id 0 stays valid.
    REQUIRE(n.announce.identity == 2);
    REQUIRE(s.nodes[1].announce.identity == 3);
    REQUIRE(n.residence.ps == 250'000'000);
    REQUIRE(s.links[0].latency.ps == 500'000);
    REQUIRE(s.links[0].asymmetry.ps == 0);
}

TEST_CASE("durations accept integers as picoseconds and suffixed strings", "[scenario]")
{
    Scenario s = parse(R"({"duration": 42, "nodes": [{"id": 1, "gm_capable": true}]})");
    REQUIRE(s.duration.ps == 42);
    s = parse(R"({"duration": "1.5us", "nodes": [{"id": 1, "gm_capable": true}]})");
    REQUIRE(s.duration.ps == 1'500'000);
    REQUIRE_THROWS_AS(parse(R"({"duration": "5 s", "nodes": []})"), ValidationError);
    REQUIRE_THROWS_AS(parse(R"({"duration": 1.5, "nodes": []})"), ValidationError);
    REQUIRE_THROWS_AS(parse(R"({"duration": true, "nodes": []})"), ValidationError);
}

TEST_CASE("unknown keys are rejected at every level", "[scenario]")
{
    auto rejects = [](const std::string& text) {
        REQUIRE_THROWS_AS(parse(text), ValidationError);
    };
    rejects(R"({"nodes": [], "bogus": 1})");
    rejects(R"({"nodes": [], "gptp": {"sync": "125ms"}})");
    rejects(R"({"nodes": [], "metrics": {"interval": 1}})");
    rejects(R"({"nodes": [{"id": 1, "color": "red"}]})");
    rejects(R"({"nodes": [{"id": 1, "clock": {"drift": 1}}]})");
    rejects(R"({"nodes": [{"id": 1, "announce": {"priority": 1}}]})");
    rejects(R"({"nodes": [{"id": 1, "static_role": {"role": "primary_gm", "domain": 0, "x": 1}}]})");
    rejects(R"({"nodes": [{"id": 1, "fiveg": {"modes": "boundary_clock"}}]})");
    rejects(R"({"nodes": [{"id": 1}, {"id": 2}], "links": [{"a": 1, "b": 2, "speed": 1}]})");
    rejects(R"({"nodes": [{"id": 1}], "faults": [{"kind": "gm_hard_failure", "at": 0, "node": 1, "why": "x"}]})");
    rejects(R"({"nodes": [{"id": 1}], "hot_standby": {"primary_domain": 0, "standby_domain": 1, "primary_gm": 1, "standby_gm": 1, "mode": "x"}})");
}

TEST_CASE("malformed json reports the origin", "[scenario]")
{
    try {
        parse("{ not json");
        FAIL("expected a parse failure");
    } catch (const ValidationError& e) {
        REQUIRE(std::string(e.what()).find("<memory>") != std::string::npos);
    }
    REQUIRE_THROWS_AS(parse(R"(["not", "an", "object"])"), ValidationError);
    REQUIRE_THROWS_AS(parse(R"({"name": "x"})"), ValidationError); // nodes required
}

TEST_CASE("clock fields convert ppm drift to integer ppt", "[scenario]")
{
    Scenario s = parse(R"({
        "nodes": [{"id": 1, "gm_capable": true,
                   "clock": {"offset": "5ms", "drift_ppm": 2.5,
                             "wander_sigma_ppm": 0.01, "jitter_sigma": "8ns",
                             "granularity": "1ns", "timescale": "arbitrary"}}]
    })");
    const ClockParams& c = s.nodes[0].clock;
    REQUIRE(c.offset0.ps == 5'000'000'000);
    REQUIRE(c.drift_ppt == 2'500'000);
    REQUIRE(c.wander_sigma_ppm == 0.01);
    REQUIRE(c.jitter_sigma_ps == 8000.0);
    REQUIRE(c.granularity.ps == 1000);
    REQUIRE(c.timescale == Timescale::Arbitrary);
}

TEST_CASE("the hot-standby block stamps static roles onto its grandmasters", "[scenario]")
{
    const std::string text = R"({
        "nodes": [{"id": 1, "gm_capable": true}, {"id": 2, "gm_capable": true},
                  {"id": 3}],
        "links": [{"a": 1, "b": 3}, {"a": 2, "b": 3}],
        "hot_standby": {"primary_domain": 0, "standby_domain": 1,
                        "primary_gm": 1, "standby_gm": 2}
    })";
    Scenario s = parse_valid(text);
    REQUIRE(s.nodes[0].static_role->role == StaticRole::PrimaryGm);
    REQUIRE(s.nodes[0].static_role->domain == 0);
    REQUIRE(s.nodes[1].static_role->role == StaticRole::HotStandbyGm);
    REQUIRE(s.nodes[1].static_role->domain == 1);
    REQUIRE(s.hot_standby->offset_threshold.ps == 1'000'000);
    REQUIRE(s.hot_standby->staleness.ps == 375'000'000'000);
}

TEST_CASE("hot-standby contradictions and gaps are rejected", "[scenario]")
{
    // A pre-existing role that disagrees with the block.
    Scenario s = parse(R"({
        "nodes": [{"id": 1, "gm_capable": true,
                   "static_role": {"role": "hot_standby_gm", "domain": 1}},
                  {"id": 2, "gm_capable": true}],
        "links": [{"a": 1, "b": 2}],
        "hot_standby": {"primary_domain": 0, "standby_domain": 1,
                        "primary_gm": 1, "standby_gm": 2}
    })");
    REQUIRE_THROWS_AS(validate_scenario(s), ValidationError);

    // A grandmaster that is not gm-capable.
    s = parse(R"({
        "nodes": [{"id": 1, "gm_capable": true}, {"id": 2}],
        "links": [{"a": 1, "b": 2}],
        "hot_standby": {"primary_domain": 0, "standby_domain": 1,
                        "primary_gm": 1, "standby_gm": 2}
    })");
    REQUIRE_THROWS_AS(validate_scenario(s), ValidationError);

    // A grandmaster id that does not exist.
    s = parse(R"({
        "nodes": [{"id": 1, "gm_capable": true}, {"id": 2, "gm_capable": true}],
        "links": [{"a": 1, "b": 2}],
        "hot_standby": {"primary_domain": 0, "standby_domain": 1,
                        "primary_gm": 1, "standby_gm": 9}
    })");
    REQUIRE_THROWS_AS(validate_scenario(s), ValidationError);
}

TEST_CASE("duplicate clock identities are rejected", "[scenario]")
{
    Scenario s = parse(R"({
        "nodes": [{"id": 1, "gm_capable": true, "announce": {"identity": 3}},
                  {"id": 2}],
        "links": [{"a": 1, "b": 2}]
    })");
    // Node 2 defaults to identity 3 as well.
    REQUIRE_THROWS_AS(validate_scenario(s), ValidationError);
}

TEST_CASE("fault specs are validated against the topology", "[scenario]")
{
    auto invalid = [](const std::string& faults) {
        Scenario s = parse(R"({
            "nodes": [{"id": 1, "gm_capable": true}, {"id": 2}],
            "links": [{"a": 1, "b": 2}],
            "faults": )" + faults + "}");
        REQUIRE_THROWS_AS(validate_scenario(s), ValidationError);
    };
    invalid(R"([{"kind": "gm_hard_failure", "at": "1s"}])");
    invalid(R"([{"kind": "gm_hard_failure", "at": "1s", "node": 9}])");
    invalid(R"([{"kind": "gm_hard_failure", "at": "-1s", "node": 1}])");
    invalid(R"([{"kind": "phase_glitch", "at": "1s", "magnitude": "1us"}])");
    invalid(R"([{"kind": "phase_glitch", "at": "1s", "node": 1}])");
    invalid(R"([{"kind": "service_toggle", "at": "1s"}])"); // no fiveg bridge
    invalid(R"([{"kind": "service_toggle", "at": "1s", "node": 2}])");
}

TEST_CASE("a service toggle defaults to the only radio bridge", "[scenario]")
{
    Scenario s = parse_valid(R"({
        "nodes": [{"id": 1, "gm_capable": true},
                  {"id": 2, "kind": "fiveg_bridge",
                   "fiveg": {"mode": "e2e_transparent", "ds_tt_peers": [3]}},
                  {"id": 3}],
        "links": [{"a": 1, "b": 2}, {"a": 2, "b": 3}],
        "faults": [{"kind": "service_toggle", "at": "1s", "active": false}]
    })");
    REQUIRE(s.faults[0].node == std::optional<NodeId>{2});
    REQUIRE(!s.faults[0].active);
}

TEST_CASE("nonpositive durations and intervals are rejected", "[scenario]")
{
    auto invalid = [](const std::string& text) {
        Scenario s = parse(text);
        REQUIRE_THROWS_AS(validate_scenario(s), ValidationError);
    };
    invalid(R"({"duration": 0, "nodes": [{"id": 1, "gm_capable": true}]})");
    invalid(R"({"duration": "-1s", "nodes": [{"id": 1, "gm_capable": true}]})");
    invalid(R"({"gptp": {"sync_interval": 0}, "nodes": [{"id": 1, "gm_capable": true}]})");
    invalid(R"({"gptp": {"announce_timeout_intervals": 0}, "nodes": [{"id": 1, "gm_capable": true}]})");
    invalid(R"({"metrics": {"sample_interval": 0}, "nodes": [{"id": 1, "gm_capable": true}]})");
    invalid(R"({"wander_interval": 0, "nodes": [{"id": 1, "gm_capable": true}]})");
}

TEST_CASE("canonical serialization round-trips exactly", "[scenario]")
{
    Scenario s = parse_valid(R"({
        "name": "rich",
        "duration": "10s",
        "seed": 42,
        "gptp": {"sync_interval": "250ms", "rate_ratio_estimation": false},
        "metrics": {"sample_interval": "50ms"},
        "nodes": [{"id": 1, "gm_capable": true, "label": "gm",
                   "clock": {"offset": "1ms", "drift_ppm": -3}},
                  {"id": 2, "gm_capable": true},
                  {"id": 3, "kind": "fiveg_bridge",
                   "fiveg": {"mode": "boundary_clock", "direction": "uplink",
                             "ds_tt_peers": [4]}},
                  {"id": 4, "kind": "bridge"}],
        "links": [{"a": 1, "b": 3}, {"a": 2, "b": 3},
                  {"a": 3, "b": 4, "latency": "1us", "asymmetry": "200ns"}],
        "hot_standby": {"primary_domain": 0, "standby_domain": 1,
                        "primary_gm": 1, "standby_gm": 2},
        "faults": [{"kind": "phase_glitch", "at": "2s", "node": 1, "magnitude": "10us"},
                   {"kind": "service_toggle", "at": "3s", "active": true}]
    })");
    nlohmann::json first = to_json(s);
    Scenario reloaded = parse_scenario(first.dump(), "<roundtrip>");
    validate_scenario(reloaded);
    REQUIRE(to_json(reloaded) == first);
}

TEST_CASE("loading a missing file fails cleanly", "[scenario]")
{
    REQUIRE_THROWS_AS(load_scenario("/nonexistent/nowhere.json"), IoError);
}

TEST_CASE("the shipped scenarios all load and validate", "[scenario]")
{
    for (const char* name : {"fig1.json", "hotstandby_failover.json",
                             "bmca_baseline.json", "glitch.json", "fiveg_band.json"}) {
        Scenario s = load_scenario(std::string(TSNSIM_SCENARIO_DIR) + "/" + name);
        REQUIRE(!s.name.empty());
        REQUIRE(s.duration.ps > 0);
        REQUIRE(!s.nodes.empty());
    }
}
