#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsnsim/error.hpp"
#include "tsnsim/faults.hpp"
#include "tsnsim/gptp.hpp"
#include "tsnsim/hot_standby.hpp"
#include "tsnsim/topology.hpp"

namespace tsnsim {

// Scenario files are strict JSON: unknown keys are rejected, durations
// are integers in picoseconds or strings with a unit suffix ("125ms"),
// and loading normalizes everything to picoseconds. A loaded scenario
// serializes back to a canonical form that reloads identically.

struct Scenario {
    std::string name;
    Duration duration{30000000000000}; // 30 s
    std::uint64_t seed = 1;
    GptpParams gptp;
    std::optional<Duration> metric_interval; // default: one sample per sync interval
    Duration wander_interval{10000000000};   // 10 ms wander advancement step
    std::vector<NodeSpec> nodes;
    std::vector<Link> links;
    std::optional<HotStandbyConfig> hot_standby;
    std::vector<FaultSpec> faults;
};

namespace scenario_detail {

using nlohmann::json;

inline void check_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed)
{
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known)
            throw ValidationError(path + ": unknown key '" + item.key() + "'");
    }
}

inline const json& require(const json& obj, const std::string& path, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError(path + ": missing required key '" + key + "'");
    return *it;
}

inline Duration parse_duration_value(const json& v, const std::string& path)
{
    if (v.is_number_integer())
        return Duration{v.get<std::int64_t>()};
    if (v.is_string()) {
        auto d = parse_duration(v.get<std::string>());
        if (!d)
            throw ValidationError(path + ": malformed duration '" + v.get<std::string>()
                                  + "'");
        return *d;
    }
    throw ValidationError(path + ": expected a duration (integer picoseconds or"
                                 " a string like \"125ms\")");
}

inline double parse_sigma_ps(const json& v, const std::string& path)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return static_cast<double>(parse_duration_value(v, path).ps);
    throw ValidationError(path + ": expected picoseconds as a number or duration string");
}

template <typename T>
T parse_enum(const json& v, const std::string& path,
             std::initializer_list<std::pair<const char*, T>> table)
{
    if (v.is_string()) {
        for (const auto& [name, value] : table)
            if (v.get<std::string>() == name) return value;
    }
    std::string names;
    for (const auto& [name, value] : table) {
        if (!names.empty()) names += ", ";
        names += name;
    }
    throw ValidationError(path + ": expected one of " + names);
}

inline ClockParams parse_clock(const json& v, const std::string& path)
{
    check_keys(v, path, {"offset", "drift_ppm", "wander_sigma_ppm", "jitter_sigma",
                         "granularity", "timescale"});
    ClockParams p;
    if (v.contains("offset")) p.offset0 = parse_duration_value(v["offset"], path + ".offset");
    if (v.contains("drift_ppm")) {
        if (!v["drift_ppm"].is_number())
            throw ValidationError(path + ".drift_ppm: expected a number");
        p.drift_ppt = ppt_from_ppm(v["drift_ppm"].get<double>());
    }
    if (v.contains("wander_sigma_ppm")) {
        if (!v["wander_sigma_ppm"].is_number())
            throw ValidationError(path + ".wander_sigma_ppm: expected a number");
        p.wander_sigma_ppm = v["wander_sigma_ppm"].get<double>();
    }
    if (v.contains("jitter_sigma"))
        p.jitter_sigma_ps = parse_sigma_ps(v["jitter_sigma"], path + ".jitter_sigma");
    if (v.contains("granularity"))
        p.granularity = parse_duration_value(v["granularity"], path + ".granularity");
    if (v.contains("timescale"))
        p.timescale = parse_enum<Timescale>(v["timescale"], path + ".timescale",
                                            {{"ptp", Timescale::Ptp},
                                             {"arbitrary", Timescale::Arbitrary}});
    return p;
}

inline FivegConfig parse_fiveg(const json& v, const std::string& path)
{
    check_keys(v, path,
               {"mode", "service_active", "direction", "ue_error_min", "ue_error_max",
                "error_model", "transit", "transit_jitter", "ds_tt_peers"});
    FivegConfig f;
    if (v.contains("mode"))
        f.mode = parse_enum<FivegMode>(v["mode"], path + ".mode",
                                       {{"boundary_clock", FivegMode::BoundaryClock},
                                        {"p2p_transparent", FivegMode::P2pTransparent},
                                        {"e2e_transparent", FivegMode::E2eTransparent},
                                        {"time_aware_system", FivegMode::TimeAwareSystem}});
    if (v.contains("service_active")) {
        if (!v["service_active"].is_boolean())
            throw ValidationError(path + ".service_active: expected a boolean");
        f.service_active = v["service_active"].get<bool>();
    }
    if (v.contains("direction"))
        f.direction = parse_enum<FivegDirection>(v["direction"], path + ".direction",
                                                 {{"downlink", FivegDirection::Downlink},
                                                  {"uplink", FivegDirection::Uplink}});
    if (v.contains("ue_error_min"))
        f.ue_error_min = parse_duration_value(v["ue_error_min"], path + ".ue_error_min");
    if (v.contains("ue_error_max"))
        f.ue_error_max = parse_duration_value(v["ue_error_max"], path + ".ue_error_max");
    if (v.contains("error_model"))
        f.error_model = parse_enum<UeErrorModel>(v["error_model"], path + ".error_model",
                                                 {{"per_message", UeErrorModel::PerMessage},
                                                  {"slow_varying", UeErrorModel::SlowVarying}});
    if (v.contains("transit"))
        f.transit = parse_duration_value(v["transit"], path + ".transit");
    if (v.contains("transit_jitter"))
        f.transit_jitter = parse_duration_value(v["transit_jitter"], path + ".transit_jitter");
    if (v.contains("ds_tt_peers")) {
        if (!v["ds_tt_peers"].is_array())
            throw ValidationError(path + ".ds_tt_peers: expected an array of node ids");
        for (const auto& p : v["ds_tt_peers"]) {
            if (!p.is_number_integer())
                throw ValidationError(path + ".ds_tt_peers: expected integer node ids");
            f.ds_tt_peers.push_back(p.get<NodeId>());
        }
    }
    return f;
}

inline NodeSpec parse_node(const json& v, const std::string& path)
{
    check_keys(v, path, {"id", "label", "kind", "gm_capable", "static_role", "announce",
                         "clock", "residence", "fiveg"});
    NodeSpec n;
    const json& id = require(v, path, "id");
    if (!id.is_number_integer())
        throw ValidationError(path + ".id: expected an integer");
    n.id = id.get<NodeId>();
    if (v.contains("label")) {
        if (!v["label"].is_string())
            throw ValidationError(path + ".label: expected a string");
        n.label = v["label"].get<std::string>();
    }
    if (v.contains("kind"))
        n.kind = parse_enum<NodeKind>(v["kind"], path + ".kind",
                                      {{"end_station", NodeKind::EndStation},
                                       {"bridge", NodeKind::Bridge},
                                       {"fiveg_bridge", NodeKind::FiveGSBridge}});
    if (v.contains("gm_capable")) {
        if (!v["gm_capable"].is_boolean())
            throw ValidationError(path + ".gm_capable: expected a boolean");
        n.gm_capable = v["gm_capable"].get<bool>();
    }
    if (v.contains("static_role")) {
        const json& r = v["static_role"];
        check_keys(r, path + ".static_role", {"role", "domain"});
        StaticRoleAssignment a;
        a.role = parse_enum<StaticRole>(require(r, path + ".static_role", "role"),
                                        path + ".static_role.role",
                                        {{"primary_gm", StaticRole::PrimaryGm},
                                         {"hot_standby_gm", StaticRole::HotStandbyGm}});
        const json& d = require(r, path + ".static_role", "domain");
        if (!d.is_number_integer())
            throw ValidationError(path + ".static_role.domain: expected an integer");
        a.domain = d.get<DomainId>();
        n.static_role = a;
    }
    if (v.contains("announce")) {
        const json& a = v["announce"];
        check_keys(a, path + ".announce",
                   {"priority1", "clock_class", "clock_accuracy", "variance", "priority2",
                    "identity"});
        auto u8 = [&](const char* key, std::uint8_t& field) {
            if (!a.contains(key)) return;
            if (!a[key].is_number_unsigned() || a[key].get<std::uint64_t>() > 255)
                throw ValidationError(path + ".announce." + key + ": expected 0..255");
            field = static_cast<std::uint8_t>(a[key].get<std::uint64_t>());
        };
        u8("priority1", n.announce.priority1);
        u8("clock_class", n.announce.clock_class);
        u8("clock_accuracy", n.announce.clock_accuracy);
        u8("priority2", n.announce.priority2);
        if (a.contains("variance")) {
            if (!a["variance"].is_number_unsigned()
                || a["variance"].get<std::uint64_t>() > 0xFFFF)
                throw ValidationError(path + ".announce.variance: expected 0..65535");
            n.announce.variance = static_cast<std::uint16_t>(a["variance"].get<std::uint64_t>());
        }
        if (a.contains("identity")) {
            if (!a["identity"].is_number_unsigned())
                throw ValidationError(path + ".announce.identity: expected an unsigned integer");
            n.announce.identity = a["identity"].get<ClockIdentity>();
        }
    }
    if (v.contains("clock")) n.clock = parse_clock(v["clock"], path + ".clock");
    if (v.contains("residence"))
        n.residence = parse_duration_value(v["residence"], path + ".residence");
    if (v.contains("fiveg")) n.fiveg = parse_fiveg(v["fiveg"], path + ".fiveg");
    if (n.announce.identity == 0)
        n.announce.identity = static_cast<ClockIdentity>(n.id) + 1;
    return n;
}

inline FaultSpec parse_fault(const json& v, const std::string& path)
{
    check_keys(v, path, {"kind", "at", "node", "magnitude", "active"});
    FaultSpec f;
    f.kind = parse_enum<FaultKind>(require(v, path, "kind"), path + ".kind",
                                   {{"gm_hard_failure", FaultKind::GmHardFailure},
                                    {"phase_glitch", FaultKind::PhaseGlitch},
                                    {"service_toggle", FaultKind::ServiceToggle}});
    f.at = at(parse_duration_value(require(v, path, "at"), path + ".at"));
    if (v.contains("node")) {
        if (!v["node"].is_number_integer())
            throw ValidationError(path + ".node: expected an integer");
        f.node = v["node"].get<NodeId>();
    }
    if (v.contains("magnitude"))
        f.magnitude = parse_duration_value(v["magnitude"], path + ".magnitude");
    if (v.contains("active")) {
        if (!v["active"].is_boolean())
            throw ValidationError(path + ".active: expected a boolean");
        f.active = v["active"].get<bool>();
    }
    return f;
}

} // namespace scenario_detail

/// Parse scenario text. `origin` names the source in diagnostics (a file
/// path or "<memory>"). Parse errors carry the position nlohmann reports.
inline Scenario parse_scenario(const std::string& text, const std::string& origin)
{
    using scenario_detail::check_keys;
    using scenario_detail::parse_duration_value;
    using scenario_detail::require;
    using nlohmann::json;

    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    if (!root.is_object())
        throw ValidationError(origin + ": scenario must be a JSON object");

    check_keys(root, origin,
               {"name", "duration", "seed", "gptp", "metrics", "wander_interval", "nodes",
                "links", "hot_standby", "faults"});

    Scenario s;
    if (root.contains("name")) {
        if (!root["name"].is_string())
            throw ValidationError(origin + ".name: expected a string");
        s.name = root["name"].get<std::string>();
    }
    if (root.contains("duration"))
        s.duration = parse_duration_value(root["duration"], origin + ".duration");
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned())
            throw ValidationError(origin + ".seed: expected an unsigned integer");
        s.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("gptp")) {
        const json& g = root["gptp"];
        check_keys(g, origin + ".gptp",
                   {"sync_interval", "announce_interval", "announce_timeout_intervals",
                    "sync_receipt_timeout_intervals", "pdelay_interval",
                    "pdelay_turnaround", "rate_ratio_estimation"});
        if (g.contains("sync_interval"))
            s.gptp.sync_interval =
                parse_duration_value(g["sync_interval"], origin + ".gptp.sync_interval");
        if (g.contains("announce_interval"))
            s.gptp.announce_interval = parse_duration_value(
                g["announce_interval"], origin + ".gptp.announce_interval");
        if (g.contains("announce_timeout_intervals")) {
            if (!g["announce_timeout_intervals"].is_number_integer())
                throw ValidationError(origin
                                      + ".gptp.announce_timeout_intervals: expected an integer");
            s.gptp.announce_timeout_intervals = g["announce_timeout_intervals"].get<int>();
        }
        if (g.contains("sync_receipt_timeout_intervals")) {
            if (!g["sync_receipt_timeout_intervals"].is_number_integer())
                throw ValidationError(
                    origin + ".gptp.sync_receipt_timeout_intervals: expected an integer");
            s.gptp.sync_receipt_timeout_intervals =
                g["sync_receipt_timeout_intervals"].get<int>();
        }
        if (g.contains("pdelay_interval"))
            s.gptp.pdelay_interval =
                parse_duration_value(g["pdelay_interval"], origin + ".gptp.pdelay_interval");
        if (g.contains("pdelay_turnaround"))
            s.gptp.pdelay_turnaround = parse_duration_value(
                g["pdelay_turnaround"], origin + ".gptp.pdelay_turnaround");
        if (g.contains("rate_ratio_estimation")) {
            if (!g["rate_ratio_estimation"].is_boolean())
                throw ValidationError(origin
                                      + ".gptp.rate_ratio_estimation: expected a boolean");
            s.gptp.rate_ratio_estimation = g["rate_ratio_estimation"].get<bool>();
        }
    }
    if (root.contains("metrics")) {
        const json& m = root["metrics"];
        check_keys(m, origin + ".metrics", {"sample_interval"});
        if (m.contains("sample_interval"))
            s.metric_interval = parse_duration_value(m["sample_interval"],
                                                     origin + ".metrics.sample_interval");
    }
    if (root.contains("wander_interval"))
        s.wander_interval =
            parse_duration_value(root["wander_interval"], origin + ".wander_interval");

    const json& nodes = require(root, origin, "nodes");
    if (!nodes.is_array())
        throw ValidationError(origin + ".nodes: expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        s.nodes.push_back(scenario_detail::parse_node(
            nodes[i], origin + ".nodes[" + std::to_string(i) + "]"));

    if (root.contains("links")) {
        const json& links = root["links"];
        if (!links.is_array())
            throw ValidationError(origin + ".links: expected an array");
        for (std::size_t i = 0; i < links.size(); ++i) {
            const json& v = links[i];
            std::string path = origin + ".links[" + std::to_string(i) + "]";
            check_keys(v, path, {"a", "b", "latency", "asymmetry"});
            Link l;
            const json& a = require(v, path, "a");
            const json& b = require(v, path, "b");
            if (!a.is_number_integer() || !b.is_number_integer())
                throw ValidationError(path + ": endpoints must be integer node ids");
            l.a = a.get<NodeId>();
            l.b = b.get<NodeId>();
            if (v.contains("latency"))
                l.latency = parse_duration_value(v["latency"], path + ".latency");
            if (v.contains("asymmetry"))
                l.asymmetry = parse_duration_value(v["asymmetry"], path + ".asymmetry");
            s.links.push_back(l);
        }
    }

    if (root.contains("hot_standby")) {
        const json& h = root["hot_standby"];
        check_keys(h, origin + ".hot_standby",
                   {"primary_domain", "standby_domain", "primary_gm", "standby_gm",
                    "offset_threshold", "staleness", "gate_threshold"});
        HotStandbyConfig cfg;
        auto geti = [&](const char* key, auto& field) {
            const json& v = require(h, origin + ".hot_standby", key);
            if (!v.is_number_integer())
                throw ValidationError(origin + ".hot_standby." + key
                                      + ": expected an integer");
            field = v.get<std::decay_t<decltype(field)>>();
        };
        geti("primary_domain", cfg.primary_domain);
        geti("standby_domain", cfg.standby_domain);
        geti("primary_gm", cfg.primary_gm);
        geti("standby_gm", cfg.standby_gm);
        if (h.contains("offset_threshold"))
            cfg.offset_threshold = parse_duration_value(
                h["offset_threshold"], origin + ".hot_standby.offset_threshold");
        if (h.contains("staleness"))
            cfg.staleness =
                parse_duration_value(h["staleness"], origin + ".hot_standby.staleness");
        if (h.contains("gate_threshold"))
            cfg.gate_threshold = parse_duration_value(
                h["gate_threshold"], origin + ".hot_standby.gate_threshold");
        s.hot_standby = cfg;
    }

    if (root.contains("faults")) {
        const json& faults = root["faults"];
        if (!faults.is_array())
            throw ValidationError(origin + ".faults: expected an array");
        for (std::size_t i = 0; i < faults.size(); ++i)
            s.faults.push_back(scenario_detail::parse_fault(
                faults[i], origin + ".faults[" + std::to_string(i) + "]"));
    }

    return s;
}

/// Cross-field validation; returns the validated topology. Stamps static
/// roles derived from the hot-standby block onto the named nodes first.
inline Topology validate_scenario(Scenario& s)
{
    if (s.duration.ps <= 0)
        throw ValidationError("scenario duration must be positive");
    if (s.gptp.sync_interval.ps <= 0 || s.gptp.announce_interval.ps <= 0
        || s.gptp.pdelay_interval.ps <= 0)
        throw ValidationError("gptp intervals must be positive");
    if (s.gptp.announce_timeout_intervals < 1 || s.gptp.sync_receipt_timeout_intervals < 1)
        throw ValidationError("gptp timeouts must be at least one interval");
    if (s.metric_interval && s.metric_interval->ps <= 0)
        throw ValidationError("metrics sample interval must be positive");
    if (s.wander_interval.ps <= 0)
        throw ValidationError("wander interval must be positive");

    if (s.hot_standby) {
        s.hot_standby->validate();
        auto stamp = [&](NodeId id, StaticRole role, DomainId domain) {
            for (NodeSpec& n : s.nodes) {
                if (n.id != id) continue;
                StaticRoleAssignment want{role, domain};
                if (n.static_role
                    && (n.static_role->role != want.role
                        || n.static_role->domain != want.domain))
                    throw ValidationError("node " + std::to_string(id)
                                          + " carries a static role that contradicts"
                                            " the hot_standby block");
                n.static_role = want;
                if (!n.gm_capable)
                    throw ValidationError("hot standby grandmaster " + std::to_string(id)
                                          + " is not gm-capable");
                return;
            }
            throw ValidationError("hot_standby references unknown node "
                                  + std::to_string(id));
        };
        stamp(s.hot_standby->primary_gm, StaticRole::PrimaryGm,
              s.hot_standby->primary_domain);
        stamp(s.hot_standby->standby_gm, StaticRole::HotStandbyGm,
              s.hot_standby->standby_domain);
    }

    Topology topo = validate_topology(s.nodes, s.links);

    std::set<ClockIdentity> identities;
    for (const NodeSpec& n : topo.nodes()) {
        if (!identities.insert(n.announce.identity).second)
            throw ValidationError("node " + std::to_string(n.id)
                                  + " duplicates clock identity "
                                  + std::to_string(n.announce.identity));
    }

    std::vector<NodeId> fiveg_nodes;
    for (const NodeSpec& n : topo.nodes())
        if (n.kind == NodeKind::FiveGSBridge) fiveg_nodes.push_back(n.id);

    for (std::size_t i = 0; i < s.faults.size(); ++i) {
        FaultSpec& f = s.faults[i];
        std::string path = "faults[" + std::to_string(i) + "]";
        if (f.at.ps < 0)
            throw ValidationError(path + ": fault time must not be negative");
        switch (f.kind) {
        case FaultKind::GmHardFailure:
            if (!f.node) throw ValidationError(path + ": gm_hard_failure needs a node");
            break;
        case FaultKind::PhaseGlitch:
            if (!f.node) throw ValidationError(path + ": phase_glitch needs a node");
            if (f.magnitude.ps == 0)
                throw ValidationError(path + ": phase_glitch needs a nonzero magnitude");
            break;
        case FaultKind::ServiceToggle:
            if (!f.node) {
                if (fiveg_nodes.size() != 1)
                    throw ValidationError(path + ": service_toggle without a node needs"
                                                 " exactly one fiveg_bridge in the scenario");
                f.node = fiveg_nodes.front();
            }
            break;
        }
        if (f.node && !topo.has_node(*f.node))
            throw ValidationError(path + ": references unknown node "
                                  + std::to_string(*f.node));
        if (f.kind == FaultKind::ServiceToggle
            && topo.node(*f.node).kind != NodeKind::FiveGSBridge)
            throw ValidationError(path + ": service_toggle targets node "
                                  + std::to_string(*f.node)
                                  + ", which is not a fiveg_bridge");
    }

    return topo;
}

/// Load and fully validate a scenario file.
inline Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError(path + ": cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    Scenario s = parse_scenario(buf.str(), path);
    validate_scenario(s);
    return s;
}

/// Canonical serialization: every field explicit, durations as integer
/// picoseconds. Reloading the output reproduces the scenario exactly.
inline nlohmann::json to_json(const Scenario& s)
{
    using nlohmann::json;
    json root;
    root["name"] = s.name;
    root["duration"] = s.duration.ps;
    root["seed"] = s.seed;
    root["gptp"] = {{"sync_interval", s.gptp.sync_interval.ps},
                    {"announce_interval", s.gptp.announce_interval.ps},
                    {"announce_timeout_intervals", s.gptp.announce_timeout_intervals},
                    {"sync_receipt_timeout_intervals", s.gptp.sync_receipt_timeout_intervals},
                    {"pdelay_interval", s.gptp.pdelay_interval.ps},
                    {"pdelay_turnaround", s.gptp.pdelay_turnaround.ps},
                    {"rate_ratio_estimation", s.gptp.rate_ratio_estimation}};
    if (s.metric_interval) root["metrics"] = {{"sample_interval", s.metric_interval->ps}};
    root["wander_interval"] = s.wander_interval.ps;

    root["nodes"] = json::array();
    for (const NodeSpec& n : s.nodes) {
        json v;
        v["id"] = n.id;
        v["label"] = n.label;
        switch (n.kind) {
        case NodeKind::EndStation: v["kind"] = "end_station"; break;
        case NodeKind::Bridge: v["kind"] = "bridge"; break;
        case NodeKind::FiveGSBridge: v["kind"] = "fiveg_bridge"; break;
        }
        v["gm_capable"] = n.gm_capable;
        if (n.static_role)
            v["static_role"] = {{"role", n.static_role->role == StaticRole::PrimaryGm
                                             ? "primary_gm"
                                             : "hot_standby_gm"},
                                {"domain", n.static_role->domain}};
        v["announce"] = {{"priority1", n.announce.priority1},
                         {"clock_class", n.announce.clock_class},
                         {"clock_accuracy", n.announce.clock_accuracy},
                         {"variance", n.announce.variance},
                         {"priority2", n.announce.priority2},
                         {"identity", n.announce.identity}};
        v["clock"] = {{"offset", n.clock.offset0.ps},
                      {"drift_ppm", static_cast<double>(n.clock.drift_ppt) / 1e6},
                      {"wander_sigma_ppm", n.clock.wander_sigma_ppm},
                      {"jitter_sigma", n.clock.jitter_sigma_ps},
                      {"granularity", n.clock.granularity.ps},
                      {"timescale",
                       n.clock.timescale == Timescale::Ptp ? "ptp" : "arbitrary"}};
        v["residence"] = n.residence.ps;
        if (n.fiveg) {
            const FivegConfig& f = *n.fiveg;
            json fv;
            switch (f.mode) {
            case FivegMode::BoundaryClock: fv["mode"] = "boundary_clock"; break;
            case FivegMode::P2pTransparent: fv["mode"] = "p2p_transparent"; break;
            case FivegMode::E2eTransparent: fv["mode"] = "e2e_transparent"; break;
            case FivegMode::TimeAwareSystem: fv["mode"] = "time_aware_system"; break;
            }
            fv["service_active"] = f.service_active;
            fv["direction"] = f.direction == FivegDirection::Downlink ? "downlink" : "uplink";
            fv["ue_error_min"] = f.ue_error_min.ps;
            fv["ue_error_max"] = f.ue_error_max.ps;
            fv["error_model"] =
                f.error_model == UeErrorModel::PerMessage ? "per_message" : "slow_varying";
            fv["transit"] = f.transit.ps;
            fv["transit_jitter"] = f.transit_jitter.ps;
            fv["ds_tt_peers"] = f.ds_tt_peers;
            v["fiveg"] = fv;
        }
        root["nodes"].push_back(v);
    }

    root["links"] = json::array();
    for (const Link& l : s.links)
        root["links"].push_back({{"a", l.a},
                                 {"b", l.b},
                                 {"latency", l.latency.ps},
                                 {"asymmetry", l.asymmetry.ps}});

    if (s.hot_standby) {
        const HotStandbyConfig& h = *s.hot_standby;
        root["hot_standby"] = {{"primary_domain", h.primary_domain},
                               {"standby_domain", h.standby_domain},
                               {"primary_gm", h.primary_gm},
                               {"standby_gm", h.standby_gm},
                               {"offset_threshold", h.offset_threshold.ps},
                               {"staleness", h.staleness.ps},
                               {"gate_threshold", h.gate_threshold.ps}};
    }

    root["faults"] = json::array();
    for (const FaultSpec& f : s.faults) {
        json v;
        switch (f.kind) {
        case FaultKind::GmHardFailure: v["kind"] = "gm_hard_failure"; break;
        case FaultKind::PhaseGlitch: v["kind"] = "phase_glitch"; break;
        case FaultKind::ServiceToggle: v["kind"] = "service_toggle"; break;
        }
        v["at"] = (f.at - SimTime{0}).ps;
        if (f.node) v["node"] = *f.node;
        if (f.kind == FaultKind::PhaseGlitch) v["magnitude"] = f.magnitude.ps;
        if (f.kind == FaultKind::ServiceToggle) v["active"] = f.active;
        root["faults"].push_back(v);
    }

    return root;
}

} // namespace tsnsim
