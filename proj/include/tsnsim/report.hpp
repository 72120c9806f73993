#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "tsnsim/faults.hpp"
#include "tsnsim/metrics.hpp"
#include "tsnsim/scenario.hpp"
#include "tsnsim/trace.hpp"

namespace tsnsim {

inline const char* to_string(AnnotationKind k)
{
    switch (k) {
    case AnnotationKind::FaultApplied: return "fault_applied";
    case AnnotationKind::StandbyGateOpened: return "standby_gate_opened";
    case AnnotationKind::SyncRejected: return "sync_rejected";
    case AnnotationKind::OrphanFollowUp: return "orphan_follow_up";
    case AnnotationKind::UncorrectedTransit: return "uncorrected_transit";
    case AnnotationKind::ServiceToggled: return "service_toggled";
    case AnnotationKind::SourceFresh: return "source_fresh";
    case AnnotationKind::SourceLost: return "source_lost";
    }
    return "unknown";
}

/// Aggregate a finished run into a machine-readable report: per-node
/// error statistics, every source switch, every annotation, and when the
/// scenario contains a hard grandmaster failure, the failover metrics
/// for it.
inline nlohmann::json build_report(const Scenario& scenario, const MetricsTrace& trace)
{
    nlohmann::json j;
    j["scenario"] = scenario.name;
    j["seed"] = scenario.seed;
    j["duration_ps"] = scenario.duration.ps;

    nlohmann::json nodes = nlohmann::json::array();
    for (const ErrorSummary& s : summarize_errors(trace)) {
        nlohmann::json n;
        n["node"] = s.node;
        for (const NodeSpec& spec : scenario.nodes)
            if (spec.id == s.node) n["label"] = spec.label;
        n["samples"] = s.count;
        n["min_error_ps"] = s.min.ps;
        n["max_error_ps"] = s.max.ps;
        n["mean_error_ps"] = s.mean_ps;
        n["p99_abs_error_ps"] = s.p99_abs.ps;
        nodes.push_back(std::move(n));
    }
    j["nodes"] = std::move(nodes);

    nlohmann::json switches = nlohmann::json::array();
    for (const SourceChange& c : trace.switches) {
        nlohmann::json s;
        s["node"] = c.node;
        s["at_ps"] = c.at.ps;
        s["from_domain"] = c.from_domain;
        s["to_domain"] = c.to_domain;
        s["from_gm"] = c.from_gm;
        s["to_gm"] = c.to_gm;
        if (c.discontinuity_defined) s["discontinuity_ps"] = c.discontinuity.ps;
        s["switch_count"] = c.switch_count;
        switches.push_back(std::move(s));
    }
    j["switches"] = std::move(switches);

    nlohmann::json annotations = nlohmann::json::array();
    for (const Annotation& a : trace.annotations) {
        nlohmann::json e;
        e["at_ps"] = a.at.ps;
        e["node"] = a.node;
        e["kind"] = to_string(a.kind);
        e["value"] = a.value;
        annotations.push_back(std::move(e));
    }
    j["annotations"] = std::move(annotations);

    for (const FaultSpec& f : scenario.faults) {
        if (f.kind != FaultKind::GmHardFailure) continue;
        FailoverReport r = failover_report(trace, f);
        nlohmann::json fo;
        fo["first_switch_at_ps"] = r.switch_at.ps;
        fo["latency_ps"] = r.latency.ps;
        fo["discontinuity_ps"] = r.discontinuity.ps;
        fo["gap_ps"] = r.gap.ps;
        j["failover"] = std::move(fo);
        break;
    }
    return j;
}

} // namespace tsnsim
