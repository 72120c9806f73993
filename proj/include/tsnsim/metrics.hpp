#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tsnsim/error.hpp"
#include "tsnsim/faults.hpp"
#include "tsnsim/trace.hpp"

namespace tsnsim {

/// Largest error magnitude a node recorded inside [from, to] (inclusive).
/// Only defined samples count; a window with none is an error, not zero.
inline Duration max_abs_error(const MetricsTrace& trace, NodeId node, SimTime from,
                              SimTime to)
{
    std::optional<Duration> best;
    for (const TimeErrorSample& s : trace.samples) {
        if (s.node != node || !s.defined || s.at < from || s.at > to) continue;
        Duration mag = abs(s.error);
        if (!best || mag > *best) best = mag;
    }
    if (!best)
        throw NoSamplesError("no defined samples for node " + std::to_string(node)
                             + " in the requested window");
    return *best;
}

/// First instant from which the node's error stays at or under the
/// threshold for the rest of the trace. An undefined sample interrupts
/// convergence: a node without a time estimate is not converged.
inline Duration convergence_time(const MetricsTrace& trace, NodeId node,
                                 Duration threshold)
{
    std::vector<const TimeErrorSample*> series;
    for (const TimeErrorSample& s : trace.samples)
        if (s.node == node) series.push_back(&s);
    if (series.empty())
        throw NotConvergedError("node " + std::to_string(node) + " recorded no samples");

    std::size_t start = series.size();
    for (std::size_t i = series.size(); i-- > 0;) {
        if (series[i]->defined && abs(series[i]->error) <= threshold) start = i;
        else break;
    }
    if (start == series.size())
        throw NotConvergedError("node " + std::to_string(node)
                                + " never settles under the threshold");
    if (start == 0) return Duration{0};
    return series[start]->at - SimTime{0};
}

/// Post-fault behavior of the whole receiver population, worst case over
/// nodes. Latency: fault to the last receiver's first source change.
/// Discontinuity: largest projected-time jump across those changes.
/// Gap: longest spell, measured from the fault, that any receiver spent
/// without a live synchronized source.
struct FailoverReport {
    SimTime switch_at{0};
    Duration latency{0};
    Duration discontinuity{0};
    Duration gap{0};
};

inline FailoverReport failover_report(const MetricsTrace& trace, const FaultSpec& fault)
{
    bool applied = std::any_of(
        trace.annotations.begin(), trace.annotations.end(), [&](const Annotation& a) {
            return a.kind == AnnotationKind::FaultApplied && a.at == fault.at
                   && (!fault.node || a.node == *fault.node);
        });
    if (!applied)
        throw ContractError("fault not found in trace");

    FailoverReport report;
    std::vector<NodeId> receivers;
    for (const TimeErrorSample& s : trace.samples) {
        if (fault.node && s.node == *fault.node) continue;
        if (std::find(receivers.begin(), receivers.end(), s.node) == receivers.end())
            receivers.push_back(s.node);
    }

    bool any_switch = false;
    for (NodeId node : receivers) {
        // First source change at or after the fault.
        const SourceChange* first = nullptr;
        for (const SourceChange& c : trace.switches) {
            if (c.node != node || c.at < fault.at) continue;
            if (!first || c.at < first->at) first = &c;
        }
        if (first) {
            any_switch = true;
            if (first->at > report.switch_at) report.switch_at = first->at;
            if (first->discontinuity_defined && first->discontinuity > report.discontinuity)
                report.discontinuity = first->discontinuity;
        }

        // Validity: did this node lose its live source, and when did it
        // next get one back?
        std::optional<SimTime> lost;
        std::optional<SimTime> restored;
        for (const Annotation& a : trace.annotations) {
            if (a.node != node || a.at < fault.at) continue;
            if (a.kind == AnnotationKind::SourceLost && !lost) lost = a.at;
            if (a.kind == AnnotationKind::SourceFresh && !restored) restored = a.at;
        }
        if (lost || restored) {
            Duration gap = (restored ? *restored : trace.end) - fault.at;
            if (gap > report.gap) report.gap = gap;
        }
    }

    report.latency = any_switch ? report.switch_at - fault.at : trace.end - fault.at;
    if (!any_switch) report.switch_at = trace.end;
    return report;
}

/// Per-node summary for reports: min/max signed error, mean signed error,
/// and the 99th percentile of the magnitude (nearest rank).
struct ErrorSummary {
    NodeId node = 0;
    std::size_t count = 0;
    Duration min{0};
    Duration max{0};
    double mean_ps = 0.0;
    Duration p99_abs{0};
};

inline std::vector<ErrorSummary> summarize_errors(const MetricsTrace& trace)
{
    std::vector<NodeId> nodes;
    for (const TimeErrorSample& s : trace.samples)
        if (s.defined && std::find(nodes.begin(), nodes.end(), s.node) == nodes.end())
            nodes.push_back(s.node);
    std::sort(nodes.begin(), nodes.end());

    std::vector<ErrorSummary> out;
    for (NodeId node : nodes) {
        ErrorSummary sum;
        sum.node = node;
        std::vector<std::int64_t> mags;
        double total = 0.0;
        for (const TimeErrorSample& s : trace.samples) {
            if (s.node != node || !s.defined) continue;
            if (sum.count == 0 || s.error < sum.min) sum.min = s.error;
            if (sum.count == 0 || s.error > sum.max) sum.max = s.error;
            total += static_cast<double>(s.error.ps);
            mags.push_back(abs(s.error).ps);
            ++sum.count;
        }
        sum.mean_ps = total / static_cast<double>(sum.count);
        std::sort(mags.begin(), mags.end());
        std::size_t rank = (mags.size() * 99 + 99) / 100; // ceil(n * 0.99)
        sum.p99_abs = Duration{mags[std::min(rank, mags.size()) - 1]};
        out.push_back(sum);
    }
    return out;
}

/// Render defined samples as CSV, ordered by node then time (stable), so
/// equal runs produce byte-equal files.
inline std::string write_csv(const MetricsTrace& trace)
{
    std::vector<const TimeErrorSample*> rows;
    for (const TimeErrorSample& s : trace.samples)
        if (s.defined) rows.push_back(&s);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const TimeErrorSample* a, const TimeErrorSample* b) {
                         if (a->node != b->node) return a->node < b->node;
                         return a->at < b->at;
                     });
    std::string out = "node,at_ps,domain,error_ps\n";
    for (const TimeErrorSample* s : rows) {
        out += std::to_string(s->node);
        out += ',';
        out += std::to_string(s->at.ps);
        out += ',';
        out += std::to_string(s->domain);
        out += ',';
        out += std::to_string(s->error.ps);
        out += '\n';
    }
    return out;
}

} // namespace tsnsim
