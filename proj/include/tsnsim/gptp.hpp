#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tsnsim/clock.hpp"
#include "tsnsim/error.hpp"
#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"
#include "tsnsim/topology.hpp"

namespace tsnsim {

// Two-step sync distribution: Sync carries only identity and sequence;
// the matching Follow_Up carries the precise origin timestamp and the
// correction accumulated hop by hop. Election runs on announces compared
// as priority vectors.

struct GptpParams {
    Duration sync_interval{125000000000};   // 125 ms
    Duration announce_interval{1000000000000}; // 1 s
    int announce_timeout_intervals = 3;
    int sync_receipt_timeout_intervals = 3;
    Duration pdelay_interval{1000000000000}; // 1 s
    Duration pdelay_turnaround{1000000};     // 1 us responder turnaround
    bool rate_ratio_estimation = true;
};

struct AnnounceDataset {
    DomainId domain = 0;
    std::uint8_t priority1 = 128;
    std::uint8_t clock_class = 248;
    std::uint8_t clock_accuracy = 0xFE;
    std::uint16_t variance = 0xFFFF;
    std::uint8_t priority2 = 128;
    ClockIdentity clock_identity = 0;
    std::uint16_t steps_removed = 0;

    friend bool operator==(const AnnounceDataset&, const AnnounceDataset&) = default;
};

enum class Comparison { ABetter, BBetter, Same };

/// Lexicographic priority-vector comparison; lower field values win.
/// Total order over datasets of one domain; Same occurs only when every
/// field matches, which implies equal clock identity.
inline Comparison bmca_compare(const AnnounceDataset& a, const AnnounceDataset& b)
{
    if (a.domain != b.domain)
        throw ContractError("announce comparison across domains");
    auto cmp = [](auto x, auto y) {
        return x < y ? Comparison::ABetter : (y < x ? Comparison::BBetter : Comparison::Same);
    };
    for (Comparison c : {cmp(a.priority1, b.priority1),
                         cmp(a.clock_class, b.clock_class),
                         cmp(a.clock_accuracy, b.clock_accuracy),
                         cmp(a.variance, b.variance),
                         cmp(a.priority2, b.priority2),
                         cmp(a.clock_identity, b.clock_identity),
                         cmp(a.steps_removed, b.steps_removed)}) {
        if (c != Comparison::Same) return c;
    }
    return Comparison::Same;
}

enum class PortRole { TimeTransmitter, TimeReceiver, Passive, Disabled };

inline const char* to_string(PortRole r)
{
    switch (r) {
    case PortRole::TimeTransmitter: return "time_transmitter";
    case PortRole::TimeReceiver: return "time_receiver";
    case PortRole::Passive: return "passive";
    case PortRole::Disabled: return "disabled";
    }
    return "?";
}

struct BmcaResult {
    std::vector<PortRole> roles;
    std::optional<ClockIdentity> gm;       // elected grandmaster, if any
    std::optional<AnnounceDataset> best;   // the winning dataset as heard
    bool self_is_gm = false;
    std::optional<std::size_t> receiver_port;

    friend bool operator==(const BmcaResult&, const BmcaResult&) = default;
};

/// Decide the local election from the node's own candidacy (if any) and
/// the best announce currently held per port. The best dataset overall
/// wins; ties between ports resolve to the lowest port index. A port
/// whose announce beats what this node would re-announce goes Passive,
/// which keeps redundant paths quiet without dropping them.
inline BmcaResult run_bmca(const std::optional<AnnounceDataset>& own,
                           const std::vector<std::optional<AnnounceDataset>>& per_port)
{
    BmcaResult r;
    r.roles.assign(per_port.size(), PortRole::Disabled);

    std::optional<AnnounceDataset> best = own;
    std::optional<std::size_t> best_port;
    for (std::size_t i = 0; i < per_port.size(); ++i) {
        if (!per_port[i]) continue;
        if (own && per_port[i]->domain != own->domain)
            throw ContractError("announce comparison across domains");
        if (!best || bmca_compare(*per_port[i], *best) == Comparison::ABetter) {
            best = per_port[i];
            best_port = i;
        }
    }
    if (!best) return r; // no candidates anywhere: no grandmaster

    r.best = best;
    r.gm = best->clock_identity;

    if (!best_port) {
        // Own dataset beat every port: this node is the grandmaster.
        r.self_is_gm = true;
        for (auto& role : r.roles) role = PortRole::TimeTransmitter;
        return r;
    }

    r.receiver_port = best_port;
    AnnounceDataset retransmit = *best;
    retransmit.steps_removed += 1;
    for (std::size_t i = 0; i < per_port.size(); ++i) {
        if (i == *best_port) {
            r.roles[i] = PortRole::TimeReceiver;
        } else if (per_port[i]
                   && bmca_compare(*per_port[i], retransmit) == Comparison::ABetter) {
            r.roles[i] = PortRole::Passive;
        } else {
            r.roles[i] = PortRole::TimeTransmitter;
        }
    }
    return r;
}

/// Timing content of a Sync/Follow_Up pair in flight.
struct SyncEvent {
    DomainId domain = 0;
    ClockIdentity gm_identity = 0;
    std::uint64_t seq = 0;
    SimTime precise_origin{0}; // grandmaster egress timestamp
    Duration correction{0};    // accumulated residence and link delays, in GM time
    double rate_ratio = 1.0;   // GM frequency over the current holder's frequency

    friend bool operator==(const SyncEvent&, const SyncEvent&) = default;
};

/// Relay a sync across a bridge. The bridge's residence (egress minus
/// ingress, both on its own clock) and the upstream link delay are folded
/// into the correction after converting them to GM time with the updated
/// rate ratio. Origin and sequence pass through untouched.
inline SyncEvent forward_sync(const SyncEvent& sync, SimTime ingress_local,
                              SimTime egress_local, double neighbor_rate_ratio,
                              Duration link_delay)
{
    if (egress_local < ingress_local)
        throw ContractError("sync egress precedes ingress");
    SyncEvent out = sync;
    out.rate_ratio = sync.rate_ratio * neighbor_rate_ratio;
    out.correction += scale_round(egress_local - ingress_local, out.rate_ratio)
                      + scale_round(link_delay, out.rate_ratio);
    return out;
}

/// A receiver's knowledge of one domain's grandmaster. Offset is local
/// minus GM time at the last accepted sync; last_update is in the
/// receiver's local timebase.
struct GmEstimate {
    DomainId domain = 0;
    Duration offset{0};
    double rate_ratio = 1.0; // GM frequency over local frequency
    SimTime last_update{0};
};

/// Absorb a matched Sync/Follow_Up at the final receiver. GM time at the
/// ingress instant is origin + correction + last-hop path delay.
inline GmEstimate receive_sync(const SyncEvent& sync, SimTime ingress_local,
                               Duration path_delay)
{
    SimTime gm_at_ingress = sync.precise_origin + sync.correction + path_delay;
    return GmEstimate{sync.domain, ingress_local - gm_at_ingress, sync.rate_ratio,
                      ingress_local};
}

/// GM-vs-local frequency ratio from two consecutive sync arrivals: the
/// span of origin timestamps over the span of local ingress timestamps.
inline double estimate_rate_ratio(SimTime prev_origin, SimTime prev_ingress,
                                  SimTime curr_origin, SimTime curr_ingress)
{
    Duration local_span = curr_ingress - prev_ingress;
    if (local_span.ps <= 0)
        throw ContractError("rate ratio estimation over an empty local interval");
    return static_cast<double>((curr_origin - prev_origin).ps)
           / static_cast<double>(local_span.ps);
}

/// Combine the four exchange timestamps into a mean path delay.
inline Duration compute_pdelay(SimTime t1, SimTime t2, SimTime t3, SimTime t4)
{
    Duration v = (t4 - t1) - (t3 - t2);
    return Duration{floor_div(v.ps, 2)};
}

/// One peer-delay exchange across `link`, started by the requester at
/// true time `when`. Both directions traverse once; quantization of the
/// four stamps bounds the result within one granularity step of the true
/// mean delay.
inline Duration measure_pdelay(const Link& link, LocalClock& requester,
                               LocalClock& responder, bool requester_is_a,
                               SimTime when, Duration turnaround)
{
    Duration d_fwd = requester_is_a ? link.delay_a_to_b() : link.delay_b_to_a();
    Duration d_back = requester_is_a ? link.delay_b_to_a() : link.delay_a_to_b();
    SimTime t1 = requester.timestamp(when);
    SimTime t2 = responder.timestamp(when + d_fwd);
    SimTime t3 = responder.timestamp(when + d_fwd + turnaround);
    SimTime t4 = requester.timestamp(when + d_fwd + turnaround + d_back);
    return compute_pdelay(t1, t2, t3, t4);
}

} // namespace tsnsim
