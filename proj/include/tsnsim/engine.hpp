#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "tsnsim/clock.hpp"
#include "tsnsim/event_queue.hpp"
#include "tsnsim/faults.hpp"
#include "tsnsim/fiveg.hpp"
#include "tsnsim/gptp.hpp"
#include "tsnsim/hot_standby.hpp"
#include "tsnsim/rng.hpp"
#include "tsnsim/scenario.hpp"
#include "tsnsim/topology.hpp"
#include "tsnsim/trace.hpp"

namespace tsnsim {

// The simulation is a single event loop over true time. Every message is
// an event; every timestamp is taken when its event pops, so clock reads
// move strictly forward. Ties in time resolve by scheduling order, which
// makes a whole run a pure function of (scenario, seed).
//
// Conventions the engine commits to:
//  - A sync and its follow-up travel as a pair under one flight id; the
//    pair is processed when the follow-up arrives.
//  - Syncs are consumed only on the time-receiver port of their domain.
//  - The upstream link delay is folded into the correction at the bridge
//    that received it; the final receiver adds only its last hop.
//  - With rate-ratio estimation off, every ratio in play is pinned to 1.
//  - Announces carry no timestamps, so they relay without residence: a
//    plain bridge forwards instantly, a 5GS after its nominal transit.
//  - Under hot standby the domains are statically rooted: only the
//    assigned grandmaster of each domain announces in it.

namespace engine_detail {

struct EvFault { std::size_t index; };
struct EvWanderTick {};
struct EvMetricTick {};
struct EvAnnounceTick { NodeId node; DomainId domain; };
struct EvAnnounceRx { NodeId node; std::size_t port; AnnounceDataset ds; };
struct EvAnnounceExpiry { NodeId node; std::size_t port; DomainId domain; std::uint64_t gen; };
struct EvSyncTick { NodeId node; DomainId domain; std::uint64_t gen; };
struct EvSyncRx { NodeId node; std::size_t port; SyncEvent sync; std::uint64_t flight; };
struct EvFollowUpRx { NodeId node; std::size_t port; SyncEvent sync; std::uint64_t flight; };
struct EvBridgeEgress { NodeId node; std::uint64_t flight; };
struct EvFivegEgress { NodeId node; std::uint64_t flight; };

/// One peer-delay exchange in flight; stamps fill in stage by stage.
/// The radio-interface error of a DS-TT port is drawn once per exchange
/// and applied to both of that side's stamps, so it cancels in t3 - t2.
struct PdFlight {
    NodeId requester = 0;
    std::size_t req_port = 0;
    NodeId responder = 0;
    std::size_t resp_port = 0;
    std::size_t link = 0;
    SimTime t1{0};
    SimTime t2{0};
    SimTime t3{0};
    Duration req_ue{0};
    Duration resp_ue{0};
};

struct EvPdelayTick { NodeId node; std::size_t port; };
struct EvPdelayT2 { PdFlight f; };
struct EvPdelayT3 { PdFlight f; };
struct EvPdelayT4 { PdFlight f; };

using Ev = std::variant<EvFault, EvWanderTick, EvMetricTick, EvAnnounceTick, EvAnnounceRx,
                        EvAnnounceExpiry, EvSyncTick, EvSyncRx, EvFollowUpRx,
                        EvBridgeEgress, EvFivegEgress, EvPdelayTick, EvPdelayT2,
                        EvPdelayT3, EvPdelayT4>;

} // namespace engine_detail

class Simulation {
public:
    explicit Simulation(Scenario scenario)
        : scn_(std::move(scenario)), topo_(validate_scenario(scn_))
    {
        metric_interval_ = scn_.metric_interval.value_or(scn_.gptp.sync_interval);
        if (scn_.hot_standby)
            domains_ = {scn_.hot_standby->primary_domain, scn_.hot_standby->standby_domain};
        else
            domains_ = {0};

        for (const NodeSpec& n : topo_.nodes()) {
            clocks_.emplace(n.id,
                            LocalClock(n.clock, derive_seed(scn_.seed, n.id,
                                                            StreamPurpose::ClockNoise)));
            if (n.fiveg)
                fiveg_.emplace(n.id, FivegBridgeState(
                                         *n.fiveg,
                                         derive_seed(scn_.seed, n.id, StreamPurpose::UeSyncError),
                                         derive_seed(scn_.seed, n.id,
                                                     StreamPurpose::TransitJitter)));
            if (n.clock.wander_sigma_ppm > 0.0) wander_on_ = true;

            NodeRt& nr = nodes_[n.id];
            nr.spec = &n;
            for (const PortRef& p : topo_.neighbors(n.id)) {
                PortRt pr;
                pr.ref = p;
                if (n.fiveg)
                    pr.ds_tt = std::find(n.fiveg->ds_tt_peers.begin(),
                                         n.fiveg->ds_tt_peers.end(),
                                         p.peer) != n.fiveg->ds_tt_peers.end();
                nr.ports.push_back(pr);
                port_index_[{n.id, p.peer}] = nr.ports.size() - 1;
            }
            for (DomainId d : domains_) {
                DomainRt& dr = nr.dom[d];
                dr.heard.assign(nr.ports.size(), std::nullopt);
                dr.heard_at.assign(nr.ports.size(), SimTime{0});
                dr.heard_gen.assign(nr.ports.size(), 0);
                dr.election = run_bmca(contender(n.id, d), dr.heard);
            }
            if (scn_.hot_standby) nr.sel.active = scn_.hot_standby->primary_domain;
            identity_node_[n.announce.identity] = n.id;
        }
    }

    /// Execute the configured duration and hand back the trace. Runs once.
    MetricsTrace run()
    {
        using namespace engine_detail;
        if (ran_) throw ContractError("simulation already ran");
        ran_ = true;

        for (std::size_t i = 0; i < scn_.faults.size(); ++i)
            q_.schedule(scn_.faults[i].at, EvFault{i});
        for (const NodeSpec& n : topo_.nodes())
            for (std::size_t p = 0; p < nodes_[n.id].ports.size(); ++p)
                q_.schedule(SimTime{0}, EvPdelayTick{n.id, p});
        for (const NodeSpec& n : topo_.nodes()) {
            for (DomainId d : domains_) {
                if (contender(n.id, d))
                    q_.schedule(SimTime{0}, EvAnnounceTick{n.id, d});
                DomainRt& dr = nodes_[n.id].dom[d];
                if (dr.election.self_is_gm)
                    q_.schedule(at(scn_.gptp.sync_interval), EvSyncTick{n.id, d, dr.sync_gen});
            }
        }
        if (wander_on_) q_.schedule(at(scn_.wander_interval), EvWanderTick{});
        q_.schedule(at(metric_interval_), EvMetricTick{});

        SimTime end = at(scn_.duration);
        while (auto ev = q_.pop()) {
            if (ev->at > end) break;
            std::visit([this](auto& e) { this->handle(e); }, ev->payload);
        }
        trace_.end = end;
        return std::move(trace_);
    }

    const Scenario& scenario() const { return scn_; }
    const Topology& topology() const { return topo_; }

    /// Elected grandmaster identity as node `id` currently sees domain `d`.
    std::optional<ClockIdentity> elected_gm(NodeId id, DomainId d) const
    {
        auto nit = nodes_.find(id);
        if (nit == nodes_.end()) throw ContractError("unknown node id");
        auto dit = nit->second.dom.find(d);
        if (dit == nit->second.dom.end()) return std::nullopt;
        return dit->second.election.gm;
    }

private:
    struct PortRt {
        PortRef ref{0, 0};
        bool ds_tt = false;
        std::optional<Duration> link_delay;
        std::optional<std::pair<SimTime, SimTime>> prev_t3t4;
        double nrr = 1.0;
    };

    struct DomainRt {
        std::vector<std::optional<AnnounceDataset>> heard;
        std::vector<SimTime> heard_at;
        std::vector<std::uint64_t> heard_gen;
        BmcaResult election;
        std::optional<GmEstimate> est;
        ClockIdentity est_gm = 0;
        // One (origin, ingress) anchor per accepted sync, newest last. The
        // rate ratio is measured across the whole window, so a phase step
        // that passes the residual check tilts it by step/window rather
        // than step/interval.
        std::deque<std::pair<SimTime, SimTime>> anchors;
        static constexpr std::size_t kRateAnchors = 8;
        int accepted = 0; // syncs absorbed from the current grandmaster
        DomainHealth health;
        std::uint64_t sync_gen = 0;  // invalidates queued sync ticks
        std::uint64_t sync_seq = 0;  // emission sequence when grandmaster
    };

    struct PendingSync {
        SyncEvent sync;
        std::size_t port = 0;
        SimTime ingress_local{0};
        SimTime ingress_true{0};
        std::optional<TTStamp> tsi;
    };

    struct NodeRt {
        const NodeSpec* spec = nullptr;
        std::vector<PortRt> ports;
        std::map<DomainId, DomainRt> dom;
        SelectorState sel;
        SourceState src_state = SourceState::None;
        int switch_count = 0;
        std::map<std::uint64_t, PendingSync> pending;
    };

    // Structural helpers.

    NodeRt& rt(NodeId id) { return nodes_.at(id); }
    LocalClock& clock(NodeId id) { return clocks_.at(id); }
    bool alive(NodeId id) const { return dead_.count(id) == 0; }
    DomainId active_domain(const NodeRt& nr) const
    {
        return scn_.hot_standby ? nr.sel.active : DomainId{0};
    }

    Duration announce_timeout() const
    {
        return scn_.gptp.announce_interval
               * static_cast<std::int64_t>(scn_.gptp.announce_timeout_intervals);
    }

    Duration receipt_window() const
    {
        return scn_.gptp.sync_interval
               * static_cast<std::int64_t>(scn_.gptp.sync_receipt_timeout_intervals);
    }

    Duration wire_delay(std::size_t link_index, NodeId sender) const
    {
        return topo_.links()[link_index].delay_from(sender);
    }

    /// Delay an announce suffers crossing this node's fabric.
    Duration announce_fabric_delay(NodeId id) const
    {
        const NodeSpec& n = topo_.node(id);
        return n.fiveg ? n.fiveg->transit : Duration{0};
    }

    std::optional<AnnounceDataset> contender(NodeId id, DomainId d) const
    {
        const NodeSpec& n = topo_.node(id);
        bool contends;
        if (scn_.hot_standby) {
            const HotStandbyConfig& hs = *scn_.hot_standby;
            contends = (id == hs.primary_gm && d == hs.primary_domain)
                       || (id == hs.standby_gm && d == hs.standby_domain);
        } else {
            contends = n.gm_capable && d == 0;
        }
        if (!contends) return std::nullopt;
        return AnnounceDataset{d, n.announce.priority1, n.announce.clock_class,
                               n.announce.clock_accuracy, n.announce.variance,
                               n.announce.priority2, n.announce.identity, 0};
    }

    void annotate(SimTime at, NodeId node, AnnotationKind kind, std::int64_t value = 0)
    {
        trace_.annotations.push_back({at, node, kind, value});
    }

    // Announce distribution and elections.

    void send_own_announce(NodeId id, DomainId d)
    {
        auto own = contender(id, d);
        if (!own) return;
        NodeRt& nr = rt(id);
        for (const PortRt& p : nr.ports) {
            std::size_t peer_port = port_index_.at({p.ref.peer, id});
            q_.schedule(q_.now() + wire_delay(p.ref.link_index, id),
                        engine_detail::EvAnnounceRx{p.ref.peer, peer_port, *own});
        }
    }

    void relay_best_announce(NodeId id, DomainId d)
    {
        NodeRt& nr = rt(id);
        DomainRt& dr = nr.dom.at(d);
        if (dr.election.self_is_gm || !dr.election.best) return;
        AnnounceDataset ds = *dr.election.best;
        ds.steps_removed += 1;
        Duration fabric = announce_fabric_delay(id);
        for (std::size_t i = 0; i < nr.ports.size(); ++i) {
            if (dr.election.roles[i] != PortRole::TimeTransmitter) continue;
            const PortRt& p = nr.ports[i];
            std::size_t peer_port = port_index_.at({p.ref.peer, id});
            q_.schedule(q_.now() + fabric + wire_delay(p.ref.link_index, id),
                        engine_detail::EvAnnounceRx{p.ref.peer, peer_port, ds});
        }
    }

    /// Recompute the election; on change, restart sync origination and
    /// flood the new best downstream immediately so the network settles
    /// at announce-propagation speed, not announce-interval speed.
    void run_election(NodeId id, DomainId d, std::optional<std::size_t> refreshed_port)
    {
        NodeRt& nr = rt(id);
        DomainRt& dr = nr.dom.at(d);
        BmcaResult fresh = run_bmca(contender(id, d), dr.heard);
        if (fresh == dr.election) {
            if (refreshed_port && dr.election.receiver_port == *refreshed_port)
                relay_best_announce(id, d);
            return;
        }
        BmcaResult old = std::exchange(dr.election, std::move(fresh));

        if (dr.election.self_is_gm && !old.self_is_gm) {
            ++dr.sync_gen;
            SimTime first = std::max(at(scn_.gptp.sync_interval), q_.now());
            q_.schedule(first, engine_detail::EvSyncTick{id, d, dr.sync_gen});
        } else if (!dr.election.self_is_gm && old.self_is_gm) {
            ++dr.sync_gen;
        }

        if (dr.election.self_is_gm)
            send_own_announce(id, d);
        else
            relay_best_announce(id, d);

        // A node that elects itself becomes its own time source on the
        // spot; receivers change source only when a sync from the new
        // grandmaster is accepted.
        if (!scn_.hot_standby && dr.election.self_is_gm && !old.self_is_gm) {
            SimTime local = clock(id).timestamp(q_.now());
            SourceChange c;
            c.node = id;
            c.at = q_.now();
            c.from_domain = d;
            c.to_domain = d;
            c.from_gm = dr.est_gm;
            c.to_gm = topo_.node(id).announce.identity;
            if (dr.est) {
                c.discontinuity_defined = true;
                c.discontinuity = abs(local - project_gm_time(*dr.est, local));
            }
            c.switch_count = ++nr.switch_count;
            trace_.switches.push_back(c);
            update_source_state(id, local, q_.now());
        }
    }

    // Sync origination and relay.

    void send_pair(NodeId id, const PortRt& port, const SyncEvent& sync)
    {
        std::size_t peer_port = port_index_.at({port.ref.peer, id});
        SimTime arrive = q_.now() + wire_delay(port.ref.link_index, id);
        std::uint64_t flight = next_flight_++;
        q_.schedule(arrive, engine_detail::EvSyncRx{port.ref.peer, peer_port, sync, flight});
        q_.schedule(arrive,
                    engine_detail::EvFollowUpRx{port.ref.peer, peer_port, sync, flight});
    }

    void emit_sync(NodeId id, DomainId d)
    {
        NodeRt& nr = rt(id);
        DomainRt& dr = nr.dom.at(d);
        const HotStandbyConfig* hs =
            scn_.hot_standby ? &*scn_.hot_standby : nullptr;
        bool projecting = hs && id == hs->standby_gm && d == hs->standby_domain;
        const GmEstimate* upstream = nullptr;
        if (projecting) {
            DomainRt& d0 = nr.dom.at(hs->primary_domain);
            if (!gate_open_ || !d0.est) return;
            upstream = &*d0.est;
        }

        SyncEvent sync;
        sync.domain = d;
        sync.gm_identity = topo_.node(id).announce.identity;
        sync.seq = dr.sync_seq++;
        for (std::size_t i = 0; i < nr.ports.size(); ++i) {
            if (dr.election.roles[i] != PortRole::TimeTransmitter) continue;
            SimTime eg = clock(id).timestamp(q_.now());
            if (projecting) {
                // The standby transmits its running estimate of primary
                // time, which freezes into holdover if the primary dies.
                sync.precise_origin = project_gm_time(*upstream, eg);
                sync.rate_ratio = upstream->rate_ratio;
            } else {
                sync.precise_origin = eg;
                sync.rate_ratio = 1.0;
            }
            sync.correction = Duration{0};
            send_pair(id, nr.ports[i], sync);
        }
    }

    /// Absorb a completed sync pair into this node's own receiver state.
    void finish_receive(NodeId id, const SyncEvent& sync, SimTime ingress_local,
                        std::size_t port)
    {
        NodeRt& nr = rt(id);
        DomainRt& dr = nr.dom.at(sync.domain);
        Duration path_delay = nr.ports[port].link_delay.value_or(Duration{0});
        GmEstimate fresh = receive_sync(sync, ingress_local, path_delay);

        bool have_prev = dr.est.has_value();
        // Origin deltas only measure a ratio within one timescale: a sync
        // from a different grandmaster restarts the estimator.
        if (have_prev && dr.est_gm != sync.gm_identity) {
            dr.anchors.clear();
            dr.accepted = 0;
        }

        // The residual check arms once the held estimate carries a measured
        // rate ratio. Before that, predicting across a sync interval folds
        // the receiver's own drift into the residual, and an honest clock
        // a few ppm off would read as a grandmaster fault.
        bool armed = have_prev && dr.accepted >= 2;
        Duration residual{0};
        if (armed) {
            SimTime measured = ingress_local - fresh.offset;
            residual = measured - project_gm_time(*dr.est, ingress_local);
        }

        if (scn_.hot_standby) {
            dr.health.domain = sync.domain;
            dr.health.last_offset = residual;
            dr.health.last_update = ingress_local;
            dr.health.has_update = true;
            if (armed && abs(residual) > scn_.hot_standby->offset_threshold) {
                // The domain moved under us. Keep the old timescale and
                // let the selector abandon the domain.
                annotate(q_.now(), id, AnnotationKind::SyncRejected, residual.ps);
                return;
            }
        }
        if (!scn_.gptp.rate_ratio_estimation)
            fresh.rate_ratio = 1.0;
        else if (!dr.anchors.empty() && ingress_local > dr.anchors.front().second)
            fresh.rate_ratio = estimate_rate_ratio(dr.anchors.front().first,
                                                   dr.anchors.front().second,
                                                   sync.precise_origin, ingress_local);
        dr.anchors.emplace_back(sync.precise_origin, ingress_local);
        if (dr.anchors.size() > DomainRt::kRateAnchors)
            dr.anchors.pop_front();

        if (have_prev && dr.est_gm != sync.gm_identity
            && sync.domain == active_domain(nr)) {
            SourceChange c;
            c.node = id;
            c.at = q_.now();
            c.from_domain = sync.domain;
            c.to_domain = sync.domain;
            c.from_gm = dr.est_gm;
            c.to_gm = sync.gm_identity;
            c.discontinuity_defined = true;
            c.discontinuity =
                abs((ingress_local - fresh.offset) - project_gm_time(*dr.est, ingress_local));
            c.switch_count = ++nr.switch_count;
            trace_.switches.push_back(c);
        }

        dr.est = fresh;
        dr.est_gm = sync.gm_identity;
        ++dr.accepted;
        update_source_state(id, ingress_local, q_.now());

        const HotStandbyConfig* hs = scn_.hot_standby ? &*scn_.hot_standby : nullptr;
        if (hs && id == hs->standby_gm && sync.domain == hs->primary_domain
            && !gate_open_) {
            Duration gate_offset = residual;
            if (standby_gate(gate_offset, *hs) == GateDecision::Transmit) {
                gate_open_ = true;
                annotate(q_.now(), id, AnnotationKind::StandbyGateOpened, gate_offset.ps);
            }
        }
    }

    // Metrics.

    void update_source_state(NodeId id, SimTime local_now, SimTime true_now)
    {
        NodeRt& nr = rt(id);
        if (nr.spec->static_role) return;
        DomainId d = active_domain(nr);
        DomainRt& dr = nr.dom.at(d);
        SourceState cur;
        if (dr.election.self_is_gm) {
            cur = SourceState::Fresh;
        } else if (!dr.est) {
            cur = SourceState::None;
        } else {
            Duration window = scn_.hot_standby ? scn_.hot_standby->staleness : receipt_window();
            cur = (local_now - dr.est->last_update <= window) ? SourceState::Fresh
                                                              : SourceState::Holdover;
        }
        if (cur != nr.src_state) {
            if (cur == SourceState::Fresh)
                annotate(true_now, id, AnnotationKind::SourceFresh);
            else if (nr.src_state == SourceState::Fresh)
                annotate(true_now, id, AnnotationKind::SourceLost);
            nr.src_state = cur;
        }
    }

    /// The true timescale of the domain's source: a grandmaster's
    /// noise-free phase, or for the hot-standby domain the standby's
    /// projection of primary time, which is exactly what it transmits.
    SimTime reference_time(NodeId id, DomainId d, const DomainRt& dr, SimTime t) const
    {
        if (scn_.hot_standby) {
            const HotStandbyConfig& hs = *scn_.hot_standby;
            if (d == hs.standby_domain) {
                const NodeRt& standby = nodes_.at(hs.standby_gm);
                const DomainRt& sd0 = standby.dom.at(hs.primary_domain);
                SimTime standby_phase = clocks_.at(hs.standby_gm).phase(t);
                if (sd0.est) return project_gm_time(*sd0.est, standby_phase);
                return standby_phase;
            }
            return clocks_.at(hs.primary_gm).phase(t);
        }
        if (dr.election.self_is_gm) return clocks_.at(id).phase(t);
        ClockIdentity believed;
        if (dr.est)
            believed = dr.est_gm;
        else if (dr.election.gm)
            believed = *dr.election.gm;
        else
            throw ContractError("reference requested with no believed grandmaster");
        return clocks_.at(identity_node_.at(believed)).phase(t);
    }

    void sample_node(const NodeSpec& spec, SimTime t)
    {
        if (spec.static_role) return;
        NodeRt& nr = rt(spec.id);
        if (!alive(spec.id)) {
            trace_.samples.push_back({spec.id, t, active_domain(nr), Duration{0}, false,
                                      nr.src_state, SampleKind::Periodic});
            return;
        }
        SimTime local = clock(spec.id).timestamp(t);
        SampleKind kind = SampleKind::Periodic;

        if (scn_.hot_standby) {
            const HotStandbyConfig& hs = *scn_.hot_standby;
            SelectorState before = nr.sel;
            nr.sel = select_domain(nr.dom.at(hs.primary_domain).health,
                                   nr.dom.at(hs.standby_domain).health, nr.sel, hs, local);
            if (nr.sel.active != before.active) {
                kind = SampleKind::AtSwitch;
                DomainRt& from_dr = nr.dom.at(before.active);
                DomainRt& to_dr = nr.dom.at(nr.sel.active);
                SourceChange c;
                c.node = spec.id;
                c.at = t;
                c.from_domain = before.active;
                c.to_domain = nr.sel.active;
                c.from_gm = from_dr.est_gm;
                c.to_gm = to_dr.est_gm;
                if (from_dr.est && to_dr.est) {
                    c.discontinuity_defined = true;
                    c.discontinuity = abs(project_gm_time(*to_dr.est, local)
                                          - project_gm_time(*from_dr.est, local));
                }
                c.switch_count = ++nr.switch_count;
                trace_.switches.push_back(c);
            }
        }

        update_source_state(spec.id, local, t);
        DomainId d = active_domain(nr);
        DomainRt& dr = nr.dom.at(d);
        if (!dr.election.self_is_gm && !dr.est) {
            trace_.samples.push_back(
                {spec.id, t, d, Duration{0}, false, nr.src_state, kind});
            return;
        }
        SimTime projected =
            dr.election.self_is_gm ? local : project_gm_time(*dr.est, local);
        Duration error = projected - reference_time(spec.id, d, dr, t);
        trace_.samples.push_back({spec.id, t, d, error, true, nr.src_state, kind});
    }

    // Event handlers.

    void handle(engine_detail::EvFault& ev)
    {
        FaultSpec& f = scn_.faults[ev.index];
        NodeId target = *f.node;
        annotate(q_.now(), target, AnnotationKind::FaultApplied,
                 f.kind == FaultKind::PhaseGlitch ? f.magnitude.ps : 0);
        switch (f.kind) {
        case FaultKind::GmHardFailure:
            dead_.insert(target);
            break;
        case FaultKind::PhaseGlitch:
            clock(target).inject_glitch({q_.now(), f.magnitude});
            break;
        case FaultKind::ServiceToggle:
            fiveg_.at(target).set_service(f.active);
            annotate(q_.now(), target, AnnotationKind::ServiceToggled, f.active ? 1 : 0);
            break;
        }
    }

    void handle(engine_detail::EvWanderTick&)
    {
        for (auto& [id, c] : clocks_) c.advance_wander(scn_.wander_interval);
        q_.schedule(q_.now() + scn_.wander_interval, engine_detail::EvWanderTick{});
    }

    void handle(engine_detail::EvMetricTick&)
    {
        for (const NodeSpec& n : topo_.nodes()) sample_node(n, q_.now());
        q_.schedule(q_.now() + metric_interval_, engine_detail::EvMetricTick{});
    }

    void handle(engine_detail::EvAnnounceTick& ev)
    {
        if (!alive(ev.node)) return;
        q_.schedule(q_.now() + scn_.gptp.announce_interval,
                    engine_detail::EvAnnounceTick{ev.node, ev.domain});
        if (rt(ev.node).dom.at(ev.domain).election.self_is_gm)
            send_own_announce(ev.node, ev.domain);
    }

    void handle(engine_detail::EvAnnounceRx& ev)
    {
        if (!alive(ev.node)) return;
        NodeRt& nr = rt(ev.node);
        auto dit = nr.dom.find(ev.ds.domain);
        if (dit == nr.dom.end()) return;
        DomainRt& dr = dit->second;
        dr.heard[ev.port] = ev.ds;
        dr.heard_at[ev.port] = q_.now();
        std::uint64_t gen = ++dr.heard_gen[ev.port];
        q_.schedule(q_.now() + announce_timeout(),
                    engine_detail::EvAnnounceExpiry{ev.node, ev.port, ev.ds.domain, gen});
        run_election(ev.node, ev.ds.domain, ev.port);
    }

    void handle(engine_detail::EvAnnounceExpiry& ev)
    {
        if (!alive(ev.node)) return;
        DomainRt& dr = rt(ev.node).dom.at(ev.domain);
        if (dr.heard_gen[ev.port] != ev.gen || !dr.heard[ev.port]) return;
        if (q_.now() - dr.heard_at[ev.port] < announce_timeout()) return;
        dr.heard[ev.port].reset();
        run_election(ev.node, ev.domain, std::nullopt);
    }

    void handle(engine_detail::EvSyncTick& ev)
    {
        if (!alive(ev.node)) return;
        DomainRt& dr = rt(ev.node).dom.at(ev.domain);
        if (ev.gen != dr.sync_gen) return;
        q_.schedule(q_.now() + scn_.gptp.sync_interval,
                    engine_detail::EvSyncTick{ev.node, ev.domain, ev.gen});
        if (!dr.election.self_is_gm) return;
        emit_sync(ev.node, ev.domain);
    }

    void handle(engine_detail::EvSyncRx& ev)
    {
        if (!alive(ev.node)) return;
        NodeRt& nr = rt(ev.node);
        auto dit = nr.dom.find(ev.sync.domain);
        if (dit == nr.dom.end()) return;
        if (dit->second.election.roles[ev.port] != PortRole::TimeReceiver) return;

        PendingSync p;
        p.sync = ev.sync;
        p.port = ev.port;
        p.ingress_true = q_.now();
        if (auto fit = fiveg_.find(ev.node); fit != fiveg_.end()) {
            bool ds_side = fit->second.config().direction == FivegDirection::Uplink;
            p.tsi = fit->second.ingress_stamp(clock(ev.node), ev.flight, q_.now(), ds_side);
            p.ingress_local = p.tsi ? p.tsi->value : clock(ev.node).timestamp(q_.now());
        } else {
            p.ingress_local = clock(ev.node).timestamp(q_.now());
        }
        nr.pending[ev.flight] = p;
    }

    void handle(engine_detail::EvFollowUpRx& ev)
    {
        if (!alive(ev.node)) return;
        NodeRt& nr = rt(ev.node);
        auto it = nr.pending.find(ev.flight);
        auto dit = nr.dom.find(ev.sync.domain);
        if (dit == nr.dom.end()) return;
        if (dit->second.election.roles[ev.port] != PortRole::TimeReceiver) {
            if (it != nr.pending.end()) nr.pending.erase(it);
            return;
        }
        if (it == nr.pending.end()) {
            annotate(q_.now(), ev.node, AnnotationKind::OrphanFollowUp,
                     static_cast<std::int64_t>(ev.sync.seq));
            return;
        }
        it->second.sync = ev.sync;
        finish_receive(ev.node, ev.sync, it->second.ingress_local, it->second.port);

        const NodeSpec& spec = *nr.spec;
        if (spec.kind == NodeKind::Bridge) {
            q_.schedule(q_.now() + spec.residence,
                        engine_detail::EvBridgeEgress{ev.node, ev.flight});
        } else if (spec.kind == NodeKind::FiveGSBridge) {
            Duration transit = fiveg_.at(ev.node).sample_transit();
            q_.schedule(q_.now() + transit, engine_detail::EvFivegEgress{ev.node, ev.flight});
        } else {
            nr.pending.erase(it);
        }
    }

    void handle(engine_detail::EvBridgeEgress& ev)
    {
        NodeRt& nr = rt(ev.node);
        auto it = nr.pending.find(ev.flight);
        if (it == nr.pending.end()) return;
        PendingSync p = std::move(it->second);
        nr.pending.erase(it);
        if (!alive(ev.node)) return;

        SimTime eg = clock(ev.node).timestamp(q_.now());
        if (eg < p.ingress_local) eg = p.ingress_local; // noise floor: no negative residence
        PortRt& in_port = nr.ports[p.port];
        double nrr = scn_.gptp.rate_ratio_estimation ? in_port.nrr : 1.0;
        SyncEvent out = forward_sync(p.sync, p.ingress_local, eg, nrr,
                                     in_port.link_delay.value_or(Duration{0}));
        forward_to_transmitters(ev.node, p.sync.domain, out);
    }

    void handle(engine_detail::EvFivegEgress& ev)
    {
        NodeRt& nr = rt(ev.node);
        auto it = nr.pending.find(ev.flight);
        if (it == nr.pending.end()) return;
        PendingSync p = std::move(it->second);
        nr.pending.erase(it);
        if (!alive(ev.node)) return;

        FivegBridgeState& st = fiveg_.at(ev.node);
        SyncEvent out;
        if (p.tsi && st.service_active()) {
            bool ds_side = st.config().direction == FivegDirection::Downlink;
            TTStamp tse = st.egress_stamp(clock(ev.node), ev.flight, q_.now(), ds_side);
            if (tse.value < p.tsi->value) tse.value = p.tsi->value;
            double rr = p.sync.rate_ratio
                        * (scn_.gptp.rate_ratio_estimation ? nr.ports[p.port].nrr : 1.0);
            out = st.apply_mode(p.sync, residence_time(*p.tsi, tse), rr, tse);
            if (st.config().mode != FivegMode::BoundaryClock)
                out.correction += scale_round(
                    nr.ports[p.port].link_delay.value_or(Duration{0}), rr);
        } else {
            // Service inactive at one end or the other: the sync crosses
            // the 5GS but nobody accounts for the transit it suffered.
            out = p.sync;
            annotate(q_.now(), ev.node, AnnotationKind::UncorrectedTransit,
                     (q_.now() - p.ingress_true).ps);
        }
        forward_to_transmitters(ev.node, p.sync.domain, out);
    }

    void forward_to_transmitters(NodeId id, DomainId d, const SyncEvent& out)
    {
        NodeRt& nr = rt(id);
        DomainRt& dr = nr.dom.at(d);
        for (std::size_t i = 0; i < nr.ports.size(); ++i)
            if (dr.election.roles[i] == PortRole::TimeTransmitter)
                send_pair(id, nr.ports[i], out);
    }

    // Peer delay.

    void handle(engine_detail::EvPdelayTick& ev)
    {
        if (!alive(ev.node)) return;
        q_.schedule(q_.now() + scn_.gptp.pdelay_interval,
                    engine_detail::EvPdelayTick{ev.node, ev.port});
        NodeRt& nr = rt(ev.node);
        PortRt& pr = nr.ports[ev.port];
        engine_detail::PdFlight f;
        f.requester = ev.node;
        f.req_port = ev.port;
        f.responder = pr.ref.peer;
        f.resp_port = port_index_.at({pr.ref.peer, ev.node});
        f.link = pr.ref.link_index;
        if (pr.ds_tt) f.req_ue = fiveg_.at(ev.node).sample_ue_error();
        f.t1 = clock(ev.node).timestamp(q_.now()) + f.req_ue;
        q_.schedule(q_.now() + wire_delay(f.link, ev.node), engine_detail::EvPdelayT2{f});
    }

    void handle(engine_detail::EvPdelayT2& ev)
    {
        engine_detail::PdFlight& f = ev.f;
        if (!alive(f.responder)) return;
        if (rt(f.responder).ports[f.resp_port].ds_tt)
            f.resp_ue = fiveg_.at(f.responder).sample_ue_error();
        f.t2 = clock(f.responder).timestamp(q_.now()) + f.resp_ue;
        q_.schedule(q_.now() + scn_.gptp.pdelay_turnaround, engine_detail::EvPdelayT3{f});
    }

    void handle(engine_detail::EvPdelayT3& ev)
    {
        engine_detail::PdFlight& f = ev.f;
        if (!alive(f.responder)) return;
        f.t3 = clock(f.responder).timestamp(q_.now()) + f.resp_ue;
        q_.schedule(q_.now() + wire_delay(f.link, f.responder), engine_detail::EvPdelayT4{f});
    }

    void handle(engine_detail::EvPdelayT4& ev)
    {
        const engine_detail::PdFlight& f = ev.f;
        if (!alive(f.requester)) return;
        SimTime t4 = clock(f.requester).timestamp(q_.now()) + f.req_ue;
        PortRt& pr = rt(f.requester).ports[f.req_port];
        pr.link_delay = compute_pdelay(f.t1, f.t2, f.t3, t4);
        if (pr.prev_t3t4) {
            Duration resp_span = f.t3 - pr.prev_t3t4->first;
            Duration req_span = t4 - pr.prev_t3t4->second;
            if (req_span.ps > 0)
                pr.nrr = static_cast<double>(resp_span.ps)
                         / static_cast<double>(req_span.ps);
        }
        pr.prev_t3t4 = {f.t3, t4};
    }

    Scenario scn_;
    Topology topo_;
    Duration metric_interval_{0};
    std::vector<DomainId> domains_;
    std::map<NodeId, LocalClock> clocks_;
    std::map<NodeId, FivegBridgeState> fiveg_;
    std::map<NodeId, NodeRt> nodes_;
    std::map<std::pair<NodeId, NodeId>, std::size_t> port_index_;
    std::map<ClockIdentity, NodeId> identity_node_;
    std::set<NodeId> dead_;
    EventQueue<engine_detail::Ev> q_;
    MetricsTrace trace_;
    std::uint64_t next_flight_ = 0;
    bool gate_open_ = false;
    bool wander_on_ = false;
    bool ran_ = false;
};

/// One-call convenience: build, run, return the trace.
inline MetricsTrace run_scenario(Scenario scenario)
{
    Simulation sim(std::move(scenario));
    return sim.run();
}

} // namespace tsnsim
