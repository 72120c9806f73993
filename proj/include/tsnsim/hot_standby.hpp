#pragma once

#include <optional>

#include "tsnsim/error.hpp"
#include "tsnsim/gptp.hpp"
#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

// Redundant grandmaster operation: two pinned GMs serve two domains at
// once, receivers follow domain health rather than re-electing, and the
// standby only speaks once it has synchronized to the primary's time.

struct HotStandbyConfig {
    DomainId primary_domain = 0;
    DomainId standby_domain = 1;
    NodeId primary_gm = 0;
    NodeId standby_gm = 0;
    Duration offset_threshold{1000000};  // 1 us: residual beyond this is a fault
    Duration staleness{375000000000};    // 3 sync intervals without an update
    Duration gate_threshold{1000000};    // standby transmit gate, 1 us

    void validate() const
    {
        if (primary_domain == standby_domain)
            throw ValidationError("hot standby requires two distinct domains");
        if (primary_gm == standby_gm)
            throw ValidationError("hot standby requires two distinct grandmasters");
        if (offset_threshold.ps <= 0 || staleness.ps <= 0 || gate_threshold.ps <= 0)
            throw ValidationError("hot standby thresholds must be positive");
    }
};

/// Observed quality of one domain at a receiver. last_offset is the sync
/// residual: measured GM time minus the GM time predicted from the
/// previous estimate. The residual stays near zero under plain drift
/// (prediction tracks it), so a breach means the domain itself moved.
struct DomainHealth {
    DomainId domain = 0;
    Duration last_offset{0};
    SimTime last_update{0}; // receiver-local time of the last sync, accepted or not
    bool has_update = false;
};

/// A domain is usable when its last residual is inside the threshold and
/// syncs are still arriving. Both comparisons are inclusive.
inline bool is_synced(const DomainHealth& health, const HotStandbyConfig& cfg,
                      SimTime now_local)
{
    return health.has_update && abs(health.last_offset) <= cfg.offset_threshold
           && now_local - health.last_update <= cfg.staleness;
}

enum class GateDecision { Transmit, Hold };

/// May the standby start serving its domain? Hold suppresses all standby
/// Sync and Announce emission. The boundary is inclusive: an offset at
/// exactly the gate threshold transmits.
inline GateDecision standby_gate(Duration standby_offset_to_primary,
                                 const HotStandbyConfig& cfg)
{
    return abs(standby_offset_to_primary) <= cfg.gate_threshold ? GateDecision::Transmit
                                                                : GateDecision::Hold;
}

struct SelectorState {
    DomainId active = 0;
    int switch_count = 0;
    std::optional<SimTime> last_switch;
    bool holdover = false;
};

/// Receiver-side domain choice. The active domain keeps serving while
/// healthy; on failure the receiver moves to the other domain if that one
/// is synced, and otherwise holds over on its last estimate instead of
/// declaring itself unsynchronized. Preference is revertive: once the
/// primary is synced again, service returns to it.
inline SelectorState select_domain(const DomainHealth& primary,
                                   const DomainHealth& standby, SelectorState state,
                                   const HotStandbyConfig& cfg, SimTime now_local)
{
    bool primary_ok = is_synced(primary, cfg, now_local);
    bool standby_ok = is_synced(standby, cfg, now_local);
    bool on_primary = state.active == cfg.primary_domain;
    state.holdover = false;

    if (!on_primary && primary_ok) {
        state.active = cfg.primary_domain;
        state.switch_count += 1;
        state.last_switch = now_local;
        return state;
    }
    if (on_primary ? primary_ok : standby_ok) return state;
    if (on_primary ? standby_ok : primary_ok) {
        state.active = on_primary ? cfg.standby_domain : cfg.primary_domain;
        state.switch_count += 1;
        state.last_switch = now_local;
        return state;
    }
    state.holdover = true;
    return state;
}

/// Project grandmaster time from an estimate at a later local instant:
/// the GM time seen at the last update, advanced by the local interval
/// scaled with the rate ratio.
inline SimTime project_gm_time(const GmEstimate& estimate, SimTime local_now)
{
    SimTime gm_at_update = estimate.last_update - estimate.offset;
    return gm_at_update + scale_round(local_now - estimate.last_update,
                                      estimate.rate_ratio);
}

/// Throwing form for callers that require an estimate to exist.
inline SimTime receiver_time(const std::optional<GmEstimate>& estimate, SimTime local_now)
{
    if (!estimate)
        throw NotYetSynchronized("no sync accepted yet in this domain");
    return project_gm_time(*estimate, local_now);
}

} // namespace tsnsim
