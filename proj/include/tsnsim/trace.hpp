#pragma once

#include <cstdint>
#include <vector>

#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

/// Whether a node currently holds a live time source: Fresh means syncs
/// from its chosen source are arriving inside the receipt window,
/// Holdover means it is extrapolating a stale or superseded estimate,
/// None means it has nothing to extrapolate.
enum class SourceState { Fresh, Holdover, None };

enum class SampleKind { Periodic, AtSwitch };

/// One recorded time error: the node's projected time minus the active
/// grandmaster's true timescale at `at` (true time). Undefined while the
/// node has no estimate; undefined samples carry no error value.
struct TimeErrorSample {
    NodeId node = 0;
    SimTime at{0};
    DomainId domain = 0;
    Duration error{0};
    bool defined = false;
    SourceState source = SourceState::None;
    SampleKind kind = SampleKind::Periodic;
};

/// A receiver changed time source: domain switch under hot standby, or a
/// re-election within one domain. Discontinuity is the magnitude of the
/// jump in the node's projected time across the change, taken from the
/// two projections at the same instant (exact, not interpolated).
struct SourceChange {
    NodeId node = 0;
    SimTime at{0};
    DomainId from_domain = 0;
    DomainId to_domain = 0;
    ClockIdentity from_gm = 0;
    ClockIdentity to_gm = 0;
    bool discontinuity_defined = false;
    Duration discontinuity{0};
    int switch_count = 0;
};

enum class AnnotationKind {
    FaultApplied,
    StandbyGateOpened,
    SyncRejected,       // residual beyond threshold, estimate kept
    OrphanFollowUp,     // follow-up without a recorded sync ingress
    UncorrectedTransit, // 5GS forwarded a sync with the service inactive
    ServiceToggled,
    SourceFresh, // node regained a live source
    SourceLost   // node's live source went stale or vanished
};

struct Annotation {
    SimTime at{0};
    NodeId node = 0;
    AnnotationKind kind = AnnotationKind::FaultApplied;
    std::int64_t value = 0;
};

/// Everything a run records. Samples, switches, and annotations appear in
/// event order; exports re-sort as their format requires.
struct MetricsTrace {
    std::vector<TimeErrorSample> samples;
    std::vector<SourceChange> switches;
    std::vector<Annotation> annotations;
    SimTime end{0};
};

} // namespace tsnsim
