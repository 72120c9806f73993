#pragma once

#include <optional>

#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

enum class FaultKind {
    GmHardFailure, // node falls silent for good
    PhaseGlitch,   // instantaneous phase step on the node's clock
    ServiceToggle  // 5GS time-sync service on/off
};

struct FaultSpec {
    FaultKind kind = FaultKind::GmHardFailure;
    SimTime at{0};
    std::optional<NodeId> node; // ServiceToggle may leave this to the only 5GS bridge
    Duration magnitude{0};      // PhaseGlitch only, nonzero
    bool active = false;        // ServiceToggle only

    friend bool operator==(const FaultSpec&, const FaultSpec&) = default;
};

} // namespace tsnsim
