#pragma once

#include <vector>

#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

/// How a 5GS bridge presents itself to the surrounding gPTP domain.
/// The two transparent modes and TimeAwareSystem all compensate their
/// residence time into the correction field; BoundaryClock regenerates
/// the sync from the bridge's internal clock.
enum class FivegMode { BoundaryClock, P2pTransparent, E2eTransparent, TimeAwareSystem };

/// Shape of the radio-interface time error attached at the DS-TT side.
enum class UeErrorModel { PerMessage, SlowVarying };

/// Where the sync source sits relative to the bridge. Downlink: wired
/// side feeds the wireless side; uplink: the reverse. Scenario metadata;
/// the stamping side follows the actual message flow.
enum class FivegDirection { Downlink, Uplink };

struct FivegConfig {
    FivegMode mode = FivegMode::E2eTransparent;
    bool service_active = true;
    FivegDirection direction = FivegDirection::Downlink;

    // Radio-interface sync error band: the DS-TT stamps carry an error
    // whose magnitude is uniform in [min, max] with uniform sign.
    Duration ue_error_min{470000}; // 470 ns
    Duration ue_error_max{540000}; // 540 ns
    UeErrorModel error_model = UeErrorModel::PerMessage;

    // One-way delay through the 5G system between the TT ports.
    Duration transit{1000000000};      // 1 ms
    Duration transit_jitter{100000000}; // +/- 100 us, uniform

    // Neighbors reached through the DS-TT (wireless) side; every other
    // link terminates at the NW-TT side.
    std::vector<NodeId> ds_tt_peers;
};

} // namespace tsnsim
