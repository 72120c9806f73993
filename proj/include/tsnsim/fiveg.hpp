#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>

#include "tsnsim/clock.hpp"
#include "tsnsim/error.hpp"
#include "tsnsim/fiveg_config.hpp"
#include "tsnsim/gptp.hpp"
#include "tsnsim/rng.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

// A 5G system acting as one logical TSN bridge: a sync message is
// stamped on the internal 5GS clock when it enters at one TT port (TSi)
// and again when it leaves at the other (TSe). The difference is the
// residence time the bridge folds into the correction, which absorbs the
// PDU-session transit no matter how much it jitters. Stamps taken at the
// DS-TT side carry the radio-interface sync error of the UE.

enum class TTStampKind { TSi, TSe };

struct TTStamp {
    TTStampKind kind = TTStampKind::TSi;
    SimTime value{0};          // 5GS internal time, plus UE error at the DS-TT
    std::uint64_t msg_seq = 0; // pairs ingress with egress
};

/// Difference of a matched stamp pair. Egress must not precede ingress.
inline Duration residence_time(const TTStamp& tsi, const TTStamp& tse)
{
    if (tsi.kind != TTStampKind::TSi || tse.kind != TTStampKind::TSe)
        throw ContractError("residence time needs one TSi and one TSe stamp");
    if (tsi.msg_seq != tse.msg_seq)
        throw ContractError("residence time across mismatched message sequences");
    if (tse.value < tsi.value)
        throw ContractError("egress stamp precedes ingress stamp");
    return tse.value - tsi.value;
}

/// Stamping and mode behavior of one 5GS bridge. Owns the random streams
/// for the UE sync error and the transit jitter so draws replay exactly
/// under one seed.
class FivegBridgeState {
public:
    FivegBridgeState(FivegConfig config, std::uint64_t ue_seed, std::uint64_t transit_seed)
        : config_(std::move(config)), ue_stream_(ue_seed), transit_stream_(transit_seed)
    {
    }

    const FivegConfig& config() const { return config_; }
    bool service_active() const { return config_.service_active; }

    /// Idempotent service toggle; setting the current state is a no-op.
    void set_service(bool active) { config_.service_active = active; }

    /// One UE sync error draw: magnitude uniform inside the band, sign
    /// uniform. SlowVarying walks the magnitude inside the band with a
    /// fixed sign instead of redrawing. A [0,0] band draws nothing.
    Duration sample_ue_error()
    {
        if (config_.ue_error_max.ps == 0) return Duration{0};
        double lo = static_cast<double>(config_.ue_error_min.ps);
        double hi = static_cast<double>(config_.ue_error_max.ps);
        if (config_.error_model == UeErrorModel::PerMessage) {
            double mag = ue_stream_.uniform(lo, hi);
            return Duration{ue_stream_.sign() * static_cast<std::int64_t>(std::llround(mag))};
        }
        if (!slow_state_) {
            slow_state_ = SlowState{ue_stream_.uniform(lo, hi), ue_stream_.sign()};
        } else {
            double step = (hi - lo) / 16.0;
            double mag = slow_state_->magnitude + ue_stream_.normal(step);
            // Reflect back into the band.
            while (mag < lo || mag > hi) {
                if (mag < lo) mag = 2.0 * lo - mag;
                if (mag > hi) mag = 2.0 * hi - mag;
            }
            slow_state_->magnitude = mag;
        }
        return Duration{slow_state_->sign
                        * static_cast<std::int64_t>(std::llround(slow_state_->magnitude))};
    }

    /// One-way transit through the 5G system, jittered uniformly.
    Duration sample_transit()
    {
        if (config_.transit_jitter.ps == 0) return config_.transit;
        double j = static_cast<double>(config_.transit_jitter.ps);
        return config_.transit
               + Duration{static_cast<std::int64_t>(
                     std::llround(transit_stream_.uniform(-j, j)))};
    }

    /// Stamp a message entering the bridge. Returns nothing while the
    /// time-sync service is inactive: the message passes through unstamped.
    std::optional<TTStamp> ingress_stamp(LocalClock& internal_clock, std::uint64_t msg_seq,
                                         SimTime true_time, bool ds_tt_side)
    {
        if (!config_.service_active) return std::nullopt;
        TTStamp stamp{TTStampKind::TSi, stamped_value(internal_clock, true_time, ds_tt_side),
                      msg_seq};
        pending_[msg_seq] = stamp;
        return stamp;
    }

    /// Stamp the same message leaving the bridge. The ingress stamp must
    /// exist; it is consumed here.
    TTStamp egress_stamp(LocalClock& internal_clock, std::uint64_t msg_seq,
                         SimTime true_time, bool ds_tt_side)
    {
        auto it = pending_.find(msg_seq);
        if (it == pending_.end())
            throw ContractError("egress stamp without matching ingress stamp");
        pending_.erase(it);
        return TTStamp{TTStampKind::TSe, stamped_value(internal_clock, true_time, ds_tt_side),
                       msg_seq};
    }

    /// Rewrite a transiting sync according to the configured mode. The
    /// transparent modes and TimeAwareSystem convert the residence into
    /// GM time and add it to the correction; BoundaryClock discards the
    /// upstream timing and re-sources the sync from the internal clock at
    /// egress.
    SyncEvent apply_mode(const SyncEvent& sync, Duration residence, double rate_ratio,
                         const TTStamp& tse) const
    {
        SyncEvent out = sync;
        if (config_.mode == FivegMode::BoundaryClock) {
            out.precise_origin = tse.value;
            out.correction = Duration{0};
            out.rate_ratio = 1.0;
            return out;
        }
        out.rate_ratio = rate_ratio;
        out.correction += scale_round(residence, rate_ratio);
        return out;
    }

private:
    SimTime stamped_value(LocalClock& clock, SimTime true_time, bool ds_tt_side)
    {
        SimTime v = clock.timestamp(true_time);
        if (ds_tt_side) v += sample_ue_error();
        return v;
    }

    struct SlowState {
        double magnitude;
        int sign;
    };

    FivegConfig config_;
    RngStream ue_stream_;
    RngStream transit_stream_;
    std::optional<SlowState> slow_state_;
    std::map<std::uint64_t, TTStamp> pending_;
};

} // namespace tsnsim
