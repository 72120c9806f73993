#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tsnsim/error.hpp"
#include "tsnsim/rng.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

enum class Timescale { Ptp, Arbitrary };

/// Instantaneous phase step, e.g. an oscillator upset. Magnitude adds to
/// every reading at or after `at`; steps superpose.
struct PhaseGlitch {
    SimTime at;
    Duration magnitude; // must be nonzero
};

// Frequency offsets are held in integer parts-per-trillion so the
// noise-free phase is exact integer arithmetic: at 1e-12 resolution a
// 100 ppm drift is 1e8 ppt with nothing lost.
constexpr std::int64_t PPT_PER_UNIT = 1000000000000ll;

struct ClockParams {
    Duration offset0{0};             // initial phase offset vs true time
    std::int64_t drift_ppt = 0;      // constant frequency error, parts per trillion
    double wander_sigma_ppm = 0.0;   // random-walk step, ppm per sqrt(second)
    double jitter_sigma_ps = 0.0;    // white phase noise per reading, ps RMS
    Duration granularity{8000};      // timestamp quantum, >= 1 ps (default 8 ns)
    Timescale timescale = Timescale::Ptp;
};

inline std::int64_t ppt_from_ppm(double ppm)
{
    return static_cast<std::int64_t>(std::llround(ppm * 1e6));
}

namespace detail {
inline std::int64_t floor_div_i128(__int128 num, std::int64_t den)
{
    __int128 q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return static_cast<std::int64_t>(q);
}
} // namespace detail

/// A free-running oscillator observed from true time. Phase integrates
/// (1 + drift + accumulated wander) piecewise; segments close only when
/// the wander state advances. The noise-free phase is exact: with zero
/// noise, local(t) - local(s) equals (t - s)(1 + d) to within 1 ps of
/// rounding, independent of evaluation history.
class LocalClock {
public:
    LocalClock(ClockParams params, std::uint64_t stream_seed)
        : params_(validated(params)), noise_(stream_seed)
    {
    }

    const ClockParams& params() const { return params_; }

    /// Accumulated random-walk frequency offset, parts per trillion.
    std::int64_t freq_offset_ppt() const { return wander_ppt_; }

    /// Noise-free, unquantized phase: the clock's true timescale. Used as
    /// the metrics reference; draws nothing and moves no internal cursor.
    SimTime phase(SimTime t) const
    {
        if (t < seg_start_)
            throw ContractError("clock phase query before current wander segment");
        __int128 raw = phase_e12_
                       + static_cast<__int128>(t.ps - seg_start_.ps)
                             * (PPT_PER_UNIT + params_.drift_ppt + wander_ppt_);
        std::int64_t ps = detail::floor_div_i128(raw, PPT_PER_UNIT);
        return SimTime{ps + params_.offset0.ps + glitch_sum(t).ps};
    }

    /// Read the clock: phase plus one white-noise draw. Queries must move
    /// forward in true time; the engine is time-driven.
    SimTime local_time(SimTime t)
    {
        if (t < last_eval_)
            throw ContractError("clock read moved backward in true time");
        last_eval_ = t;
        SimTime base = phase(t);
        if (params_.jitter_sigma_ps > 0.0) {
            base += Duration{static_cast<std::int64_t>(
                std::llround(noise_.normal(params_.jitter_sigma_ps)))};
        }
        return base;
    }

    /// Hardware timestamp: the reading floored to the granularity grid,
    /// so timestamp(t) <= local_time(t) < timestamp(t) + granularity for
    /// the same underlying reading.
    SimTime timestamp(SimTime t)
    {
        return floor_to(local_time(t), params_.granularity);
    }

    /// Register a phase step. Steps may not land before already-evaluated
    /// time: that would rewrite history the engine has observed.
    void inject_glitch(PhaseGlitch g)
    {
        if (g.magnitude.ps == 0)
            throw ContractError("phase glitch magnitude must be nonzero");
        if (g.at < last_eval_)
            throw ContractError("phase glitch scheduled before clock's evaluation point");
        glitches_.push_back(g);
        std::sort(glitches_.begin(), glitches_.end(),
                  [](const PhaseGlitch& a, const PhaseGlitch& b) { return a.at < b.at; });
    }

    /// Advance the random-walk frequency state across a step of dt. The
    /// draw is Normal(0, wander_sigma * sqrt(dt)); the new frequency
    /// applies from the end of the step forward.
    void advance_wander(Duration dt)
    {
        if (dt.ps <= 0)
            throw ContractError("wander advance requires positive dt");
        SimTime seg_end = seg_start_ + dt;
        if (seg_end < last_eval_)
            throw ContractError("wander advance would change already-evaluated time");
        phase_e12_ += static_cast<__int128>(dt.ps)
                      * (PPT_PER_UNIT + params_.drift_ppt + wander_ppt_);
        seg_start_ = seg_end;
        if (params_.wander_sigma_ppm > 0.0) {
            double dt_s = static_cast<double>(dt.ps) * 1e-12;
            double step_ppm = noise_.normal(params_.wander_sigma_ppm * std::sqrt(dt_s));
            wander_ppt_ += ppt_from_ppm(step_ppm);
        }
    }

private:
    static ClockParams validated(ClockParams p)
    {
        if (p.granularity.ps < 1)
            throw ValidationError("clock granularity must be at least 1 ps");
        if (p.wander_sigma_ppm < 0.0 || !std::isfinite(p.wander_sigma_ppm))
            throw ValidationError("clock wander sigma must be finite and non-negative");
        if (p.jitter_sigma_ps < 0.0 || !std::isfinite(p.jitter_sigma_ps))
            throw ValidationError("clock jitter sigma must be finite and non-negative");
        return p;
    }

    Duration glitch_sum(SimTime t) const
    {
        Duration sum{0};
        for (const auto& g : glitches_) {
            if (g.at <= t) sum += g.magnitude;
            else break;
        }
        return sum;
    }

    ClockParams params_;
    RngStream noise_;
    std::int64_t wander_ppt_ = 0;
    SimTime seg_start_{0};
    __int128 phase_e12_ = 0; // local phase at seg_start_, in units of 1e-12 ps
    SimTime last_eval_{INT64_MIN};
    std::vector<PhaseGlitch> glitches_;
};

} // namespace tsnsim
