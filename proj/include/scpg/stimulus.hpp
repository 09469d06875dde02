// stimulus.hpp -- force-sensor path: voltage-to-rate regression and the
// piecewise-constant stimulus schedules used by the experiments.

#ifndef SCPG_STIMULUS_HPP
#define SCPG_STIMULUS_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace scpg {

// Linear regression from sensor voltage (0..5.5 V) to the reference
// population rate, clamped at zero: max(0, (280 v - 950) / 3) Hz.
// Deliberately no upper clamp; the ramp experiment drives past the
// 171 Hz biological ceiling and saturation has to come from the network.
double voltage_to_rate(double v_s);

// Voltage below which the regression output is clamped to 0 Hz.
inline constexpr double kRateClampVolts = 950.0 / 280.0;

enum class ValueKind { voltage_V, rate_Hz };

struct StimulusSegment {
    double start_ms = 0.0;
    double end_ms = 0.0; // exclusive; boundary samples belong to the later segment
    double value = 0.0;
};

struct StimulusProfile {
    std::vector<StimulusSegment> segments; // contiguous, covering [0, t_end]
    ValueKind kind = ValueKind::rate_Hz;

    double t_end() const
    {
        return segments.empty() ? 0.0 : segments.back().end_ms;
    }

    // Value of the covering segment; throws outside [0, t_end].
    double sample(double t_ms) const;

    // Same schedule expressed in Hz (identity for rate profiles).
    StimulusProfile as_rate() const;

    void validate() const;
};

StimulusProfile constant_profile(double value, double t_end_ms,
                                 ValueKind kind = ValueKind::rate_Hz);

// 0/171 Hz alternating at 1 s per segment over 5 s (the step protocol).
StimulusProfile step_profile();

// The fixed random-readings sequence, 500 ms per value:
// 171, 40, 80, 30, 5, 130, 50, 76, 20, 150 Hz.
StimulusProfile random_seq_profile();

// 0 to 200 Hz in +20 Hz steps, 500 ms per step; the final value sits
// about 17% above the 171 Hz ceiling.
StimulusProfile ramp_profile();

// Equal-duration segments, one per listed rate.
StimulusProfile sweep_profile(const std::vector<double>& rates_hz,
                              double segment_ms);

nlohmann::json to_json(const StimulusProfile& profile);
StimulusProfile profile_from_json(const nlohmann::json& j);

} // namespace scpg

#endif
