#include "scpg/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scpg {

double voltage_to_rate(double v_s)
{
    if (v_s < 0.0) throw std::invalid_argument("sensor voltage must be >= 0");
    return std::max(0.0, (280.0 * v_s - 950.0) / 3.0);
}

void StimulusProfile::validate() const
{
    if (segments.empty()) throw std::invalid_argument("profile has no segments");
    double cursor = 0.0;
    for (const auto& seg : segments) {
        if (seg.start_ms != cursor)
            throw std::invalid_argument("profile segments must be contiguous from 0");
        if (seg.end_ms <= seg.start_ms)
            throw std::invalid_argument("profile segment has non-positive length");
        if (kind == ValueKind::voltage_V && (seg.value < 0.0 || seg.value > 5.5))
            throw std::invalid_argument("voltage outside [0, 5.5] V");
        if (kind == ValueKind::rate_Hz && seg.value < 0.0)
            throw std::invalid_argument("rate must be >= 0");
        cursor = seg.end_ms;
    }
}

double StimulusProfile::sample(double t_ms) const
{
    if (t_ms < 0.0 || t_ms > t_end())
        throw std::out_of_range("sample time outside profile coverage");
    // Boundaries belong to the later segment; t == t_end falls in the last.
    for (const auto& seg : segments)
        if (t_ms >= seg.start_ms && t_ms < seg.end_ms) return seg.value;
    return segments.back().value;
}

StimulusProfile StimulusProfile::as_rate() const
{
    if (kind == ValueKind::rate_Hz) return *this;
    StimulusProfile out;
    out.kind = ValueKind::rate_Hz;
    out.segments.reserve(segments.size());
    for (const auto& seg : segments)
        out.segments.push_back({seg.start_ms, seg.end_ms, voltage_to_rate(seg.value)});
    return out;
}

StimulusProfile constant_profile(double value, double t_end_ms, ValueKind kind)
{
    StimulusProfile p;
    p.kind = kind;
    p.segments = {{0.0, t_end_ms, value}};
    p.validate();
    return p;
}

namespace {

StimulusProfile from_values(const std::vector<double>& values, double segment_ms)
{
    StimulusProfile p;
    p.kind = ValueKind::rate_Hz;
    double t = 0.0;
    for (double v : values) {
        p.segments.push_back({t, t + segment_ms, v});
        t += segment_ms;
    }
    p.validate();
    return p;
}

} // namespace

StimulusProfile step_profile()
{
    return from_values({0.0, 171.0, 0.0, 171.0, 0.0}, 1000.0);
}

StimulusProfile random_seq_profile()
{
    return from_values({171, 40, 80, 30, 5, 130, 50, 76, 20, 150}, 500.0);
}

StimulusProfile ramp_profile()
{
    std::vector<double> values;
    for (double r = 0.0; r <= 200.0; r += 20.0) values.push_back(r);
    return from_values(values, 500.0);
}

StimulusProfile sweep_profile(const std::vector<double>& rates_hz,
                              double segment_ms)
{
    return from_values(rates_hz, segment_ms);
}

nlohmann::json to_json(const StimulusProfile& profile)
{
    nlohmann::json j;
    j["unit"] = profile.kind == ValueKind::rate_Hz ? "Hz" : "V";
    for (const auto& seg : profile.segments)
        j["segments"].push_back({{"start_ms", seg.start_ms},
                                 {"end_ms", seg.end_ms},
                                 {"value", seg.value}});
    return j;
}

StimulusProfile profile_from_json(const nlohmann::json& j)
{
    StimulusProfile p;
    const std::string unit = j.at("unit");
    if (unit == "Hz")
        p.kind = ValueKind::rate_Hz;
    else if (unit == "V")
        p.kind = ValueKind::voltage_V;
    else
        throw std::invalid_argument("profile unit must be 'Hz' or 'V'");
    for (const auto& seg : j.at("segments"))
        p.segments.push_back({seg.at("start_ms"), seg.at("end_ms"), seg.at("value")});
    p.validate();
    return p;
}

} // namespace scpg
