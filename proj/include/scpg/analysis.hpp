// analysis.hpp -- from spike records to the reported quantities:
// population rates, burst-based oscillation frequency, anti-phase
// overlap, replica statistics and stimulus/response correlation.

#ifndef SCPG_ANALYSIS_HPP
#define SCPG_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "scpg/engine.hpp"

namespace scpg {

struct RateSeries {
    std::vector<double> times;  // bin centers, ms
    std::vector<double> values; // Hz, per neuron
    double bin_ms = 5.0;
    double window_ms = 15.0; // moving-average width actually applied
};

struct Burst {
    double onset_ms;
    double offset_ms;
    std::uint64_t spike_count;
};

using BurstTrain = std::vector<Burst>;

// Population rate: spike counts per bin / (n * bin seconds), then a
// centered moving average over `window_ms`. window_ms == bin_ms leaves
// the histogram untouched.
RateSeries population_rate(const SpikeRecord& record, std::uint32_t n,
                           double t_end_ms, double bin_ms = 5.0,
                           double window_ms = 15.0);

// Burst estimator. Reported oscillation frequencies depend on how a
// burst is delimited, so the three knobs stay exposed rather than being
// hard-coded: a burst is a maximal run of bins at or above
// threshold_frac * max(rate); runs closer than merge_gap_ms are merged
// and bursts shorter than min_duration_ms are dropped.
struct BurstParams {
    double threshold_frac = 0.3;
    double merge_gap_ms = 20.0;
    double min_duration_ms = 10.0;
};

BurstTrain detect_bursts(const RateSeries& rate, std::uint32_t n,
                         const BurstParams& params = {});

// Total CPG frequency: bursts of A plus bursts of B per second.
double cpg_frequency(const BurstTrain& bursts_a, const BurstTrain& bursts_b,
                     double t_span_ms);

// Sliding-window CPG frequency for time-varying stimuli. A burst counts
// toward the window containing its midpoint.
struct WindowedFrequency {
    std::vector<double> window_start_ms;
    std::vector<double> values_hz;
};

WindowedFrequency windowed_frequency(const BurstTrain& bursts_a,
                                     const BurstTrain& bursts_b,
                                     double t_span_ms,
                                     double window_ms = 1000.0,
                                     double hop_ms = 250.0);

// Overlapped burst duration / total burst duration of the
// shorter-total train. Absent when either train is empty.
std::optional<double> antiphase_overlap(const BurstTrain& bursts_a,
                                        const BurstTrain& bursts_b);

double pearson(std::span<const double> x, std::span<const double> y);

struct SweepStats {
    std::uint32_t n;
    double mean, min, max, std_dev;
    std::vector<double> frequencies; // per replica
};

double mean_of(std::span<const double> xs);
double stddev_of(std::span<const double> xs);
double median_of(std::vector<double> xs);

} // namespace scpg

#endif
