#include "scpg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scpg {

RateSeries population_rate(const SpikeRecord& record, std::uint32_t n,
                           double t_end_ms, double bin_ms, double window_ms)
{
    if (bin_ms <= 0) throw std::invalid_argument("bin must be positive");
    if (window_ms < bin_ms)
        throw std::invalid_argument("window must be at least one bin");
    if (n < 1) throw std::invalid_argument("n must be >= 1");

    const auto n_bins =
        static_cast<std::size_t>(std::ceil(t_end_ms / bin_ms - 1e-9));
    std::vector<double> counts(std::max<std::size_t>(n_bins, 1), 0.0);
    for (const auto& ev : record.events) {
        auto b = static_cast<std::size_t>(ev.time_ms / bin_ms);
        if (b >= counts.size()) b = counts.size() - 1;
        counts[b] += 1.0;
    }

    RateSeries series;
    series.bin_ms = bin_ms;
    series.window_ms = window_ms;
    const double scale = 1.0 / (n * bin_ms * 1e-3);
    series.times.resize(counts.size());
    series.values.resize(counts.size());
    for (std::size_t b = 0; b < counts.size(); ++b) {
        series.times[b] = (b + 0.5) * bin_ms;
        series.values[b] = counts[b] * scale;
    }

    // Centered moving average; half-windows shrink at the edges.
    const auto half = static_cast<std::size_t>(window_ms / bin_ms) / 2;
    if (half > 0) {
        std::vector<double> smoothed(series.values.size());
        for (std::size_t b = 0; b < series.values.size(); ++b) {
            const std::size_t lo = b >= half ? b - half : 0;
            const std::size_t hi = std::min(b + half, series.values.size() - 1);
            double sum = 0.0;
            for (std::size_t k = lo; k <= hi; ++k) sum += series.values[k];
            smoothed[b] = sum / double(hi - lo + 1);
        }
        series.values = std::move(smoothed);
    }
    return series;
}

BurstTrain detect_bursts(const RateSeries& rate, std::uint32_t n,
                         const BurstParams& params)
{
    if (rate.values.empty()) throw std::invalid_argument("empty rate series");
    const double peak = *std::max_element(rate.values.begin(), rate.values.end());
    if (peak <= 0.0) return {};
    const double threshold = params.threshold_frac * peak;

    // Raw above-threshold runs as [start_bin, end_bin) with spike counts
    // recovered from the (possibly smoothed) series.
    struct Run { std::size_t lo, hi; };
    std::vector<Run> runs;
    std::size_t b = 0;
    while (b < rate.values.size()) {
        if (rate.values[b] < threshold) { ++b; continue; }
        std::size_t lo = b;
        while (b < rate.values.size() && rate.values[b] >= threshold) ++b;
        runs.push_back({lo, b});
    }

    // Merge runs separated by less than merge_gap_ms.
    std::vector<Run> merged;
    for (const auto& run : runs) {
        if (!merged.empty() &&
            (run.lo - merged.back().hi) * rate.bin_ms < params.merge_gap_ms)
            merged.back().hi = run.hi;
        else
            merged.push_back(run);
    }

    BurstTrain bursts;
    for (const auto& run : merged) {
        const double onset = run.lo * rate.bin_ms;
        const double offset = run.hi * rate.bin_ms;
        if (offset - onset < params.min_duration_ms) continue;
        double spikes = 0.0;
        for (std::size_t k = run.lo; k < run.hi; ++k)
            spikes += rate.values[k] * n * rate.bin_ms * 1e-3;
        bursts.push_back({onset, offset,
                          static_cast<std::uint64_t>(std::llround(spikes))});
    }
    return bursts;
}

double cpg_frequency(const BurstTrain& bursts_a, const BurstTrain& bursts_b,
                     double t_span_ms)
{
    if (t_span_ms <= 0) throw std::invalid_argument("t_span must be positive");
    return double(bursts_a.size() + bursts_b.size()) / (t_span_ms * 1e-3);
}

WindowedFrequency windowed_frequency(const BurstTrain& bursts_a,
                                     const BurstTrain& bursts_b,
                                     double t_span_ms, double window_ms,
                                     double hop_ms)
{
    WindowedFrequency out;
    auto count_in = [](const BurstTrain& bursts, double lo, double hi) {
        std::size_t c = 0;
        for (const auto& burst : bursts) {
            const double mid = 0.5 * (burst.onset_ms + burst.offset_ms);
            if (mid >= lo && mid < hi) ++c;
        }
        return c;
    };
    for (double t0 = 0.0; t0 + window_ms <= t_span_ms + 1e-9; t0 += hop_ms) {
        const double t1 = t0 + window_ms;
        const auto total = count_in(bursts_a, t0, t1) + count_in(bursts_b, t0, t1);
        out.window_start_ms.push_back(t0);
        out.values_hz.push_back(double(total) / (window_ms * 1e-3));
    }
    return out;
}

std::optional<double> antiphase_overlap(const BurstTrain& bursts_a,
                                        const BurstTrain& bursts_b)
{
    if (bursts_a.empty() || bursts_b.empty()) return std::nullopt;
    auto total = [](const BurstTrain& bursts) {
        double sum = 0.0;
        for (const auto& b : bursts) sum += b.offset_ms - b.onset_ms;
        return sum;
    };
    double overlap = 0.0;
    for (const auto& a : bursts_a)
        for (const auto& b : bursts_b)
            overlap += std::max(0.0, std::min(a.offset_ms, b.offset_ms) -
                                         std::max(a.onset_ms, b.onset_ms));
    return overlap / std::min(total(bursts_a), total(bursts_b));
}

double pearson(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("pearson needs equal lengths >= 3");
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson undefined for zero variance");
    return sxy / std::sqrt(sxx * syy);
}

double mean_of(std::span<const double> xs)
{
    return std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
}

double stddev_of(std::span<const double> xs)
{
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / double(xs.size()));
}

double median_of(std::vector<double> xs)
{
    if (xs.empty()) throw std::invalid_argument("median of empty range");
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

} // namespace scpg
