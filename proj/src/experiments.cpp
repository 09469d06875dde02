#include "scpg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace scpg {

namespace {

constexpr double kIsolatedRunMs = 5000.0;

std::uint64_t replica_seed(std::uint64_t base, std::uint32_t n, std::uint32_t r)
{
    return Rng::substream(base, "replica-n" + std::to_string(n) + "-r" +
                                    std::to_string(r))
        .next_u64();
}

struct FreqMeasurement {
    double total_hz;
    double per_pop_hz;
    BurstTrain bursts_a;
    BurstTrain bursts_b;
};

// Frequency measurement over [trim_ms, t_span_ms]. The trim drops the
// startup transient (the staggered drive onset and the first, unusually
// shaped cycles); burst times in the result are absolute, not shifted.
FreqMeasurement measure_ab(const SimResult& result, std::uint32_t n,
                           double t_span_ms, double trim_ms = 0.0)
{
    auto trimmed = [&](const std::string& id) {
        SpikeRecord rec{id, {}};
        for (const auto& ev : result.record(id).events)
            if (ev.time_ms >= trim_ms)
                rec.events.push_back({ev.time_ms - trim_ms, ev.neuron});
        return rec;
    };
    const double span = t_span_ms - trim_ms;
    auto rate_a = population_rate(trimmed("A"), n, span);
    auto rate_b = population_rate(trimmed("B"), n, span);
    FreqMeasurement m;
    m.bursts_a = detect_bursts(rate_a, n);
    m.bursts_b = detect_bursts(rate_b, n);
    for (auto* train : {&m.bursts_a, &m.bursts_b})
        for (auto& b : *train) {
            b.onset_ms += trim_ms;
            b.offset_ms += trim_ms;
        }
    m.total_hz = cpg_frequency(m.bursts_a, m.bursts_b, span);
    m.per_pop_hz = 0.5 * m.total_hz;
    return m;
}

SimResult run_isolated(const CpgConfig& config, double i_st,
                       std::uint64_t seed, double t_end_ms = kIsolatedRunMs)
{
    CpgConfig c = config;
    c.i_st = i_st;
    CpgNetwork cpg = build_cpg_ab(c, seed);
    return run(cpg.net, {}, t_end_ms, seed);
}

SimResult run_full(const CpgConfig& config, const StimulusProfile& ref_profile,
                   std::uint64_t seed)
{
    CpgNetwork cpg = build_cpg(config, seed);
    Schedule schedule;
    schedule.rates[cpg.ref] = ref_profile;
    return run(cpg.net, schedule, ref_profile.t_end(), seed);
}

void write_windowed_csv(const std::string& path, const WindowedFrequency& wf)
{
    std::ofstream out(path);
    out << "window_start_ms,cpg_frequency_hz\n";
    char line[64];
    for (std::size_t i = 0; i < wf.values_hz.size(); ++i) {
        std::snprintf(line, sizeof line, "%.3f,%.6g\n", wf.window_start_ms[i],
                      wf.values_hz[i]);
        out << line;
    }
}

BoundCheck check(const std::string& name, double measured, double lo, double hi)
{
    return {name, measured, lo, hi, measured >= lo && measured <= hi};
}

// -- experiment bodies -------------------------------------------------

using Body = ExperimentResult (*)(const ExperimentSpec&);

ExperimentResult exp_cpg_ab_isolated(const ExperimentSpec& spec)
{
    ExperimentResult res;
    std::vector<double> totals, per_pop;
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
        SimResult sim = run_isolated(spec.config, spec.config.i_st, spec.seeds[i]);
        write_spike_csv(spec.out_dir + "/spikes_seed" +
                            std::to_string(spec.seeds[i]) + ".csv",
                        sim);
        auto m = measure_ab(sim, spec.config.n_cpg, kIsolatedRunMs, 1000.0);
        totals.push_back(m.total_hz);
        per_pop.push_back(m.per_pop_hz);
    }
    res.checks.push_back(check("total_frequency_hz", median_of(totals), 10.1, 13.1));
    res.checks.push_back(check("per_population_hz", median_of(per_pop), 4.8, 6.8));
    res.summary["total_hz_per_seed"] = totals;
    return res;
}

ExperimentResult exp_cpg_ab_high_drive(const ExperimentSpec& spec)
{
    ExperimentResult res;
    std::vector<double> low, high;
    for (std::uint64_t seed : spec.seeds) {
        auto sim_hi = run_isolated(spec.config, 10.0, seed);
        write_spike_csv(spec.out_dir + "/spikes_seed" + std::to_string(seed) +
                            ".csv",
                        sim_hi);
        high.push_back(
            measure_ab(sim_hi, spec.config.n_cpg, kIsolatedRunMs, 1000.0)
                .total_hz);
        low.push_back(
            measure_ab(run_isolated(spec.config, 2.2, seed), spec.config.n_cpg,
                       kIsolatedRunMs, 1000.0)
                .total_hz);
    }
    const double margin = median_of(high) - median_of(low);
    res.checks.push_back(
        {"high_minus_low_drive_hz", margin, 1e-9, 1e9, margin > 0.0});
    res.summary["freq_at_10nA"] = high;
    res.summary["freq_at_2.2nA"] = low;
    return res;
}

ExperimentResult exp_population_size_sweep(const ExperimentSpec& spec)
{
    const std::vector<std::uint32_t> sizes = {10, 20, 40, 60, 80, 100};
    ExperimentResult res;
    std::ofstream stats(spec.out_dir + "/stats.csv");
    stats << "n,mean_hz,min_hz,max_hz,std_hz\n";

    std::vector<SweepStats> all;
    for (std::uint32_t n : sizes) {
        CpgConfig c = spec.config;
        c.n_cpg = n;
        SweepStats s;
        s.n = n;
        for (std::uint32_t r = 0; r < spec.replicas; ++r) {
            const std::uint64_t seed = replica_seed(spec.seeds.front(), n, r);
            SimResult sim = run_isolated(c, c.i_st, seed);
            s.frequencies.push_back(
                measure_ab(sim, n, kIsolatedRunMs, 1000.0).total_hz);
        }
        s.mean = mean_of(s.frequencies);
        s.min = *std::min_element(s.frequencies.begin(), s.frequencies.end());
        s.max = *std::max_element(s.frequencies.begin(), s.frequencies.end());
        s.std_dev = stddev_of(s.frequencies);
        char line[128];
        std::snprintf(line, sizeof line, "%u,%.6g,%.6g,%.6g,%.6g\n", s.n, s.mean,
                      s.min, s.max, s.std_dev);
        stats << line;
        all.push_back(std::move(s));
    }

    double min_std = 1e18;
    std::uint32_t min_std_n = 0;
    for (const auto& s : all) {
        if (s.std_dev < min_std) {
            min_std = s.std_dev;
            min_std_n = s.n;
        }
        res.summary["std_hz"][std::to_string(s.n)] = s.std_dev;
        if (s.n >= 40)
            res.checks.push_back(
                check("std_hz_n" + std::to_string(s.n), s.std_dev, 0.0, 1.5));
    }
    res.checks.push_back({"min_std_at_n", double(min_std_n), 100, 100,
                          min_std_n == 100});
    return res;
}

WindowedFrequency windowed_for(const SimResult& sim, const CpgConfig& config)
{
    auto m = measure_ab(sim, config.n_cpg, sim.t_end_ms);
    return windowed_frequency(m.bursts_a, m.bursts_b, sim.t_end_ms);
}

ExperimentResult exp_step_stimulus(const ExperimentSpec& spec)
{
    const StimulusProfile profile = step_profile();
    ExperimentResult res;
    std::vector<double> mins, maxs;
    bool on_exceeds_off = true;
    for (std::uint64_t seed : spec.seeds) {
        SimResult sim = run_full(spec.config, profile, seed);
        write_spike_csv(spec.out_dir + "/spikes_seed" + std::to_string(seed) +
                            ".csv",
                        sim);
        auto wf = windowed_for(sim, spec.config);
        write_windowed_csv(spec.out_dir + "/windowed_freq_seed" +
                               std::to_string(seed) + ".csv",
                           wf);
        std::vector<double> on, off, extremes;
        for (std::size_t i = 0; i < wf.values_hz.size(); ++i) {
            const double t0 = wf.window_start_ms[i];
            const double t1 = t0 + 1000.0;
            // Windows aligned with a whole stimulus segment.
            if (profile.sample(t0) == profile.sample(t1 - 1.0) &&
                std::fmod(t0, 1000.0) == 0.0) {
                (profile.sample(t0) > 0 ? on : off).push_back(wf.values_hz[i]);
            }
            // The extremes skip windows overlapping the startup transient.
            if (t0 >= 500.0) extremes.push_back(wf.values_hz[i]);
        }
        if (mean_of(on) <= mean_of(off)) on_exceeds_off = false;
        mins.push_back(*std::min_element(extremes.begin(), extremes.end()));
        maxs.push_back(*std::max_element(extremes.begin(), extremes.end()));
    }
    res.checks.push_back({"stimulated_exceeds_rest_every_seed",
                          on_exceeds_off ? 1.0 : 0.0, 1, 1, on_exceeds_off});
    res.checks.push_back(check("median_window_min_hz", median_of(mins), 6.5, 9.5));
    res.checks.push_back(check("median_window_max_hz", median_of(maxs), 13.0, 17.0));
    res.summary["window_min_per_seed"] = mins;
    res.summary["window_max_per_seed"] = maxs;
    return res;
}

ExperimentResult exp_random_stimulus(const ExperimentSpec& spec)
{
    const StimulusProfile profile = random_seq_profile();
    ExperimentResult res;
    std::vector<double> mins, maxs;
    for (std::uint64_t seed : spec.seeds) {
        SimResult sim = run_full(spec.config, profile, seed);
        write_spike_csv(spec.out_dir + "/spikes_seed" + std::to_string(seed) +
                            ".csv",
                        sim);
        auto wf = windowed_for(sim, spec.config);
        write_windowed_csv(spec.out_dir + "/windowed_freq_seed" +
                               std::to_string(seed) + ".csv",
                           wf);
        mins.push_back(*std::min_element(wf.values_hz.begin(), wf.values_hz.end()));
        maxs.push_back(*std::max_element(wf.values_hz.begin(), wf.values_hz.end()));
    }
    res.checks.push_back(check("median_window_min_hz", median_of(mins), 4.0, 12.0));
    res.checks.push_back(check("median_window_max_hz", median_of(maxs), 11.0, 17.0));
    return res;
}

// Burst-period frequency inside one stimulus segment. Counting bursts
// against the segment length quantizes a 500 ms segment to 2 Hz steps;
// measuring the spacing of the burst midpoints instead resolves well
// below 1 Hz, which the saturation and correlation checks need.
double segment_frequency(const FreqMeasurement& m, double lo, double hi)
{
    double total = 0.0;
    for (const auto* train : {&m.bursts_a, &m.bursts_b}) {
        std::vector<double> mids;
        for (const auto& b : *train) {
            const double mid = 0.5 * (b.onset_ms + b.offset_ms);
            if (mid >= lo && mid < hi) mids.push_back(mid);
        }
        if (mids.size() >= 2)
            total += 1000.0 * double(mids.size() - 1) / (mids.back() - mids.front());
        else
            total += double(mids.size()) / ((hi - lo) * 1e-3);
    }
    return total;
}

ExperimentResult exp_ramp_saturation(const ExperimentSpec& spec)
{
    const StimulusProfile profile = ramp_profile();
    ExperimentResult res;
    std::vector<double> maxs, excess;
    for (std::uint64_t seed : spec.seeds) {
        SimResult sim = run_full(spec.config, profile, seed);
        write_spike_csv(spec.out_dir + "/spikes_seed" + std::to_string(seed) +
                            ".csv",
                        sim);
        auto m = measure_ab(sim, spec.config.n_cpg, sim.t_end_ms);
        auto wf = windowed_frequency(m.bursts_a, m.bursts_b, sim.t_end_ms);
        write_windowed_csv(spec.out_dir + "/windowed_freq_seed" +
                               std::to_string(seed) + ".csv",
                           wf);
        maxs.push_back(*std::max_element(wf.values_hz.begin(), wf.values_hz.end()));
        // 180 Hz is the ramp segment closest to the 171 Hz ceiling; the
        // final 200 Hz segment must not run any faster than it.
        const double f_180 = segment_frequency(m, 4500.0, 5000.0);
        const double f_200 = segment_frequency(m, 5000.0, 5500.0);
        excess.push_back(f_200 - f_180);
    }
    res.checks.push_back(check("median_max_windowed_hz", median_of(maxs), 0.0, 16.0));
    res.checks.push_back(
        check("final_minus_ceiling_segment_hz", median_of(excess), -1e9, 1.0));
    res.summary["max_windowed_per_seed"] = maxs;
    return res;
}

ExperimentResult exp_rate_sweep_correlation(const ExperimentSpec& spec)
{
    std::vector<double> levels;
    for (double r = 0.0; r <= 180.0; r += 20.0) levels.push_back(r);
    const StimulusProfile profile = sweep_profile(levels, 1000.0);

    ExperimentResult res;
    // Per-level estimate for one run. The first 200 ms of each level
    // still reflect the previous one (the feedback loop settles over a
    // few burst cycles), so the estimate covers the level's last 800 ms.
    auto level_freqs = [&](std::uint64_t seed) {
        SimResult sim = run_full(spec.config, profile, seed);
        auto m = measure_ab(sim, spec.config.n_cpg, sim.t_end_ms);
        std::vector<double> freqs;
        for (std::size_t i = 0; i < levels.size(); ++i)
            freqs.push_back(
                segment_frequency(m, i * 1000.0 + 200.0, (i + 1) * 1000.0));
        return std::pair{std::move(sim), std::move(freqs)};
    };

    for (std::uint64_t seed : spec.seeds) {
        auto [sim, freqs] = level_freqs(seed);
        write_spike_csv(spec.out_dir + "/spikes_seed" + std::to_string(seed) +
                            ".csv",
                        sim);
        std::ofstream levels_csv(spec.out_dir + "/sweep_seed" +
                                 std::to_string(seed) + ".csv");
        levels_csv << "ref_rate_hz,cpg_frequency_hz\n";
        for (std::size_t i = 0; i < levels.size(); ++i)
            levels_csv << levels[i] << "," << freqs[i] << "\n";
    }

    // A single 10 s pass gives 8-16 bursts per level, so per-run curves
    // carry a couple of Hz of counting noise. The correlation is taken
    // against the per-level mean over a 40-replica ensemble, the same
    // way the size sweep reports replica statistics.
    const std::uint32_t replicas = 40;
    std::vector<double> mean_freqs(levels.size(), 0.0);
    for (std::uint32_t r = 0; r < replicas; ++r) {
        auto [sim, freqs] = level_freqs(replica_seed(spec.seeds.front(), 0, r));
        for (std::size_t i = 0; i < levels.size(); ++i)
            mean_freqs[i] += freqs[i] / double(replicas);
    }
    std::ofstream mean_csv(spec.out_dir + "/sweep_mean.csv");
    mean_csv << "ref_rate_hz,mean_cpg_frequency_hz\n";
    for (std::size_t i = 0; i < levels.size(); ++i)
        mean_csv << levels[i] << "," << mean_freqs[i] << "\n";

    res.checks.push_back(check("pearson_r", pearson(levels, mean_freqs), 0.9, 1.0));
    res.summary["mean_freq_per_level"] = mean_freqs;
    return res;
}

const std::vector<std::pair<ExperimentInfo, Body>>& registry()
{
    static const std::vector<std::pair<ExperimentInfo, Body>> table = {
        {{"population_size_sweep",
          "frequency stability vs neurons per population (isolated oscillator)"},
         &exp_population_size_sweep},
        {{"cpg_ab_isolated",
          "isolated A/B oscillator at 2.2 nA drive: 11.6 Hz alternation"},
         &exp_cpg_ab_isolated},
        {{"cpg_ab_high_drive",
          "isolated oscillator at 10 nA: faster, noisier rhythm"},
         &exp_cpg_ab_high_drive},
        {{"step_stimulus",
          "full network under alternating 0/171 Hz reference steps"},
         &exp_step_stimulus},
        {{"random_stimulus",
          "full network under the fixed random reference sequence"},
         &exp_random_stimulus},
        {{"ramp_saturation",
          "reference ramp to 200 Hz: output frequency must saturate"},
         &exp_ramp_saturation},
        {{"rate_sweep_correlation",
          "reference sweep 0..180 Hz: correlation of output with stimulus"},
         &exp_rate_sweep_correlation},
    };
    return table;
}

} // namespace

const std::vector<ExperimentInfo>& list_experiments()
{
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> v;
        for (const auto& [info, body] : registry()) v.push_back(info);
        return v;
    }();
    return infos;
}

bool experiment_exists(const std::string& name)
{
    for (const auto& [info, body] : registry())
        if (info.name == name) return true;
    return false;
}

void write_spike_csv(const std::string& path, const SimResult& result)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "population,neuron,time_ms\n";
    char line[96];
    for (const auto& rec : result.records)
        for (const auto& ev : rec.events) {
            std::snprintf(line, sizeof line, "%s,%u,%.3f\n",
                          rec.population.c_str(), ev.neuron, ev.time_ms);
            out << line;
        }
}

ExperimentResult run_experiment(const ExperimentSpec& spec)
{
    const Body* body = nullptr;
    for (const auto& [info, b] : registry())
        if (info.name == spec.name) body = &b;
    if (!body) throw std::invalid_argument("unknown experiment: " + spec.name);
    if (spec.seeds.empty())
        throw std::invalid_argument("experiment needs at least one seed");
    spec.config.validate();

    std::error_code ec;
    fs::create_directories(spec.out_dir, ec);
    if (ec || !fs::is_directory(spec.out_dir))
        throw std::runtime_error("cannot create output directory " + spec.out_dir);

    ExperimentResult res = (*body)(spec);
    res.name = spec.name;
    res.passed = true;
    for (const auto& c : res.checks) res.passed = res.passed && c.pass;

    nlohmann::json summary;
    summary["experiment"] = spec.name;
    summary["seeds"] = spec.seeds;
    summary["config"] = to_json(spec.config);
    summary["passed"] = res.passed;
    for (const auto& c : res.checks)
        summary["checks"].push_back({{"name", c.name},
                                     {"measured", c.measured},
                                     {"lo", c.lo},
                                     {"hi", c.hi},
                                     {"pass", c.pass}});
    summary["detail"] = res.summary;
    std::ofstream(spec.out_dir + "/summary.json") << summary.dump(2) << "\n";
    res.summary = summary;
    return res;
}

bool report(const std::string& bundle_dir, std::ostream& out)
{
    std::ifstream in(bundle_dir + "/summary.json");
    if (!in) throw std::runtime_error("no summary.json in " + bundle_dir);
    nlohmann::json summary;
    in >> summary;

    out << "experiment: " << summary.at("experiment").get<std::string>() << "\n";
    bool all_pass = true;
    char line[160];
    for (const auto& c : summary.at("checks")) {
        const bool pass = c.at("pass");
        all_pass = all_pass && pass;
        std::snprintf(line, sizeof line, "  %-36s %10.4g  expected [%g, %g]  %s\n",
                      c.at("name").get<std::string>().c_str(),
                      c.at("measured").get<double>(), c.at("lo").get<double>(),
                      c.at("hi").get<double>(), pass ? "PASS" : "FAIL");
        out << line;
    }
    out << (all_pass ? "PASS" : "FAIL") << "\n";
    return all_pass;
}

} // namespace scpg
