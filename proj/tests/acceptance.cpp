// Acceptance suite: one pass/fail line per criterion, nonzero exit if
// any fail. Heavy runs (the replica sweep in particular) live here
// rather than in the unit suites.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "scpg/analysis.hpp"
#include "scpg/cpg.hpp"
#include "scpg/experiments.hpp"

using namespace scpg;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void verdict(int number, const std::string& name, bool pass,
             const std::string& detail)
{
    std::printf("[%s] criterion %2d: %-28s %s\n", pass ? "PASS" : "FAIL", number,
                name.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

ExperimentResult run_named(const std::string& name, const std::string& out_dir,
                           std::uint32_t replicas = 100)
{
    ExperimentSpec spec;
    spec.name = name;
    spec.out_dir = out_dir;
    spec.replicas = replicas;
    return run_experiment(spec);
}

double check_value(const ExperimentResult& res, const std::string& name)
{
    for (const auto& c : res.checks)
        if (c.name == name) return c.measured;
    throw std::runtime_error("missing check " + name);
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

char g_buf[256];

void criterion_1_isolated_frequency(const std::string& out_root)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_named("cpg_ab_isolated", out_root + "/cpg_ab_isolated");
    const double per_seed_s = seconds_since(t0) / 5.0;
    const double total = check_value(res, "total_frequency_hz");
    const double per_pop = check_value(res, "per_population_hz");
    const bool pass = res.passed && per_seed_s < 30.0;
    std::snprintf(g_buf, sizeof g_buf,
                  "total %.2f Hz (11.6 +- 1.5), per-pop %.2f Hz (5.8 +- 1), "
                  "%.1f s/seed (< 30)",
                  total, per_pop, per_seed_s);
    verdict(1, "isolated CPG frequency", pass, g_buf);
}

void criterion_2_drive_monotonicity(const std::string& out_root)
{
    const auto res =
        run_named("cpg_ab_high_drive", out_root + "/cpg_ab_high_drive");
    std::snprintf(g_buf, sizeof g_buf, "freq(10 nA) - freq(2.2 nA) = %.2f Hz (> 0)",
                  check_value(res, "high_minus_low_drive_hz"));
    verdict(2, "drive monotonicity", res.passed, g_buf);
}

void criterion_3_stability_sweep(const std::string& out_root)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto res =
        run_named("population_size_sweep", out_root + "/population_size_sweep");
    const double elapsed = seconds_since(t0);
    const bool pass = res.passed && elapsed < 15.0 * 60.0;
    std::snprintf(g_buf, sizeof g_buf,
                  "std < 1.5 Hz for n >= 40, min std at n = %.0f (want 100), "
                  "%.0f s total (< 900)",
                  check_value(res, "min_std_at_n"), elapsed);
    verdict(3, "stability sweep", pass, g_buf);
}

void criterion_4_step_adaptation(const std::string& out_root)
{
    const auto res = run_named("step_stimulus", out_root + "/step_stimulus");
    std::snprintf(g_buf, sizeof g_buf,
                  "window min %.2f Hz (in [6.5, 9.5]), max %.2f Hz (in [13, 17]), "
                  "stimulated > rest in every seed: %s",
                  check_value(res, "median_window_min_hz"),
                  check_value(res, "median_window_max_hz"),
                  check_value(res, "stimulated_exceeds_rest_every_seed") > 0
                      ? "yes"
                      : "no");
    verdict(4, "step-stimulus adaptation", res.passed, g_buf);
}

void criterion_5_saturation(const std::string& out_root)
{
    const auto res = run_named("ramp_saturation", out_root + "/ramp_saturation");
    std::snprintf(g_buf, sizeof g_buf,
                  "max windowed %.2f Hz (<= 16), final-segment excess %.2f Hz "
                  "(<= 1)",
                  check_value(res, "median_max_windowed_hz"),
                  check_value(res, "final_minus_ceiling_segment_hz"));
    verdict(5, "ramp saturation", res.passed, g_buf);
}

void criterion_6_correlation(const std::string& out_root)
{
    const auto res =
        run_named("rate_sweep_correlation", out_root + "/rate_sweep_correlation");
    std::snprintf(g_buf, sizeof g_buf, "Pearson r = %.3f (>= 0.9)",
                  check_value(res, "pearson_r"));
    verdict(6, "stimulus-response correlation", res.passed, g_buf);
}

void criterion_7_feedback_scenarios()
{
    CpgConfig config;
    auto spike_counts = [&](double ref_rate, std::uint64_t seed) {
        CpgNetwork cpg = build_cpg(config, seed);
        Schedule schedule;
        schedule.rates[cpg.ref] = constant_profile(ref_rate, 5000.0);
        SimResult result = run(cpg.net, schedule, 5000.0, seed);
        return std::pair{double(result.record("1").events.size()),
                         double(result.record("2").events.size())};
    };
    bool pass = true;
    double r1 = 0, r2 = 0;
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto [p1_lo, p2_lo] = spike_counts(0.0, seed);
        const auto [p1_hi, p2_hi] = spike_counts(171.0, seed);
        pass = pass && p1_lo > 2.0 * p2_lo && p2_hi > 2.0 * p1_hi;
        r1 = p2_lo > 0 ? p1_lo / p2_lo : INFINITY;
        r2 = p1_hi > 0 ? p2_hi / p1_hi : INFINITY;
    }
    std::snprintf(g_buf, sizeof g_buf,
                  "Ref silent: P1/P2 = %.1f (> 2), Ref 171 Hz: P2/P1 = %.1f (> 2)",
                  r1, r2);
    verdict(7, "feedback sign scenarios", pass, g_buf);
}

void criterion_8_antiphase()
{
    CpgConfig config;
    CpgNetwork cpg = build_cpg_ab(config, 1);
    SimResult result = run(cpg.net, {}, 5000.0, 1);
    const auto bursts_a = detect_bursts(
        population_rate(result.record("A"), config.n_cpg, 5000.0), config.n_cpg);
    const auto bursts_b = detect_bursts(
        population_rate(result.record("B"), config.n_cpg, 5000.0), config.n_cpg);
    const auto overlap = antiphase_overlap(bursts_a, bursts_b);
    const bool pass = overlap.has_value() && *overlap < 0.2;
    std::snprintf(g_buf, sizeof g_buf, "A/B burst overlap %.3f (< 0.2)",
                  overlap.value_or(-1.0));
    verdict(8, "anti-phase oscillation", pass, g_buf);
}

void criterion_9_unit_oracles()
{
    bool pass = true;
    std::string detail;

    // Closed-form ISI at the reference parameters, 1 ms grid.
    NeuronParams p;
    Population neuron = Population::lif("x", 1, p);
    std::vector<double> drive(1, 2.2);
    std::vector<double> spike_times;
    for (int k = 0; spike_times.size() < 4 && k < 10000; ++k)
        if (!step_lif(neuron, drive).empty()) spike_times.push_back(k * p.dt);
    const double isi = spike_times[2] - spike_times[1];
    const double ri = p.resistance() * 2.2;
    const double closed = p.tau_m * std::log(ri / (ri - (p.v_thresh - p.v_rest)));
    pass = pass && std::abs(isi - closed) <= p.dt;

    // Exact synaptic decay.
    Population decay_pop = Population::lif("d", 1, p);
    decay_pop.i_syn_e[0] = 5.0;
    std::vector<double> none(1, 0.0);
    for (int k = 0; k < 50; ++k) step_lif(decay_pop, none);
    const double expected = 5.0 * std::exp(-50.0 * p.dt / p.tau_syn_e);
    pass = pass && std::abs(decay_pop.i_syn_e[0] - expected) <= 1e-9 * expected;

    // Poisson counts within 3 sigma.
    Population src = Population::poisson("s", 50, 171.0);
    Rng rng = Rng::substream(1, "poisson");
    double count = 0;
    for (int k = 0; k < 1000; ++k) count += double(step_poisson(src, rng).size());
    pass = pass && std::abs(count - 8550.0) <= 3.0 * std::sqrt(8550.0);

    // Sensor regression spot values.
    pass = pass && std::abs(voltage_to_rate(3.5) - 10.0) < 1e-12 &&
           voltage_to_rate(0.0) == 0.0;

    std::snprintf(g_buf, sizeof g_buf,
                  "ISI %.0f ms vs closed form %.2f ms, decay and regression "
                  "exact, Poisson count %.0f",
                  isi, closed, count);
    verdict(9, "unit oracles", pass, g_buf);
}

void criterion_10_determinism(const std::string& out_root)
{
    ExperimentSpec spec;
    spec.name = "step_stimulus";
    spec.seeds = {1, 2};
    bool pass = true;
    std::vector<std::string> first;
    for (int round = 0; round < 2; ++round) {
        spec.out_dir = out_root + "/determinism_round" + std::to_string(round);
        run_experiment(spec);
        for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
            const std::string path = spec.out_dir + "/spikes_seed" +
                                     std::to_string(spec.seeds[s]) + ".csv";
            if (round == 0)
                first.push_back(slurp(path));
            else
                pass = pass && slurp(path) == first[s];
        }
    }
    verdict(10, "byte-identical re-runs", pass,
            pass ? "spike CSVs identical across re-runs"
                 : "spike CSVs differ between runs");
}

} // namespace

int main()
{
    const std::string out_root = "acceptance_out";
    fs::create_directories(out_root);

    criterion_1_isolated_frequency(out_root);
    criterion_2_drive_monotonicity(out_root);
    criterion_3_stability_sweep(out_root);
    criterion_4_step_adaptation(out_root);
    criterion_5_saturation(out_root);
    criterion_6_correlation(out_root);
    criterion_7_feedback_scenarios();
    criterion_8_antiphase();
    criterion_9_unit_oracles();
    criterion_10_determinism(out_root);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
