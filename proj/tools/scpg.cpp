// scpg -- command-line harness for the adaptive CPG experiments.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scpg/experiments.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"adaptive spiking CPG experiment harness"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list registered experiments");

    std::string name, config_path, out_dir = "out";
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::uint32_t replicas = 100;
    auto* run = app.add_subcommand("run", "run a named experiment");
    run->add_option("name", name, "experiment name")->required();
    run->add_option("--config", config_path, "CpgConfig JSON file");
    run->add_option("--seeds", seeds, "seed list")->delimiter(',');
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--replicas", replicas,
                    "replicas per point (population_size_sweep)");

    std::string bundle_dir;
    auto* rep = app.add_subcommand("report", "summarize an experiment bundle");
    rep->add_option("dir", bundle_dir, "bundle directory")->required();

    double cal_lo = 8.0, cal_hi = 15.0;
    std::uint64_t cal_seed = 1;
    std::string cal_config_path;
    auto* cal = app.add_subcommand(
        "calibrate", "grid-search the feedback weights for a frequency band");
    cal->add_option("--config", cal_config_path, "base CpgConfig JSON file");
    cal->add_option("--lo", cal_lo, "target band lower edge, Hz");
    cal->add_option("--hi", cal_hi, "target band upper edge, Hz");
    cal->add_option("--seed", cal_seed, "connectivity seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& info : scpg::list_experiments())
                std::cout << info.name << "  -  " << info.description << "\n";
            return 0;
        }
        if (*run) {
            scpg::ExperimentSpec spec;
            spec.name = name;
            if (!scpg::experiment_exists(name)) {
                std::cerr << "unknown experiment: " << name
                          << " (see `scpg list`)\n";
                return 2;
            }
            if (!config_path.empty()) spec.config = scpg::load_config(config_path);
            spec.seeds = seeds;
            spec.out_dir = out_dir;
            spec.replicas = replicas;
            auto result = scpg::run_experiment(spec);
            scpg::report(out_dir, std::cout);
            return result.passed ? 0 : 1;
        }
        if (*rep) return scpg::report(bundle_dir, std::cout) ? 0 : 1;
        if (*cal) {
            scpg::CpgConfig base;
            if (!cal_config_path.empty()) base = scpg::load_config(cal_config_path);
            auto result =
                scpg::calibrate_feedback_weights(base, cal_lo, cal_hi, cal_seed);
            std::cout << "measured band: [" << result.low_hz << ", "
                      << result.high_hz << "] Hz, score " << result.score << "\n"
                      << scpg::to_json(result.best).dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
