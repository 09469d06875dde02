// experiments.hpp -- named, reproducible experiment runs with persisted
// CSV/JSON bundles and bound checks.

#ifndef SCPG_EXPERIMENTS_HPP
#define SCPG_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "scpg/analysis.hpp"
#include "scpg/cpg.hpp"

namespace scpg {

struct ExperimentSpec {
    std::string name;
    CpgConfig config;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string out_dir = "out";
    std::uint32_t replicas = 100; // population_size_sweep only
};

struct BoundCheck {
    std::string name;
    double measured = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool pass = false;
};

struct ExperimentResult {
    std::string name;
    std::vector<BoundCheck> checks;
    bool passed = false;
    nlohmann::json summary;
};

struct ExperimentInfo {
    std::string name;
    std::string description;
};

// Stable, documented ordering.
const std::vector<ExperimentInfo>& list_experiments();
bool experiment_exists(const std::string& name);

// Runs a registered experiment, writes spike CSVs, derived-series CSVs
// and summary.json into spec.out_dir, and returns the bound checks.
// Throws on an unknown name or unwritable output directory.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Re-reads a bundle directory written by run_experiment and renders a
// measured-vs-expected table; returns overall pass/fail.
bool report(const std::string& bundle_dir, std::ostream& out);

// Spike CSV with deterministic row order: header `population,neuron,time_ms`,
// populations in network order, events in emission order.
void write_spike_csv(const std::string& path, const SimResult& result);

} // namespace scpg

#endif
