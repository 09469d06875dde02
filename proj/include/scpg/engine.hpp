// engine.hpp -- clock-driven simulation kernel.
//
// Step order, fixed and relied on by the tests:
//   1. sample schedules at t (rates for sources, extra current for LIF)
//   2. step Poisson sources, in network order
//   3. step LIF populations, in network order (membrane update, threshold
//      + reset in the same step, then synaptic decay)
//   4. deliver this step's spikes along all projections
// Deliveries land on i_syn before the next step's membrane update, so a
// spike at step k first moves its targets at step k+1 (one-dt delay).

#ifndef SCPG_ENGINE_HPP
#define SCPG_ENGINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scpg/neuron.hpp"
#include "scpg/projection.hpp"
#include "scpg/rng.hpp"
#include "scpg/stimulus.hpp"

namespace scpg {

struct SpikeEvent {
    double time_ms;
    std::uint32_t neuron;
};

// Events sorted by time, ties broken by neuron index (the order the
// kernel emits them in). All times are multiples of dt.
struct SpikeRecord {
    std::string population;
    std::vector<SpikeEvent> events;
};

struct Network {
    std::vector<Population> populations;
    std::vector<Projection> projections;

    std::uint32_t add_population(Population pop);
    std::uint32_t add_projection(Projection proj);
    std::uint32_t index_of(const std::string& id) const;
    void validate() const;
};

// Per-population external drive: rate schedules for Poisson sources,
// current schedules (nA, added on top of i_bias) for LIF populations.
struct Schedule {
    std::map<std::uint32_t, StimulusProfile> rates;    // population index -> Hz
    std::map<std::uint32_t, StimulusProfile> currents; // population index -> nA
};

struct SimResult {
    std::vector<SpikeRecord> records; // one per population, network order
    double t_end_ms = 0.0;
    double dt_ms = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> edge_counts; // per projection

    const SpikeRecord& record(const std::string& population_id) const;
};

// One membrane update for a LIF population. Neurons reaching v_thresh are
// reported and reset to v_reset within the same step; synaptic currents
// decay afterwards. Throws on non-finite voltage (parameter blow-up).
std::vector<std::uint32_t> step_lif(Population& pop,
                                    std::span<const double> i_ext);

// One step of a Poisson source: each neuron spikes independently with
// probability rate * dt. Rejects rate * dt > 1 (timestep too coarse).
std::vector<std::uint32_t> step_poisson(Population& pop, Rng& rng);

// Adds `weight` onto the matching synaptic channel of every target of
// every listed spiking source neuron.
void deliver_spikes(const Projection& proj,
                    std::span<const std::uint32_t> spikes, Population& target);

// Runs the network from reset state for t_end_ms. Bit-reproducible for a
// given (network, schedule, seed); the Poisson stream is an independent
// substream of `seed` so it does not interact with connectivity draws.
SimResult run(Network& network, const Schedule& schedule, double t_end_ms,
              std::uint64_t seed);

} // namespace scpg

#endif
