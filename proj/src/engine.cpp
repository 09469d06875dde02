#include "scpg/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace scpg {

std::uint32_t Network::add_population(Population pop)
{
    populations.push_back(std::move(pop));
    return static_cast<std::uint32_t>(populations.size() - 1);
}

std::uint32_t Network::add_projection(Projection proj)
{
    projections.push_back(std::move(proj));
    return static_cast<std::uint32_t>(projections.size() - 1);
}

std::uint32_t Network::index_of(const std::string& id) const
{
    for (std::uint32_t i = 0; i < populations.size(); ++i)
        if (populations[i].id == id) return i;
    throw std::out_of_range("no population named " + id);
}

void Network::validate() const
{
    std::optional<double> dt;
    for (const auto& pop : populations) {
        if (pop.kind != PopulationKind::lif) continue;
        if (dt && *dt != pop.params.dt)
            throw std::invalid_argument("mismatched dt across populations");
        dt = pop.params.dt;
    }
    for (const auto& proj : projections) {
        if (proj.source >= populations.size() || proj.target >= populations.size())
            throw std::invalid_argument("projection references missing population");
        const auto& src = populations[proj.source];
        const auto& tgt = populations[proj.target];
        if (tgt.kind != PopulationKind::lif)
            throw std::invalid_argument("projection targets a spike source");
        if (proj.adjacency.offsets.size() != src.n + 1)
            throw std::invalid_argument("adjacency does not match source size");
        for (std::uint32_t j : proj.adjacency.targets)
            if (j >= tgt.n)
                throw std::invalid_argument("adjacency references missing neuron");
    }
}

const SpikeRecord& SimResult::record(const std::string& population_id) const
{
    for (const auto& rec : records)
        if (rec.population == population_id) return rec;
    throw std::out_of_range("no spike record for " + population_id);
}

std::vector<std::uint32_t> step_lif(Population& pop, std::span<const double> i_ext)
{
    if (pop.kind != PopulationKind::lif)
        throw std::invalid_argument("step_lif on a non-LIF population");
    if (i_ext.size() != pop.n)
        throw std::invalid_argument("i_ext length does not match population");

    const NeuronParams& p = pop.params;
    const double r = p.resistance();
    const double decay_m = std::exp(-p.dt / p.tau_m);
    const double decay_e = std::exp(-p.dt / p.tau_syn_e);
    const double decay_i = std::exp(-p.dt / p.tau_syn_i);
    const std::uint32_t refrac = p.refrac_steps();

    std::vector<std::uint32_t> spikes;
    for (std::uint32_t i = 0; i < pop.n; ++i) {
        // Refractory neurons stay clamped at v_reset; their synaptic
        // currents keep decaying so input arriving during the clamp has
        // mostly faded by the time integration resumes.
        if (pop.refrac_left[i] > 0) {
            --pop.refrac_left[i];
            pop.i_syn_e[i] *= decay_e;
            pop.i_syn_i[i] *= decay_i;
            continue;
        }
        const double i_total = pop.i_syn_e[i] - pop.i_syn_i[i] + i_ext[i];
        if (p.integrator == Integrator::euler) {
            pop.v[i] += p.dt * (p.v_rest - pop.v[i] + r * i_total) / p.tau_m;
        } else {
            const double v_inf = p.v_rest + r * i_total;
            pop.v[i] = v_inf + (pop.v[i] - v_inf) * decay_m;
        }
        if (!std::isfinite(pop.v[i]))
            throw std::runtime_error("non-finite voltage in population " + pop.id);
        if (pop.v[i] >= p.v_thresh) {
            spikes.push_back(i);
            pop.v[i] = p.v_reset;
            pop.refrac_left[i] = refrac;
        }
        pop.i_syn_e[i] *= decay_e;
        pop.i_syn_i[i] *= decay_i;
    }
    return spikes;
}

std::vector<std::uint32_t> step_poisson(Population& pop, Rng& rng)
{
    if (pop.kind != PopulationKind::poisson_source)
        throw std::invalid_argument("step_poisson on a non-source population");
    const double p_spike = pop.rate * pop.params.dt * 1e-3;
    if (p_spike > 1.0)
        throw std::invalid_argument("rate * dt > 1: timestep too coarse for " +
                                    pop.id);
    std::vector<std::uint32_t> spikes;
    for (std::uint32_t i = 0; i < pop.n; ++i)
        if (rng.bernoulli(p_spike)) spikes.push_back(i);
    return spikes;
}

void deliver_spikes(const Projection& proj,
                    std::span<const std::uint32_t> spikes, Population& target)
{
    auto& channel =
        proj.sign == Sign::excitatory ? target.i_syn_e : target.i_syn_i;
    for (std::uint32_t i : spikes) {
        const std::uint32_t lo = proj.adjacency.offsets[i];
        const std::uint32_t hi = proj.adjacency.offsets[i + 1];
        for (std::uint32_t e = lo; e < hi; ++e)
            channel[proj.adjacency.targets[e]] += proj.weight;
    }
}

SimResult run(Network& network, const Schedule& schedule, double t_end_ms,
              std::uint64_t seed)
{
    network.validate();
    if (t_end_ms <= 0.0) throw std::invalid_argument("t_end must be positive");

    double dt = 1.0;
    for (const auto& pop : network.populations)
        if (pop.kind == PopulationKind::lif) dt = pop.params.dt;

    const auto n_steps = static_cast<std::uint64_t>(std::llround(t_end_ms / dt));
    if (std::abs(n_steps * dt - t_end_ms) > 1e-9)
        throw std::invalid_argument("t_end must be a multiple of dt");

    // Reject coarse-timestep rate requests up front, not mid-run.
    for (const auto& [idx, profile] : schedule.rates)
        for (const auto& seg : profile.as_rate().segments)
            if (seg.value * dt * 1e-3 > 1.0)
                throw std::invalid_argument("scheduled rate * dt > 1");

    for (auto& pop : network.populations) pop.reset_state();

    Rng poisson_rng = Rng::substream(seed, "poisson");

    SimResult result;
    result.t_end_ms = t_end_ms;
    result.dt_ms = dt;
    result.seed = seed;
    for (const auto& pop : network.populations)
        result.records.push_back({pop.id, {}});
    for (const auto& proj : network.projections)
        result.edge_counts.push_back(proj.adjacency.edge_count());

    std::vector<std::vector<std::uint32_t>> step_spikes(network.populations.size());
    std::vector<double> i_ext;

    for (std::uint64_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;

        // 1. schedules
        for (const auto& [idx, profile] : schedule.rates)
            network.populations[idx].rate = profile.as_rate().sample(t);

        // 2. sources
        for (std::uint32_t p = 0; p < network.populations.size(); ++p) {
            auto& pop = network.populations[p];
            if (pop.kind != PopulationKind::poisson_source) continue;
            step_spikes[p] = step_poisson(pop, poisson_rng);
        }

        // 3. LIF populations
        for (std::uint32_t p = 0; p < network.populations.size(); ++p) {
            auto& pop = network.populations[p];
            if (pop.kind != PopulationKind::lif) continue;
            double extra = 0.0;
            if (auto it = schedule.currents.find(p); it != schedule.currents.end())
                extra = it->second.sample(t);
            const double bias =
                t >= pop.params.i_bias_onset_ms ? pop.params.i_bias : 0.0;
            i_ext.assign(pop.n, bias + extra);
            step_spikes[p] = step_lif(pop, i_ext);
        }

        // 4. deliveries (take effect next step)
        for (const auto& proj : network.projections)
            deliver_spikes(proj, step_spikes[proj.source],
                           network.populations[proj.target]);

        for (std::uint32_t p = 0; p < network.populations.size(); ++p)
            for (std::uint32_t i : step_spikes[p])
                result.records[p].events.push_back({t, i});
    }
    return result;
}

} // namespace scpg
