// neuron.hpp -- LIF membrane constants and the per-population state arrays.

#ifndef SCPG_NEURON_HPP
#define SCPG_NEURON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scpg {

// How the membrane equation is advanced over one timestep.
//   exact: closed-form solution of the linear ODE with the input current
//          held constant over the step.
//   euler: plain forward Euler. Kept for convergence checks; the exact
//          update is the default because the 1 ms step is coarse next to
//          tau_m = 6 ms and Euler biases the inter-spike interval by
//          several timesteps.
enum class Integrator { exact, euler };

struct NeuronParams {
    double v_rest = -55.0;    // mV
    double v_reset = -55.0;   // mV
    double v_thresh = 15.0;   // mV
    double tau_m = 6.0;       // ms
    double tau_syn_e = 5.0;   // ms
    double tau_syn_i = 8.75;  // ms
    double c_m = 0.1875;      // nF
    double i_bias = 0.0;      // nA, constant drive added to every neuron
    double dt = 1.0;          // ms
    Integrator integrator = Integrator::exact;

    // Absolute refractory period after a spike: the membrane is clamped
    // to v_reset and ignores all input for this long (synaptic currents
    // keep decaying underneath). 0 disables it.
    double t_refrac_ms = 0.0;

    // The constant i_bias is switched on only from this simulation time
    // onward. Used to stagger the startup of otherwise identical
    // populations; 0 means driven from the first step.
    double i_bias_onset_ms = 0.0;

    // Membrane resistance in MOhm (mV / nA); tau_m[ms] / c_m[nF].
    double resistance() const { return tau_m / c_m; }

    // Refractory period in whole timesteps.
    std::uint32_t refrac_steps() const
    {
        return static_cast<std::uint32_t>(t_refrac_ms / dt + 0.5);
    }

    void validate() const
    {
        if (tau_m <= 0 || tau_syn_e <= 0 || tau_syn_i <= 0)
            throw std::invalid_argument("time constants must be positive");
        if (c_m <= 0) throw std::invalid_argument("c_m must be positive");
        if (dt <= 0) throw std::invalid_argument("dt must be positive");
        if (v_thresh <= v_reset)
            throw std::invalid_argument("v_thresh must exceed v_reset");
        if (t_refrac_ms < 0)
            throw std::invalid_argument("t_refrac_ms must be >= 0");
        if (i_bias_onset_ms < 0)
            throw std::invalid_argument("i_bias_onset_ms must be >= 0");
    }
};

enum class PopulationKind { lif, poisson_source };

// Array-of-state for n identical neurons. For a poisson_source only
// `rate` matters; the state arrays stay empty.
struct Population {
    std::string id;
    std::uint32_t n = 0;
    PopulationKind kind = PopulationKind::lif;
    NeuronParams params;
    double rate = 0.0; // Hz, poisson_source only

    std::vector<double> v;       // mV
    std::vector<double> i_syn_e; // nA, decaying excitatory current
    std::vector<double> i_syn_i; // nA, decaying inhibitory current
    std::vector<std::uint32_t> refrac_left; // steps of refractoriness remaining

    static Population lif(std::string id, std::uint32_t n, const NeuronParams& p)
    {
        p.validate();
        if (n < 1) throw std::invalid_argument("population needs n >= 1");
        Population pop;
        pop.id = std::move(id);
        pop.n = n;
        pop.kind = PopulationKind::lif;
        pop.params = p;
        pop.reset_state();
        return pop;
    }

    static Population poisson(std::string id, std::uint32_t n, double rate_hz,
                              double dt_ms = 1.0)
    {
        if (n < 1) throw std::invalid_argument("population needs n >= 1");
        if (rate_hz < 0) throw std::invalid_argument("rate must be >= 0");
        Population pop;
        pop.id = std::move(id);
        pop.n = n;
        pop.kind = PopulationKind::poisson_source;
        pop.rate = rate_hz;
        pop.params.dt = dt_ms;
        return pop;
    }

    void reset_state()
    {
        if (kind == PopulationKind::lif) {
            v.assign(n, params.v_rest);
            i_syn_e.assign(n, 0.0);
            i_syn_i.assign(n, 0.0);
            refrac_left.assign(n, 0);
        }
    }
};

} // namespace scpg

#endif
