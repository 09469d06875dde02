#include "scpg/cpg.hpp"

#include <fstream>
#include <stdexcept>

#include "scpg/analysis.hpp"

namespace scpg {

void CpgConfig::validate() const
{
    neuron.validate();
    if (n_cpg < 1 || n_ref < 1)
        throw std::invalid_argument("population sizes must be >= 1");
    if (p_exc < 0 || p_exc > 1 || p_inh < 0 || p_inh > 1)
        throw std::invalid_argument("probabilities must lie in [0,1]");
    for (double w : {w_self_exc, w_self_inh, w_cross_inh, w_a1, w_b2, w_ref1,
                     w_ref2, w_1ab, w_2ab})
        if (w < 0) throw std::invalid_argument("weights must be >= 0");
    if (i_st < 0) throw std::invalid_argument("i_st must be >= 0");
    if (t_lockout_ms < 0)
        throw std::invalid_argument("t_lockout_ms must be >= 0");
    if (b_drive_delay_ms < 0)
        throw std::invalid_argument("b_drive_delay_ms must be >= 0");
}

namespace {

void add_projection(Network& net, Rng& rng, const std::string& name,
                    std::uint32_t src, std::uint32_t tgt, Sign sign, double p,
                    double w)
{
    Projection proj;
    proj.name = name;
    proj.source = src;
    proj.target = tgt;
    proj.sign = sign;
    proj.probability = p;
    proj.weight = w;
    const auto& s = net.populations[src];
    const auto& t = net.populations[tgt];
    proj.adjacency =
        build_adjacency(s.n, t.n, p, rng, /*exclude_self=*/src == tgt);
    net.add_projection(std::move(proj));
}

// Self-excitation, self-inhibition and mutual inhibition between a pair
// of populations (the A/B pattern, reused for 1/2).
void wire_half_center(Network& net, Rng& rng, const CpgConfig& c,
                      std::uint32_t x, std::uint32_t y, bool cross)
{
    const std::string xi = net.populations[x].id;
    const std::string yi = net.populations[y].id;
    add_projection(net, rng, xi + "_self_exc", x, x, Sign::excitatory, c.p_exc,
                   c.w_self_exc);
    add_projection(net, rng, xi + "_self_inh", x, x, Sign::inhibitory, c.p_inh,
                   c.w_self_inh);
    add_projection(net, rng, yi + "_self_exc", y, y, Sign::excitatory, c.p_exc,
                   c.w_self_exc);
    add_projection(net, rng, yi + "_self_inh", y, y, Sign::inhibitory, c.p_inh,
                   c.w_self_inh);
    if (cross) {
        add_projection(net, rng, xi + "_to_" + yi, x, y, Sign::inhibitory,
                       c.p_inh, c.w_cross_inh);
        add_projection(net, rng, yi + "_to_" + xi, y, x, Sign::inhibitory,
                       c.p_inh, c.w_cross_inh);
    }
}

} // namespace

CpgNetwork build_cpg_ab(const CpgConfig& config, std::uint64_t seed)
{
    config.validate();
    Rng rng = Rng::substream(seed, "connectivity");

    CpgNetwork cpg;
    cpg.config = config;

    NeuronParams driven = config.neuron;
    driven.i_bias = config.i_st;
    driven.t_refrac_ms = config.t_lockout_ms;

    cpg.a = cpg.net.add_population(Population::lif("A", config.n_cpg, driven));
    driven.i_bias_onset_ms = config.b_drive_delay_ms;
    cpg.b = cpg.net.add_population(Population::lif("B", config.n_cpg, driven));
    cpg.p1 = cpg.p2 = cpg.ref = UINT32_MAX;

    wire_half_center(cpg.net, rng, config, cpg.a, cpg.b, /*cross=*/true);
    return cpg;
}

CpgNetwork build_cpg(const CpgConfig& config, std::uint64_t seed)
{
    CpgNetwork cpg = build_cpg_ab(config, seed);
    // Feedback wiring draws from its own substream so the realized A/B
    // oscillator is identical with and without the feedback path.
    Rng rng = Rng::substream(seed, "connectivity-feedback");
    const CpgConfig& c = config;
    Network& net = cpg.net;

    NeuronParams quiet = config.neuron;
    quiet.i_bias = 0.0; // only A and B receive the constant drive
    quiet.t_refrac_ms = config.t_lockout_ms;

    cpg.p1 = net.add_population(Population::lif("1", c.n_cpg, quiet));
    cpg.p2 = net.add_population(Population::lif("2", c.n_cpg, quiet));
    cpg.ref = net.add_population(
        Population::poisson("Ref", c.n_ref, 0.0, c.neuron.dt));

    wire_half_center(net, rng, c, cpg.p1, cpg.p2, /*cross=*/c.couple_12);

    add_projection(net, rng, "A_to_1", cpg.a, cpg.p1, Sign::excitatory, c.p_exc,
                   c.w_a1);
    add_projection(net, rng, "B_to_2", cpg.b, cpg.p2, Sign::inhibitory, c.p_inh,
                   c.w_b2);
    add_projection(net, rng, "Ref_to_1", cpg.ref, cpg.p1, Sign::inhibitory,
                   c.p_inh, c.w_ref1);
    add_projection(net, rng, "Ref_to_2", cpg.ref, cpg.p2, Sign::excitatory,
                   c.p_exc, c.w_ref2);
    add_projection(net, rng, "1_to_A", cpg.p1, cpg.a, Sign::inhibitory, c.p_inh,
                   c.w_1ab);
    add_projection(net, rng, "1_to_B", cpg.p1, cpg.b, Sign::inhibitory, c.p_inh,
                   c.w_1ab);
    add_projection(net, rng, "2_to_A", cpg.p2, cpg.a, Sign::excitatory, c.p_exc,
                   c.w_2ab);
    add_projection(net, rng, "2_to_B", cpg.p2, cpg.b, Sign::excitatory, c.p_exc,
                   c.w_2ab);

    cpg.net.validate();
    return cpg;
}

std::vector<std::string> cpg_projection_names(bool couple_12)
{
    std::vector<std::string> names = {
        "A_self_exc", "A_self_inh", "B_self_exc", "B_self_inh",
        "A_to_B",     "B_to_A",     "1_self_exc", "1_self_inh",
        "2_self_exc", "2_self_inh",
    };
    if (couple_12) {
        names.push_back("1_to_2");
        names.push_back("2_to_1");
    }
    for (const char* n : {"A_to_1", "B_to_2", "Ref_to_1", "Ref_to_2", "1_to_A",
                          "1_to_B", "2_to_A", "2_to_B"})
        names.push_back(n);
    return names;
}

nlohmann::json to_json(const CpgConfig& c)
{
    return nlohmann::json{
        {"n_cpg", c.n_cpg},
        {"n_ref", c.n_ref},
        {"neuron",
         {{"v_rest_mV", c.neuron.v_rest},
          {"v_reset_mV", c.neuron.v_reset},
          {"v_thresh_mV", c.neuron.v_thresh},
          {"tau_m_ms", c.neuron.tau_m},
          {"tau_syn_e_ms", c.neuron.tau_syn_e},
          {"tau_syn_i_ms", c.neuron.tau_syn_i},
          {"c_m_nF", c.neuron.c_m},
          {"dt_ms", c.neuron.dt},
          {"integrator", c.neuron.integrator == Integrator::exact ? "exact"
                                                                  : "euler"}}},
        {"p_exc", c.p_exc},
        {"p_inh", c.p_inh},
        {"w_self_exc_nA", c.w_self_exc},
        {"w_self_inh_nA", c.w_self_inh},
        {"w_cross_inh_nA", c.w_cross_inh},
        {"w_a1_nA", c.w_a1},
        {"w_b2_nA", c.w_b2},
        {"w_ref1_nA", c.w_ref1},
        {"w_ref2_nA", c.w_ref2},
        {"w_1ab_nA", c.w_1ab},
        {"w_2ab_nA", c.w_2ab},
        {"i_st_nA", c.i_st},
        {"t_lockout_ms", c.t_lockout_ms},
        {"b_drive_delay_ms", c.b_drive_delay_ms},
        {"couple_12", c.couple_12},
    };
}

CpgConfig config_from_json(const nlohmann::json& j)
{
    CpgConfig c;
    c.n_cpg = j.value("n_cpg", c.n_cpg);
    c.n_ref = j.value("n_ref", c.n_ref);
    if (j.contains("neuron")) {
        const auto& n = j.at("neuron");
        c.neuron.v_rest = n.value("v_rest_mV", c.neuron.v_rest);
        c.neuron.v_reset = n.value("v_reset_mV", c.neuron.v_reset);
        c.neuron.v_thresh = n.value("v_thresh_mV", c.neuron.v_thresh);
        c.neuron.tau_m = n.value("tau_m_ms", c.neuron.tau_m);
        c.neuron.tau_syn_e = n.value("tau_syn_e_ms", c.neuron.tau_syn_e);
        c.neuron.tau_syn_i = n.value("tau_syn_i_ms", c.neuron.tau_syn_i);
        c.neuron.c_m = n.value("c_m_nF", c.neuron.c_m);
        c.neuron.dt = n.value("dt_ms", c.neuron.dt);
        const std::string integ = n.value("integrator", "exact");
        if (integ == "exact")
            c.neuron.integrator = Integrator::exact;
        else if (integ == "euler")
            c.neuron.integrator = Integrator::euler;
        else
            throw std::invalid_argument("integrator must be 'exact' or 'euler'");
    }
    c.p_exc = j.value("p_exc", c.p_exc);
    c.p_inh = j.value("p_inh", c.p_inh);
    c.w_self_exc = j.value("w_self_exc_nA", c.w_self_exc);
    c.w_self_inh = j.value("w_self_inh_nA", c.w_self_inh);
    c.w_cross_inh = j.value("w_cross_inh_nA", c.w_cross_inh);
    c.w_a1 = j.value("w_a1_nA", c.w_a1);
    c.w_b2 = j.value("w_b2_nA", c.w_b2);
    c.w_ref1 = j.value("w_ref1_nA", c.w_ref1);
    c.w_ref2 = j.value("w_ref2_nA", c.w_ref2);
    c.w_1ab = j.value("w_1ab_nA", c.w_1ab);
    c.w_2ab = j.value("w_2ab_nA", c.w_2ab);
    c.i_st = j.value("i_st_nA", c.i_st);
    c.t_lockout_ms = j.value("t_lockout_ms", c.t_lockout_ms);
    c.b_drive_delay_ms = j.value("b_drive_delay_ms", c.b_drive_delay_ms);
    c.couple_12 = j.value("couple_12", c.couple_12);
    c.validate();
    return c;
}

CpgConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

namespace {

double measure_frequency(const CpgConfig& config, double ref_rate_hz,
                         std::uint64_t seed, double t_end_ms = 4000.0)
{
    CpgNetwork cpg = build_cpg(config, seed);
    Schedule schedule;
    schedule.rates[cpg.ref] = constant_profile(ref_rate_hz, t_end_ms);
    SimResult result = run(cpg.net, schedule, t_end_ms, seed);
    // Skip the first second of transient.
    const double skip = 1000.0;
    auto trim = [&](const std::string& id) {
        SpikeRecord rec{id, {}};
        for (const auto& ev : result.record(id).events)
            if (ev.time_ms >= skip) rec.events.push_back({ev.time_ms - skip, ev.neuron});
        return rec;
    };
    const double span = t_end_ms - skip;
    auto rate_a = population_rate(trim("A"), config.n_cpg, span);
    auto rate_b = population_rate(trim("B"), config.n_cpg, span);
    return cpg_frequency(detect_bursts(rate_a, config.n_cpg),
                         detect_bursts(rate_b, config.n_cpg), span);
}

} // namespace

CalibrationResult calibrate_feedback_weights(const CpgConfig& base,
                                             double target_lo, double target_hi,
                                             std::uint64_t seed)
{
    if (target_lo >= target_hi)
        throw std::invalid_argument("target band must be ordered lo < hi");

    // Small documented grid around the shipped weights. The two paths
    // into A/B act on very different scales and are searched separately:
    // pulsed inhibition from population 1 needs tens of nA before it
    // stretches the inter-burst pause appreciably (the delay grows only
    // logarithmically in the weight), while tonic excitation from
    // population 2 must stay at the 0.1 nA scale or it pins the rhythm
    // at its ceiling.
    const std::vector<double> grid_ref1 = {0.5, 1.0, 2.0};
    const std::vector<double> grid_ref2 = {0.1, 0.17, 0.25};
    const std::vector<double> grid_1ab = {10.0, 25.0, 50.0};
    const std::vector<double> grid_2ab = {0.1, 0.15, 0.25};

    CalibrationResult best;
    bool found = false;
    for (double ref1 : grid_ref1)
        for (double ref2 : grid_ref2)
            for (double w1 : grid_1ab)
                for (double w2 : grid_2ab) {
                    CpgConfig c = base;
                    c.w_ref1 = ref1;
                    c.w_ref2 = ref2;
                    c.w_1ab = w1;
                    c.w_2ab = w2;
                    const double lo = measure_frequency(c, 0.0, seed);
                    const double hi = measure_frequency(c, 171.0, seed);
                    if (hi <= lo) continue; // not a monotone response
                    const double score = std::abs(lo - target_lo) +
                                         std::abs(hi - target_hi);
                    if (!found || score < best.score) {
                        best = {c, lo, hi, score};
                        found = true;
                    }
                }
    if (!found)
        throw std::runtime_error(
            "no grid point produced a monotone Ref response; wiring is broken");
    return best;
}

} // namespace scpg
