// cpg.hpp -- the five-population adaptive CPG: populations A and B form a
// half-center oscillator, populations 1 and 2 weigh the reference rate
// against the oscillator's own activity and push its frequency down or up.

#ifndef SCPG_CPG_HPP
#define SCPG_CPG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "scpg/engine.hpp"

namespace scpg {

struct CpgConfig {
    std::uint32_t n_cpg = 100; // neurons per population in A, B, 1, 2
    std::uint32_t n_ref = 50;
    NeuronParams neuron; // v_thresh 15 mV, tau_m 6 ms, c_m 0.1875 nF, dt 1 ms

    double p_exc = 0.25;
    double p_inh = 0.75;
    double w_self_exc = 4.0;  // nA, within-population excitation
    double w_self_inh = 1.5;  // nA, within-population inhibition
    double w_cross_inh = 1.5; // nA, A<->B and 1<->2 mutual inhibition

    // Post-burst lockout, applied to every LIF population as an absolute
    // refractory period. Without it the expected per-neuron coupling is
    // net inhibitory (0.25*n*4 < 0.75*n*1.5) while self-excitation
    // favors whichever population fired last, so the pair falls into a
    // winner-take-all state or drifts in phase instead of alternating.
    // The lockout forcibly ends each burst and sets the half-cycle.
    double t_lockout_ms = 120.0;

    // B's constant drive is switched on this much later than A's. The
    // symmetric all-at-rest start would otherwise make A and B burst in
    // phase; staggering the onset by roughly half a cycle hands the
    // rhythm to A first and the mutual inhibition keeps them anti-phase.
    double b_drive_delay_ms = 60.0;

    // Feedback path. These weights are calibrated against the 8-15 Hz
    // operating band (see calibrate_feedback_weights); every one of them
    // can be overridden from the config file. The pulsed inhibition from
    // population 1 has to be strong (it only stretches the inter-burst
    // pause logarithmically in the weight), while the tonic excitation
    // from population 2 has to stay far below the 0.4 mV margin between
    // the driven fixed point and threshold.
    double w_a1 = 4.0;    // A -> 1, excitatory
    double w_b2 = 1.5;    // B -> 2, inhibitory
    double w_ref1 = 1.0;  // Ref -> 1, inhibitory
    double w_ref2 = 0.17; // Ref -> 2, excitatory
    double w_1ab = 25.0;  // 1 -> A and 1 -> B, inhibitory
    double w_2ab = 0.15;  // 2 -> A and 2 -> B, excitatory

    double i_st = 2.2; // nA, constant drive into A and B only

    // Whether populations 1 and 2 mutually inhibit each other the way A
    // and B do (in addition to their own self-projections).
    bool couple_12 = true;

    void validate() const;
};

struct CpgNetwork {
    Network net;
    std::uint32_t a, b, p1, p2, ref; // population indices
    CpgConfig config;
};

// Wires populations A and B only (self-excitation, self-inhibition and
// mutual inhibition): the isolated half-center oscillator.
CpgNetwork build_cpg_ab(const CpgConfig& config, std::uint64_t seed);

// Full architecture: A, B, 1, 2 and the Poisson reference population.
// Connectivity is drawn from the "connectivity" substream of `seed`, so
// a given seed always realizes the same wiring regardless of stimulus.
CpgNetwork build_cpg(const CpgConfig& config, std::uint64_t seed);

// Expected projection names for the full network, in construction order.
std::vector<std::string> cpg_projection_names(bool couple_12 = true);

nlohmann::json to_json(const CpgConfig& config);
CpgConfig config_from_json(const nlohmann::json& j);
CpgConfig load_config(const std::string& path);

struct CalibrationResult {
    CpgConfig best;
    double low_hz = 0.0;  // measured frequency with Ref silent
    double high_hz = 0.0; // measured frequency with Ref at 171 Hz
    double score = 0.0;   // distance of [low, high] from the target band
};

// Grid-searches the six feedback weights for the configuration whose
// measured CPG frequency span sits closest to [target_lo, target_hi]
// under silent vs saturated Ref. Throws if no grid point responds
// monotonically (low < high), which would mean the wiring is wrong.
CalibrationResult calibrate_feedback_weights(const CpgConfig& base,
                                             double target_lo = 8.0,
                                             double target_hi = 15.0,
                                             std::uint64_t seed = 1);

} // namespace scpg

#endif
