// projection.hpp -- probabilistic all-to-all connection groups with
// fixed (static) adjacency.

#ifndef SCPG_PROJECTION_HPP
#define SCPG_PROJECTION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "scpg/rng.hpp"

namespace scpg {

enum class Sign { excitatory, inhibitory };

// Adjacency in CSR form: targets of source neuron i are
// targets[offsets[i] .. offsets[i+1]).
struct Adjacency {
    std::vector<std::uint32_t> offsets; // length source_n + 1
    std::vector<std::uint32_t> targets;

    std::size_t edge_count() const { return targets.size(); }
};

// Each ordered pair (i, j) is included independently with `probability`;
// i == j is skipped when exclude_self is set (recurrent projections).
Adjacency build_adjacency(std::uint32_t source_n, std::uint32_t target_n,
                          double probability, Rng& rng,
                          bool exclude_self = false);

struct Projection {
    std::string name;
    std::uint32_t source = 0; // population index within the network
    std::uint32_t target = 0;
    Sign sign = Sign::excitatory;
    double probability = 0.0;
    double weight = 0.0; // nA per presynaptic spike, >= 0
    Adjacency adjacency;
};

} // namespace scpg

#endif
