#include "scpg/projection.hpp"

#include <stdexcept>

namespace scpg {

Adjacency build_adjacency(std::uint32_t source_n, std::uint32_t target_n,
                          double probability, Rng& rng, bool exclude_self)
{
    if (probability < 0.0 || probability > 1.0)
        throw std::invalid_argument("connection probability outside [0,1]");

    Adjacency adj;
    adj.offsets.reserve(source_n + 1);
    adj.offsets.push_back(0);
    for (std::uint32_t i = 0; i < source_n; ++i) {
        for (std::uint32_t j = 0; j < target_n; ++j) {
            if (exclude_self && i == j) continue;
            if (rng.bernoulli(probability)) adj.targets.push_back(j);
        }
        adj.offsets.push_back(static_cast<std::uint32_t>(adj.targets.size()));
    }
    return adj;
}

} // namespace scpg
