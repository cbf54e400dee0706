#pragma once

#include <cstdint>
#include <cstddef>

#include "dtnet/dataset.hpp"

namespace dtnet {

struct MungeParams {
    double swap_prob = 0.5;   // p: chance each attribute is pulled toward the neighbor
    double local_scale = 1.0; // s: neighbor sd divisor for continuous attributes
    std::size_t target_size = 1;
    std::uint64_t seed = 0;
};

// Index of the closest other row: Euclidean distance over continuous features
// plus Hamming distance over categorical codes, lowest index on ties.
std::size_t nearest_neighbor(const Dataset& seed_rows, std::size_t i);

// Draws target_size rows from a nonparametric estimate of the seed set's
// feature distribution: cycle over seed rows, and per attribute with
// probability p replace the value by the nearest neighbor's (categorical) or
// by a Gaussian centered there with sd |e_a - e'_a| / s, clipped to [0,1]
// (continuous). Bit-identical output for a fixed (seed_set, params).
Dataset munge_generate(const Dataset& seed_set, const MungeParams& params);

}  // namespace dtnet
