#pragma once

#include <cstdint>

#include "hklab/graph.hpp"

namespace hklab {

// A sampled IIC truncation together with its embedding into the n0-ary tree
// (parent, child slot and level per vertex), which the enumeration oracle
// needs to distinguish sibling order.
struct IicSample {
    WeightedGraph graph;
    std::vector<int> parent;  // -1 for the root
    std::vector<int> slot;    // child slot within the parent; -1 for the root
    std::vector<int> level;
};

// Samples the incipient infinite cluster of critical percolation
// (p_c = 1/n0) on the rooted n0-ary tree, truncated at `depth` levels.
//
// The tree is generated level by level from the exact conditional law of the
// IIC measure: given m vertices at the current level, the next generation is
// the size-biased product of independent Binomial(n0, p_c) child sets, i.e.
// one uniformly chosen vertex gets one uniformly chosen child unconditionally
// and every other child slot opens independently with probability p_c. The
// sampled tree reaches `depth` with probability one.
//
// Draws are consumed in a fixed level-major order, so deepening the
// truncation with the same seed extends the shallower tree vertex for vertex.
//
// Returned graph: vertices in BFS order (root = 0), unit conductances,
// measure = degree in the truncated tree, boundary = the vertices at level
// `depth`.
IicSample build_iic_sample(int n0, int depth, std::uint64_t seed);

WeightedGraph build_iic(int n0, int depth, std::uint64_t seed);

}  // namespace hklab
