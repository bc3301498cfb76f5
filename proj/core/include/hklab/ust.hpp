#pragma once

#include <cstdint>

#include "hklab/graph.hpp"

namespace hklab {

// Uniform spanning tree of a connected graph, sampled exactly by Wilson's
// loop-erased random walk algorithm. The walk picks neighbours proportionally
// to conductance. The returned tree keeps the input vertex ids, coordinates
// and root; its measure is the degree measure of the tree itself.
WeightedGraph uniform_spanning_tree(const WeightedGraph& g, std::uint64_t seed);

// UST of the box Lambda_N = [-N,N]^2 of Z^2 with wired boundary: all box
// boundary vertices are identified to a single wired vertex during sampling.
// Vertices: the (2N-1)^2 interior lattice points in row-major order followed
// by the wired vertex; root = the origin; boundary = {wired}.
WeightedGraph wilson_ust(int N, std::uint64_t seed);

// Free-boundary variant: the plain UST of the (2N+1)x(2N+1) grid graph.
WeightedGraph wilson_ust_free(int N, std::uint64_t seed);

// Exact number of spanning trees via an integer matrix-tree determinant
// (fraction-free Bareiss elimination). Requires unit conductances and at
// most ~200 vertices; throws ResourceError if the count overflows the exact
// integer range.
std::int64_t spanning_tree_count(const WeightedGraph& g);

}  // namespace hklab
