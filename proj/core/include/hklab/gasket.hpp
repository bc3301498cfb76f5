#pragma once

#include <cstdint>
#include <vector>

#include "hklab/graph.hpp"

namespace hklab {

// Subdivision plan for generalized Sierpinski gasket graphs SG(nu).
//
// nu_by_level[i][j] is the branching factor of the j-th cell at level i,
// cells ordered parent-major / child-minor, so nu_by_level[0] has exactly one
// entry and a cell with branching nu has nu(nu+1)/2 children at the next
// level. A constant plan nu_i == nu yields the standard SG(nu) graph; a
// per-level-constant plan gives the scale-irregular gasket; per-cell draws
// give the random recursive gasket.
struct GasketPlan {
    std::vector<std::vector<int>> nu_by_level;

    int levels() const { return static_cast<int>(nu_by_level.size()); }
    std::int64_t leaf_cell_count() const;

    // Every nu >= 2 and level sizes consistent with the child-count formula.
    void validate() const;
};

// nu_i == nu at every level.
GasketPlan constant_gasket_plan(int nu, int levels);

// One nu per level (scale-irregular gasket).
GasketPlan scale_irregular_plan(const std::vector<int>& level_nus);

// Random recursive gasket: every cell independently draws nu in {2,3} with
// P(nu=3) = weight3. Draws are made level by level in canonical cell order,
// so the plan is a pure function of (weights, levels, seed).
GasketPlan build_recursive_gasket(double weight2, double weight3, int levels,
                                  std::uint64_t seed);

// Level-n gasket graph: vertices are the triangle corners after the plan's
// subdivision rounds, edges join corners of a common smallest triangle.
// Corner coordinates are kept as exact integer multiples of a common
// denominator in the triangular-lattice basis, so coincident corners glue
// without any floating-point comparison. Vertices are labelled in
// lexicographic coordinate order. boundary = the three outer corners,
// root = the corner at the origin.
WeightedGraph build_gasket(const GasketPlan& plan);

}  // namespace hklab
