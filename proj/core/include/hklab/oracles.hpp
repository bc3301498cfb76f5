#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hklab/graph.hpp"
#include "hklab/iic.hpp"

namespace hklab {

struct OracleResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// ---- independent reference computations ----

// Exact law of the cluster restricted to the first `depth` levels of the
// n0-ary tree under the conditioned-to-survive percolation measure, by brute
// enumeration of all edge configurations (depth <= 2, n0 <= 4 only).
// Keys are canonical per-vertex child bitmask encodings.
std::map<std::string, double> iic_exact_atoms(int n0, int depth);

// Canonical encoding of a sampled IIC truncation (first `depth` levels),
// matching the keys of iic_exact_atoms.
std::string iic_config_encoding(const IicSample& sample, int n0, int depth);

// P_x(X_t = y) for the continuous-time walk via a dense symmetric
// eigendecomposition of the generator (independent of uniformization).
double dense_ctmc_transition(const WeightedGraph& g, int x, int y, double t);

// Dirichlet eigenvalues of the path graph on n interior vertices:
// 2(1 - cos(k pi / (n+1))).
std::vector<double> path_dirichlet_eigenvalues(int n);

// Canonical identity of a sampled spanning tree (sorted edge list), for
// frequency counting.
std::string spanning_tree_key(const WeightedGraph& tree);

// ---- oracle suite ----

// Runs every oracle check with the given seed; each result carries one line
// of detail. All checks must pass.
std::vector<OracleResult> run_oracle_suite(std::uint64_t seed);

// Individual checks, exposed for targeted tests.
OracleResult check_iic_sampler(int n0, int samples, std::uint64_t seed);
OracleResult check_wilson_on_cycle(int samples, std::uint64_t seed);
OracleResult check_wilson_on_grid3(int samples, std::uint64_t seed);
OracleResult check_two_state_kernel();
OracleResult check_uniformization_vs_dense(std::uint64_t seed);
OracleResult check_series_invariants(std::uint64_t seed);
OracleResult check_chapman_kolmogorov();
OracleResult check_fit_on_power_law();
OracleResult check_oscillation_detector();
OracleResult check_path_spectrum();
OracleResult check_matrix_tree_cases();

}  // namespace hklab
