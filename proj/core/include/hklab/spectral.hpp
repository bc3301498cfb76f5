#pragma once

#include <map>
#include <string>
#include <vector>

#include "hklab/graph.hpp"

namespace hklab {

enum class BoundaryCondition { Neumann, Dirichlet };

const char* to_string(BoundaryCondition bc);

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending
    BoundaryCondition bc = BoundaryCondition::Neumann;
    std::string graph_descriptor;
};

// Eigenvalues of the combinatorial (conductance-weighted) graph Laplacian.
// Neumann keeps the full matrix; Dirichlet removes the boundary rows and
// columns (graph.boundary must be non-empty). Dense symmetric solve; graphs
// beyond the dense budget raise ResourceError. With verify_residuals the
// eigenpairs are recomputed with vectors and ||Lv - lambda v|| <= 1e-8 ||v||
// is checked per pair.
SpectrumResult laplacian_spectrum(const WeightedGraph& g, BoundaryCondition bc,
                                  bool verify_residuals = false);

// Number of eigenvalues <= x, with multiplicity.
int counting_function(const SpectrumResult& s, double x);

struct WeylRatioSeries {
    std::vector<double> x;
    std::vector<double> ratio;        // rho(x) / x^exponent
    double decade_lo = 0.0;           // summarized top reliable decade
    double decade_hi = 0.0;
    double max_ratio = 0.0;           // over that decade
    double min_ratio = 0.0;
    double max_over_min = 0.0;
};

// Ratio series over the given geometric grid plus a max/min summary over the
// "top reliable decade": the decade ending at the largest grid point that
// still lies in the bottom tenth of the spectrum (counting function <= N/10),
// which keeps the summary inside the scaling regime at every level.
WeylRatioSeries weyl_ratio(const SpectrumResult& s, double exponent,
                           const std::vector<double>& x_grid);

// Exact count of Laplacian eigenvalues <= x without computing the spectrum:
// inertia of the LDL^T factorization of L - xI (spectrum slicing). Reaches
// boxes far beyond the dense budget; cross-validated against dense spectra
// by the tests.
int eigenvalue_count_below(const WeightedGraph& g, BoundaryCondition bc, double x);

// Clusters eigenvalues within tol and histograms the cluster sizes.
// tol must stay below the median positive spectral gap.
std::map<int, int> multiplicity_histogram(const SpectrumResult& s, double tol);

// Geometric grid with the given resolution (points per decade).
std::vector<double> geometric_grid(double lo, double hi, int points_per_decade);

// Default Weyl grid: from the smallest positive eigenvalue to the largest.
std::vector<double> default_weyl_grid(const SpectrumResult& s, int points_per_decade = 64);

}  // namespace hklab
