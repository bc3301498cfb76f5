#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hklab/env.hpp"
#include "hklab/graph.hpp"

namespace hklab {

enum class KernelMethod { ExactIteration, Uniformization, MonteCarlo };

const char* to_string(KernelMethod m);

struct KernelPoint {
    double time = 0.0;
    double value = 0.0;
    double error = 0.0;  // truncation bound or CI half-width
};

// Samples of the heat kernel p_t(x,y) = P_x(X_t = y) / mu_y.
struct HeatKernelSeries {
    std::string model;
    int source = 0;
    int target = 0;
    KernelMethod method = KernelMethod::ExactIteration;
    std::vector<KernelPoint> points;
};

// Dyadic-geometric time grid t0 * 2^{k/points_per_octave}, capped at t_max.
std::vector<double> dyadic_time_grid(double t0, double t_max, int points_per_octave);

// Integer-step analogue (deduplicated; rounded to even steps if requested).
std::vector<int> dyadic_step_grid(int n0, int n_max, int points_per_octave, bool even_only);

// ---------- discrete-time simple random walk ----------

struct DiscreteOptions {
    // Steps to report; empty means every admissible n in [1, n_max]
    // (even n only on bipartite graphs).
    std::vector<int> report_steps;
    // Kill mass that reaches graph.boundary (absorbing truncation).
    bool absorb_boundary = false;
};

// p_n(x,y) by repeated sparse application of the transition operator.
HeatKernelSeries srw_kernel_discrete(const WeightedGraph& g, int x, int y, int n_max,
                                     const DiscreteOptions& opt = {});

// Full walk distributions P_x(X_n = .) at the requested steps.
std::vector<std::vector<double>> srw_distribution(const WeightedGraph& g, int x,
                                                  const std::vector<int>& steps,
                                                  bool absorb_boundary = false);

// ---------- continuous-time walk, unit mean holding ----------

// p_t(x,y) by uniformization; each reported value carries its Poisson
// truncation bound, kept below tol.
HeatKernelSeries ctmc_kernel(const WeightedGraph& g, int x, int y,
                             const std::vector<double>& times, double tol);

std::vector<std::vector<double>> ctmc_distribution(const WeightedGraph& g, int x,
                                                   const std::vector<double>& times,
                                                   double tol);

// ---------- Bouchaud trap chain on a certified window ----------

struct BtmOptions {
    int initial_window = 0;      // 0: sized from alpha and the largest time
    int max_window = 1 << 21;    // hard cap (the env window also caps growth)
};

// p_t(0, z) for every target z over the time grid, solved on an absorbing
// window [-K,K]. K is certified by doubling: accepted once doubling moves
// every reported value by less than exit_tol relative. Throws ResourceError
// (carrying the best K tried) when the certificate cannot be reached.
struct BtmProfile {
    std::vector<std::int64_t> targets;
    std::vector<double> times;
    std::vector<std::vector<double>> values;  // [target][time]
    std::vector<std::vector<double>> errors;  // doubling diff + Poisson bound
    int window = 0;                           // certified K
    double uniformization_rate = 0.0;
};

BtmProfile btm_profile(const TrapEnvironment& env, const std::vector<double>& t_grid,
                       const std::vector<std::int64_t>& targets, double exit_tol,
                       const BtmOptions& opt = {});

// On-diagonal convenience wrapper: p_t(0,0).
HeatKernelSeries btm_kernel(const TrapEnvironment& env, const std::vector<double>& t_grid,
                            double exit_tol, const BtmOptions& opt = {});

// Initial window the BTM solver starts from (also used by dry-run reports).
int btm_initial_window(double alpha, double t_max);

// ---------- Monte Carlo oracle ----------

struct McEstimate {
    double time = 0.0;
    double value = 0.0;
    double ci_half_width = 0.0;
    int samples = 0;
};

// Fraction of `samples` independent discrete walks at x after n steps, / mu_x.
McEstimate mc_return_probability(const WeightedGraph& g, int x, int n_steps, int samples,
                                 std::uint64_t seed, double ci_level = 0.95);

// Continuous-time walk with unit-mean exponential holding.
McEstimate mc_return_probability_ctmc(const WeightedGraph& g, int x, double t, int samples,
                                      std::uint64_t seed, double ci_level = 0.95);

// Bouchaud trap chain started at the origin.
McEstimate mc_return_probability(const TrapEnvironment& env, double t, int samples,
                                 std::uint64_t seed, double ci_level = 0.95);

}  // namespace hklab
