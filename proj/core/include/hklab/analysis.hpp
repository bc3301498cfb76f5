#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hklab/env.hpp"
#include "hklab/kernel.hpp"

namespace hklab {

struct ExponentFit {
    double slope = 0.0;       // decay exponent: -log p ~ slope * log t
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int n_points = 0;
    std::vector<double> residuals;
};

// Least-squares slope of -log p against log t over [t_lo, t_hi].
// Needs >= 8 points in the window, all values positive.
ExponentFit fit_exponent(const HeatKernelSeries& s, double t_lo, double t_hi);

struct DecadeRatio {
    double t_lo = 0.0;        // decade start
    double max_over_min = 0.0;
};

struct OscillationStats {
    double theta = 0.0;
    std::vector<DecadeRatio> per_decade;  // of the normalized series t^theta p_t
    double max_over_min = 0.0;            // over the full series
    double dominant_log_period = 0.0;     // natural-log units; 0 if none found
    double peak_power = 0.0;
    double noise_floor = 0.0;             // median periodogram power
    bool peak_detected = false;
};

// Normalizes by t^theta, then runs a Hann-windowed periodogram of the
// detrended log-normalized series against log t. The series must span at
// least two decades.
OscillationStats oscillation_profile(const HeatKernelSeries& s, double theta);

// Family of quenched kernel solves indexed by a per-member seed.
using SeriesSampler = std::function<HeatKernelSeries(std::uint64_t member_seed)>;

struct MeanSeries {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> ci_half;   // 95% CI half-width of the mean
    std::vector<double> member_min;
    std::vector<double> member_max;
    int members = 0;
};

// Pointwise mean over M independent members; member seeds are derived from
// the master seed by index so that M can grow without reshuffling. Member
// failures are rethrown with the member seed attached. Reduction order is
// fixed regardless of `jobs`.
MeanSeries annealed_kernel(const SeriesSampler& family, const std::vector<double>& t_grid,
                           int M, std::uint64_t master_seed, int jobs = 1);

struct QuantileBand {
    std::vector<double> times;
    std::vector<double> q05, q25, q50, q75, q95;
    int members = 0;
};

// Per-time empirical quantiles of normalizer(t)^{-1} * p_t across members.
QuantileBand quantile_band(const SeriesSampler& family, const std::vector<double>& t_grid,
                           int M, std::uint64_t master_seed,
                           const std::function<double(double)>& normalizer, int jobs = 1);

struct LocalCltResult {
    double lambda = 0.0;
    double sigma2 = 0.0;     // fitted from the on-diagonal value at t_mid
    double sup_error = 0.0;  // over |x| <= x0 and the time grid
    double t_mid = 0.0;
    int window = 0;          // certified solver window
};

// Local-CLT comparison: sup over the grid of
//   | lambda * p_{lambda^2 t}(0, floor(lambda x)) - gauss(x; sigma2 t) |
// with sigma2 fitted by matching the on-diagonal value at the middle grid
// time. The time grid has t_points values spanning [t_lo, t_hi].
LocalCltResult local_clt_error(const TrapEnvironment& env, double lambda, double x0,
                               double t_lo, double t_hi, int t_points = 5,
                               double exit_tol = 1e-4);

// Seed for member i of a family keyed by a master seed.
std::uint64_t member_seed(std::uint64_t master_seed, int index);

}  // namespace hklab
