#pragma once

#include <cstdint>
#include <vector>

namespace hklab {

// Closed integer interval [lo, hi].
struct SiteInterval {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    std::int64_t size() const { return hi - lo + 1; }
    bool contains(std::int64_t x) const { return x >= lo && x <= hi; }
    bool contains(const SiteInterval& o) const { return o.lo >= lo && o.hi <= hi; }
};

// A seeded realization of i.i.d. heavy-tailed traps {tau_x} on a window of Z.
//
// tau_x = U_x^{-1/alpha} with U_x uniform(0,1) derived from (seed, x) alone,
// so the marginal law is P(tau_x > u) = u^{-alpha} for u >= 1 and windows can
// be extended without disturbing previously generated sites. Immutable after
// construction.
class TrapEnvironment {
public:
    TrapEnvironment(double alpha, SiteInterval window, std::uint64_t seed);

    double alpha() const { return alpha_; }
    std::uint64_t seed() const { return seed_; }
    const SiteInterval& window() const { return window_; }

    // Mean holding time at site x. Throws ValidationError outside the window.
    double tau(std::int64_t x) const;

    const std::vector<double>& taus() const { return taus_; }

    // New environment on a larger window; values on the old window are
    // reproduced bit-for-bit. Extension is always explicit.
    TrapEnvironment extended(SiteInterval larger) const;

private:
    double alpha_;
    std::uint64_t seed_;
    SiteInterval window_;
    std::vector<double> taus_;  // taus_[x - window_.lo]
};

// Draws the environment. Throws ValidationError for alpha <= 0 or an empty
// window.
TrapEnvironment sample_traps(double alpha, SiteInterval window, std::uint64_t seed);

// V(x,n) = sum of tau_y over y in [x-n, x+n]. Throws ValidationError when the
// window does not cover the summation range (never extends silently).
double volume(const TrapEnvironment& env, std::int64_t x, std::int64_t n);

// Leading-order on-diagonal decay profile of the trap model:
//   t^{-1/(1+alpha)}          for alpha in (0,1)
//   t^{-1/2} (log t)^{-1/2}   for alpha = 1   (needs t > 1)
//   t^{-1/2}                  for alpha > 1
struct PhiValue {
    double t = 0.0;
    double alpha = 0.0;
    double value = 0.0;
};

PhiValue phi_alpha(double t, double alpha);

// Hill estimator of the tail index over the top-k order statistics of the
// trap values. Consistency-check helper for sampled environments. Throws
// ValidationError for out-of-range k or a degenerate (constant) sample.
double hill_estimate(const TrapEnvironment& env, std::int64_t k);

}  // namespace hklab
