#include "hklab/env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hklab/errors.hpp"
#include "hklab/rng.hpp"

namespace hklab {

namespace {

double draw_tau(double alpha, std::uint64_t seed, std::int64_t x) {
    // Per-site counter-based draw: the value depends on (seed, x) only.
    const auto stream = static_cast<std::uint64_t>(x);
    const double u = to_unit_open(mix_seed(seed, stream));
    return std::pow(u, -1.0 / alpha);
}

}  // namespace

TrapEnvironment::TrapEnvironment(double alpha, SiteInterval window, std::uint64_t seed)
    : alpha_(alpha), seed_(seed), window_(window) {
    if (!(alpha > 0.0)) throw ValidationError("sample_traps: alpha must be positive");
    if (window.size() <= 0) throw ValidationError("sample_traps: empty window");
    taus_.reserve(static_cast<std::size_t>(window.size()));
    for (std::int64_t x = window.lo; x <= window.hi; ++x)
        taus_.push_back(draw_tau(alpha, seed, x));
}

double TrapEnvironment::tau(std::int64_t x) const {
    if (!window_.contains(x))
        throw ValidationError("TrapEnvironment: site " + std::to_string(x) +
                              " outside window [" + std::to_string(window_.lo) + "," +
                              std::to_string(window_.hi) + "]");
    return taus_[static_cast<std::size_t>(x - window_.lo)];
}

TrapEnvironment TrapEnvironment::extended(SiteInterval larger) const {
    if (!larger.contains(window_))
        throw ValidationError("TrapEnvironment::extended: new window must contain the old one");
    return TrapEnvironment(alpha_, larger, seed_);
}

TrapEnvironment sample_traps(double alpha, SiteInterval window, std::uint64_t seed) {
    return TrapEnvironment(alpha, window, seed);
}

double volume(const TrapEnvironment& env, std::int64_t x, std::int64_t n) {
    if (n < 0) throw ValidationError("volume: n must be non-negative");
    const SiteInterval range{x - n, x + n};
    if (!env.window().contains(range))
        throw ValidationError("volume: window too small for V(" + std::to_string(x) +
                              "," + std::to_string(n) + ")");
    double sum = 0.0;
    for (std::int64_t y = range.lo; y <= range.hi; ++y) sum += env.tau(y);
    return sum;
}

PhiValue phi_alpha(double t, double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("phi_alpha: alpha must be positive");
    if (!(t > 0.0)) throw ValidationError("phi_alpha: t must be positive");
    double v;
    if (alpha < 1.0) {
        v = std::pow(t, -1.0 / (1.0 + alpha));
    } else if (alpha == 1.0) {
        if (!(t > 1.0))
            throw ValidationError("phi_alpha: alpha = 1 requires t > 1");
        v = 1.0 / std::sqrt(t * std::log(t));
    } else {
        v = 1.0 / std::sqrt(t);
    }
    return PhiValue{t, alpha, v};
}

double hill_estimate(const TrapEnvironment& env, std::int64_t k) {
    const std::int64_t n = env.window().size();
    if (k <= 1 || k >= n)
        throw ValidationError("hill_estimate: need 1 < k < window size");
    std::vector<double> sorted = env.taus();
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double pivot = sorted[static_cast<std::size_t>(k)];  // (k+1)-th largest
    double acc = 0.0;
    for (std::int64_t i = 0; i < k; ++i)
        acc += std::log(sorted[static_cast<std::size_t>(i)] / pivot);
    const double hill = acc / static_cast<double>(k);
    if (!(hill > 0.0) || !std::isfinite(hill))
        throw ValidationError("hill_estimate: degenerate sample");
    return 1.0 / hill;
}

}  // namespace hklab
