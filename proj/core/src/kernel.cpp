#include "hklab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hklab/errors.hpp"
#include "hklab/rng.hpp"
#include "hklab/stats.hpp"

namespace hklab {

const char* to_string(KernelMethod m) {
    switch (m) {
        case KernelMethod::ExactIteration: return "exact-iteration";
        case KernelMethod::Uniformization: return "uniformization";
        case KernelMethod::MonteCarlo: return "monte-carlo";
    }
    return "unknown";
}

std::vector<double> dyadic_time_grid(double t0, double t_max, int points_per_octave) {
    if (!(t0 > 0.0) || !(t_max >= t0))
        throw ValidationError("dyadic_time_grid: need 0 < t0 <= t_max");
    if (points_per_octave < 1)
        throw ValidationError("dyadic_time_grid: points_per_octave must be >= 1");
    std::vector<double> grid;
    const double step = std::pow(2.0, 1.0 / points_per_octave);
    for (double t = t0; t <= t_max * (1.0 + 1e-12); t *= step) grid.push_back(t);
    return grid;
}

std::vector<int> dyadic_step_grid(int n0, int n_max, int points_per_octave, bool even_only) {
    if (n0 < 1 || n_max < n0)
        throw ValidationError("dyadic_step_grid: need 1 <= n0 <= n_max");
    std::vector<int> grid;
    const double step = std::pow(2.0, 1.0 / points_per_octave);
    for (double t = n0; t <= n_max * (1.0 + 1e-12); t *= step) {
        int n = static_cast<int>(std::llround(t));
        if (even_only) {
            n += n % 2;
            n = std::max(n, 2);
        }
        n = std::min(n, n_max);
        if (grid.empty() || n > grid.back()) grid.push_back(n);
    }
    return grid;
}

// ---------------------------------------------------------------- CSR engine

namespace {

// Column-stochastic transition operator in CSR layout acting on distribution
// vectors: out[w] = sum_v T(w,v) in[v]. Row entry order is fixed at build
// time, so every application sums in the same order.
struct Csr {
    int n = 0;
    std::vector<int> ptr;
    std::vector<int> idx;
    std::vector<double> val;

    void apply(const std::vector<double>& in, std::vector<double>& out) const {
        for (int w = 0; w < n; ++w) {
            double acc = 0.0;
            for (int k = ptr[w]; k < ptr[w + 1]; ++k) acc += val[k] * in[idx[k]];
            out[w] = acc;
        }
    }
};

// One-step transition of the discrete jump chain: P(v -> w) proportional to
// the edge conductance.
Csr build_jump_transition(const WeightedGraph& g) {
    const int n = g.vertex_count();
    Csr t;
    t.n = n;
    t.ptr.assign(n + 1, 0);
    for (int v = 0; v < n; ++v)
        for (const auto& a : g.adj[v]) t.ptr[a.to + 1]++;
    for (int w = 0; w < n; ++w) t.ptr[w + 1] += t.ptr[w];
    t.idx.resize(t.ptr[n]);
    t.val.resize(t.ptr[n]);
    std::vector<int> cursor(t.ptr.begin(), t.ptr.end() - 1);
    for (int v = 0; v < n; ++v) {
        const double wdeg = g.weighted_degree(v);
        for (const auto& a : g.adj[v]) {
            const int slot = cursor[a.to]++;
            t.idx[slot] = v;
            t.val[slot] = a.conductance / wdeg;
        }
    }
    return t;
}

// Uniformized transition of the continuous-time chain with jump rates
// rate_v = wdeg_v / mu_v (unit mean holding when mu is the degree measure).
Csr build_uniformized_transition(const WeightedGraph& g, double& lambda_out) {
    const int n = g.vertex_count();
    std::vector<double> rate(n);
    double lambda = 0.0;
    for (int v = 0; v < n; ++v) {
        rate[v] = g.weighted_degree(v) / g.measure[v];
        lambda = std::max(lambda, rate[v]);
    }
    lambda_out = lambda;

    Csr t;
    t.n = n;
    t.ptr.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) {
        t.ptr[v + 1]++;  // diagonal
        for (const auto& a : g.adj[v]) t.ptr[a.to + 1]++;
    }
    for (int w = 0; w < n; ++w) t.ptr[w + 1] += t.ptr[w];
    t.idx.resize(t.ptr[n]);
    t.val.resize(t.ptr[n]);
    std::vector<int> cursor(t.ptr.begin(), t.ptr.end() - 1);
    for (int w = 0; w < n; ++w) {
        const int slot = cursor[w]++;
        t.idx[slot] = w;
        t.val[slot] = 1.0 - rate[w] / lambda;
    }
    for (int v = 0; v < n; ++v) {
        for (const auto& a : g.adj[v]) {
            const int slot = cursor[a.to]++;
            t.idx[slot] = v;
            t.val[slot] = a.conductance / (g.measure[v] * lambda);
        }
    }
    return t;
}

// Poisson(m) probabilities over a window around the mode, wide enough that
// the left-out tail is below tail_target. Weights are computed by the stable
// two-sided recurrence from the mode.
struct PoissonWindow {
    long k_lo = 0;
    long k_hi = 0;
    std::vector<double> w;
    double tail = 0.0;
};

// Bernstein bounds on the two Poisson tails beyond the window, in log space.
double log_poisson_tail_bound(double m, double half) {
    const double upper = -half * half / (2.0 * (m + half / 3.0));
    const double lower = -half * half / (2.0 * m);
    return std::max(upper, lower) + std::log(2.0);
}

PoissonWindow poisson_window(double m, double tail_target) {
    PoissonWindow pw;
    if (m <= 0.0) {
        pw.w = {1.0};
        return pw;
    }
    double half = 8.0 * std::sqrt(m) + 36.0;
    while (log_poisson_tail_bound(m, half) > std::log(tail_target)) half *= 1.25;
    pw.tail = std::exp(log_poisson_tail_bound(m, half));

    const long mode = static_cast<long>(m);
    pw.k_lo = std::max(0L, mode - static_cast<long>(half));
    pw.k_hi = mode + static_cast<long>(half);
    pw.w.assign(pw.k_hi - pw.k_lo + 1, 0.0);
    const double log_mode =
        mode * std::log(m) - m - std::lgamma(static_cast<double>(mode) + 1.0);
    pw.w[mode - pw.k_lo] = std::exp(log_mode);
    for (long k = mode; k > pw.k_lo; --k)
        pw.w[k - 1 - pw.k_lo] = pw.w[k - pw.k_lo] * static_cast<double>(k) / m;
    for (long k = mode; k < pw.k_hi; ++k)
        pw.w[k + 1 - pw.k_lo] = pw.w[k - pw.k_lo] * m / static_cast<double>(k + 1);
    return pw;
}

std::vector<int> admissible_steps(const WeightedGraph& g, int n_max,
                                  const std::vector<int>& requested) {
    const bool even_only = g.is_bipartite();
    std::vector<int> steps;
    if (requested.empty()) {
        for (int n = even_only ? 2 : 1; n <= n_max; n += even_only ? 2 : 1)
            steps.push_back(n);
    } else {
        for (int n : requested) {
            if (n < 1 || n > n_max)
                throw ValidationError("srw_kernel_discrete: requested step out of range");
            if (even_only && n % 2) continue;
            steps.push_back(n);
        }
        std::sort(steps.begin(), steps.end());
        steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    }
    if (steps.empty())
        throw ValidationError("srw_kernel_discrete: no admissible report steps");
    return steps;
}

}  // namespace

// ------------------------------------------------------------- discrete walk

std::vector<std::vector<double>> srw_distribution(const WeightedGraph& g, int x,
                                                  const std::vector<int>& steps,
                                                  bool absorb_boundary) {
    if (!g.is_connected()) throw ValidationError("srw: graph must be connected");
    if (x < 0 || x >= g.vertex_count()) throw ValidationError("srw: source out of range");
    if (steps.empty()) throw ValidationError("srw: no report steps");
    for (std::size_t i = 1; i < steps.size(); ++i)
        if (steps[i] <= steps[i - 1]) throw ValidationError("srw: steps must increase");

    const Csr t = build_jump_transition(g);
    std::vector<double> d(g.vertex_count(), 0.0), d2(g.vertex_count(), 0.0);
    d[x] = 1.0;

    std::vector<std::vector<double>> out;
    out.reserve(steps.size());
    std::size_t next = 0;
    for (int n = 1; n <= steps.back(); ++n) {
        t.apply(d, d2);
        d.swap(d2);
        if (absorb_boundary)
            for (int b : g.boundary) d[b] = 0.0;
        if (n == steps[next]) {
            out.push_back(d);
            ++next;
        }
    }
    return out;
}

HeatKernelSeries srw_kernel_discrete(const WeightedGraph& g, int x, int y, int n_max,
                                     const DiscreteOptions& opt) {
    if (n_max < 2) throw ValidationError("srw_kernel_discrete: n_max must be >= 2");
    if (!g.is_connected())
        throw ValidationError("srw_kernel_discrete: graph must be connected");
    if (x < 0 || x >= g.vertex_count() || y < 0 || y >= g.vertex_count())
        throw ValidationError("srw_kernel_discrete: vertex out of range");

    const std::vector<int> steps = admissible_steps(g, n_max, opt.report_steps);

    const Csr t = build_jump_transition(g);
    std::vector<double> d(g.vertex_count(), 0.0), d2(g.vertex_count(), 0.0);
    d[x] = 1.0;

    HeatKernelSeries s;
    s.model = g.descriptor;
    s.source = x;
    s.target = y;
    s.method = KernelMethod::ExactIteration;
    s.points.reserve(steps.size());

    std::size_t next = 0;
    for (int n = 1; n <= steps.back(); ++n) {
        t.apply(d, d2);
        d.swap(d2);
        if (opt.absorb_boundary)
            for (int b : g.boundary) d[b] = 0.0;
        if (n == steps[next]) {
            s.points.push_back({static_cast<double>(n), d[y] / g.measure[y], 0.0});
            ++next;
        }
    }
    return s;
}

// ---------------------------------------------------------- uniformization

namespace {

// Shared uniformization driver: accumulates Poisson-weighted iterates either
// for a few target vertices or for the full distribution.
void uniformized_accumulate(const Csr& t, int x, const std::vector<double>& times,
                            double lambda, double tail_target,
                            const std::vector<int>& targets,
                            std::vector<std::vector<double>>* target_acc,
                            std::vector<std::vector<double>>* full_acc,
                            std::vector<double>* tails) {
    std::vector<PoissonWindow> windows;
    windows.reserve(times.size());
    long k_max = 0;
    for (double tt : times) {
        windows.push_back(poisson_window(lambda * tt, tail_target));
        k_max = std::max(k_max, windows.back().k_hi);
        if (tails) tails->push_back(windows.back().tail);
    }

    std::vector<double> d(t.n, 0.0), d2(t.n, 0.0);
    d[x] = 1.0;
    for (long k = 0; k <= k_max; ++k) {
        if (k > 0) {
            t.apply(d, d2);
            d.swap(d2);
        }
        for (std::size_t j = 0; j < times.size(); ++j) {
            const PoissonWindow& pw = windows[j];
            if (k < pw.k_lo || k > pw.k_hi) continue;
            const double w = pw.w[k - pw.k_lo];
            if (target_acc)
                for (std::size_t q = 0; q < targets.size(); ++q)
                    (*target_acc)[q][j] += w * d[targets[q]];
            if (full_acc)
                for (int v = 0; v < t.n; ++v) (*full_acc)[j][v] += w * d[v];
        }
    }
}

}  // namespace

std::vector<std::vector<double>> ctmc_distribution(const WeightedGraph& g, int x,
                                                   const std::vector<double>& times,
                                                   double tol) {
    if (!(tol > 0.0)) throw ValidationError("ctmc: tol must be positive");
    if (!g.is_connected()) throw ValidationError("ctmc: graph must be connected");
    for (double tt : times)
        if (!(tt > 0.0)) throw ValidationError("ctmc: times must be positive");

    double lambda = 0.0;
    const Csr t = build_uniformized_transition(g, lambda);
    std::vector<std::vector<double>> full(times.size(),
                                          std::vector<double>(g.vertex_count(), 0.0));
    uniformized_accumulate(t, x, times, lambda, tol * 1e-2, {}, nullptr, &full, nullptr);
    return full;
}

HeatKernelSeries ctmc_kernel(const WeightedGraph& g, int x, int y,
                             const std::vector<double>& times, double tol) {
    if (!(tol > 0.0)) throw ValidationError("ctmc_kernel: tol must be positive");
    if (!g.is_connected()) throw ValidationError("ctmc_kernel: graph must be connected");
    if (x < 0 || x >= g.vertex_count() || y < 0 || y >= g.vertex_count())
        throw ValidationError("ctmc_kernel: vertex out of range");
    for (double tt : times)
        if (!(tt > 0.0)) throw ValidationError("ctmc_kernel: times must be positive");

    double lambda = 0.0;
    const Csr t = build_uniformized_transition(g, lambda);
    std::vector<std::vector<double>> acc(1, std::vector<double>(times.size(), 0.0));
    std::vector<double> tails;
    const double tail_target = tol * g.measure[y] * 0.5;
    uniformized_accumulate(t, x, times, lambda, tail_target, {y}, &acc, nullptr, &tails);

    HeatKernelSeries s;
    s.model = g.descriptor;
    s.source = x;
    s.target = y;
    s.method = KernelMethod::Uniformization;
    for (std::size_t j = 0; j < times.size(); ++j)
        s.points.push_back({times[j], acc[0][j] / g.measure[y], tails[j] / g.measure[y]});
    return s;
}

// ------------------------------------------------------------------ BTM

int btm_initial_window(double alpha, double t_max) {
    const double e = alpha < 1.0 ? alpha / (1.0 + alpha) : 0.5;
    const double c = alpha < 1.0 ? 6.0 : 2.5;
    return 64 + static_cast<int>(std::ceil(c * std::pow(t_max, e)));
}

namespace {

// Single absorbing-window solve on [-K, K]: tridiagonal uniformization.
// Returns P_0(X_t = z, window not yet exited) for every target and time.
void btm_solve_window(const TrapEnvironment& env, int K, const std::vector<double>& times,
                      const std::vector<std::int64_t>& targets,
                      std::vector<std::vector<double>>& acc, double& lambda_out) {
    const int n = 2 * K + 1;
    std::vector<double> stay(n), hop(n);
    double lambda = 0.0;
    for (int i = 0; i < n; ++i)
        lambda = std::max(lambda, 1.0 / env.tau(static_cast<std::int64_t>(i) - K));
    for (int i = 0; i < n; ++i) {
        const double r = 1.0 / env.tau(static_cast<std::int64_t>(i) - K);
        stay[i] = 1.0 - r / lambda;
        hop[i] = r / (2.0 * lambda);
    }
    lambda_out = lambda;

    std::vector<PoissonWindow> windows;
    windows.reserve(times.size());
    long k_max = 0;
    for (double tt : times) {
        windows.push_back(poisson_window(lambda * tt, 1e-13));
        k_max = std::max(k_max, windows.back().k_hi);
    }

    std::vector<double> v(n, 0.0), v2(n, 0.0);
    v[K] = 1.0;

    for (auto& row : acc)
        std::fill(row.begin(), row.end(), 0.0);

    for (long k = 0; k <= k_max; ++k) {
        if (k > 0) {
            v2[0] = v[0] * stay[0] + v[1] * hop[1];
            for (int i = 1; i < n - 1; ++i)
                v2[i] = v[i] * stay[i] + v[i - 1] * hop[i - 1] + v[i + 1] * hop[i + 1];
            v2[n - 1] = v[n - 1] * stay[n - 1] + v[n - 2] * hop[n - 2];
            v.swap(v2);
        }
        for (std::size_t j = 0; j < times.size(); ++j) {
            const PoissonWindow& pw = windows[j];
            if (k < pw.k_lo || k > pw.k_hi) continue;
            const double w = pw.w[k - pw.k_lo];
            for (std::size_t q = 0; q < targets.size(); ++q) {
                const std::int64_t z = targets[q];
                if (z >= -K && z <= K) acc[q][j] += w * v[static_cast<int>(z) + K];
            }
        }
    }
}

}  // namespace

BtmProfile btm_profile(const TrapEnvironment& env, const std::vector<double>& t_grid,
                       const std::vector<std::int64_t>& targets, double exit_tol,
                       const BtmOptions& opt) {
    if (!(exit_tol > 0.0)) throw ValidationError("btm_profile: exit_tol must be positive");
    if (t_grid.empty()) throw ValidationError("btm_profile: empty time grid");
    for (double tt : t_grid)
        if (!(tt > 0.0)) throw ValidationError("btm_profile: times must be positive");
    if (targets.empty()) throw ValidationError("btm_profile: no targets");

    std::int64_t max_target = 0;
    for (std::int64_t z : targets) max_target = std::max(max_target, std::abs(z));
    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());

    const int env_capacity =
        static_cast<int>(std::min(-env.window().lo, env.window().hi));
    const int cap = std::min(opt.max_window, env_capacity);

    int K = opt.initial_window > 0 ? opt.initial_window
                                   : btm_initial_window(env.alpha(), t_max);
    K = std::max(K, static_cast<int>(2 * max_target + 8));
    if (K > cap)
        throw ResourceError("btm_profile: initial window " + std::to_string(K) +
                                " exceeds environment capacity " + std::to_string(cap),
                            cap);

    std::vector<std::vector<double>> prev(targets.size(),
                                          std::vector<double>(t_grid.size(), 0.0));
    std::vector<std::vector<double>> cur = prev;
    double lambda = 0.0;
    btm_solve_window(env, K, t_grid, targets, prev, lambda);

    while (true) {
        const int K2 = 2 * K;
        if (K2 > cap)
            throw ResourceError(
                "btm_profile: cannot certify window within capacity " + std::to_string(cap) +
                    " (best K tried " + std::to_string(K) + ")",
                K);
        btm_solve_window(env, K2, t_grid, targets, cur, lambda);

        // scale per time point: certify small values relative to the profile peak
        double worst = 0.0;
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            double scale = 0.0;
            for (std::size_t q = 0; q < targets.size(); ++q)
                scale = std::max(scale, std::abs(cur[q][j]));
            for (std::size_t q = 0; q < targets.size(); ++q) {
                const double denom = std::max(std::abs(cur[q][j]), 1e-9 * scale);
                if (denom > 0.0)
                    worst = std::max(worst, std::abs(cur[q][j] - prev[q][j]) / denom);
            }
        }
        if (worst <= exit_tol) {
            BtmProfile out;
            out.targets = targets;
            out.times = t_grid;
            out.window = K2;
            out.uniformization_rate = lambda;
            out.values.assign(targets.size(), std::vector<double>(t_grid.size(), 0.0));
            out.errors.assign(targets.size(), std::vector<double>(t_grid.size(), 0.0));
            for (std::size_t q = 0; q < targets.size(); ++q) {
                const double tau_z = env.tau(targets[q]);
                for (std::size_t j = 0; j < t_grid.size(); ++j) {
                    out.values[q][j] = cur[q][j] / tau_z;
                    out.errors[q][j] =
                        (std::abs(cur[q][j] - prev[q][j]) + 1e-13) / tau_z;
                }
            }
            return out;
        }
        prev.swap(cur);
        K = K2;
    }
}

HeatKernelSeries btm_kernel(const TrapEnvironment& env, const std::vector<double>& t_grid,
                            double exit_tol, const BtmOptions& opt) {
    const BtmProfile prof = btm_profile(env, t_grid, {0}, exit_tol, opt);
    HeatKernelSeries s;
    s.model = "btm alpha=" + std::to_string(env.alpha()) +
              " seed=" + std::to_string(env.seed()) + " K=" + std::to_string(prof.window);
    s.source = 0;
    s.target = 0;
    s.method = KernelMethod::Uniformization;
    for (std::size_t j = 0; j < t_grid.size(); ++j)
        s.points.push_back({t_grid[j], prof.values[0][j], prof.errors[0][j]});
    return s;
}

// ------------------------------------------------------------- Monte Carlo

namespace {

McEstimate binomial_estimate(double t, long hits, int samples, double mu, double ci_level) {
    const double f = static_cast<double>(hits) / samples;
    const double z = normal_quantile(0.5 + 0.5 * ci_level);
    McEstimate e;
    e.time = t;
    e.value = f / mu;
    e.ci_half_width = z * std::sqrt(f * (1.0 - f) / samples) / mu;
    e.samples = samples;
    return e;
}

int walk_neighbour(const WeightedGraph& g, int v, Rng& rng) {
    const auto& arcs = g.adj[v];
    if (arcs.size() == 1) return arcs[0].to;
    double wdeg = 0.0;
    for (const auto& a : arcs) wdeg += a.conductance;
    double u = rng.uniform01() * wdeg;
    for (std::size_t i = 0; i + 1 < arcs.size(); ++i) {
        u -= arcs[i].conductance;
        if (u < 0.0) return arcs[i].to;
    }
    return arcs.back().to;
}

}  // namespace

McEstimate mc_return_probability(const WeightedGraph& g, int x, int n_steps, int samples,
                                 std::uint64_t seed, double ci_level) {
    if (samples < 100) throw ValidationError("mc: need at least 100 samples");
    if (n_steps < 0) throw ValidationError("mc: negative step count");
    Rng rng(seed);
    long hits = 0;
    for (int s = 0; s < samples; ++s) {
        int v = x;
        for (int k = 0; k < n_steps; ++k) v = walk_neighbour(g, v, rng);
        hits += (v == x);
    }
    return binomial_estimate(n_steps, hits, samples, g.measure[x], ci_level);
}

McEstimate mc_return_probability_ctmc(const WeightedGraph& g, int x, double t, int samples,
                                      std::uint64_t seed, double ci_level) {
    if (samples < 100) throw ValidationError("mc: need at least 100 samples");
    if (!(t > 0.0)) throw ValidationError("mc: time must be positive");
    Rng rng(seed);
    long hits = 0;
    for (int s = 0; s < samples; ++s) {
        int v = x;
        double clock = rng.exponential(g.measure[x] / g.weighted_degree(x));
        while (clock <= t) {
            v = walk_neighbour(g, v, rng);
            clock += rng.exponential(g.measure[v] / g.weighted_degree(v));
        }
        hits += (v == x);
    }
    return binomial_estimate(t, hits, samples, g.measure[x], ci_level);
}

McEstimate mc_return_probability(const TrapEnvironment& env, double t, int samples,
                                 std::uint64_t seed, double ci_level) {
    if (samples < 100) throw ValidationError("mc: need at least 100 samples");
    if (!(t > 0.0)) throw ValidationError("mc: time must be positive");
    Rng rng(seed);
    long hits = 0;
    for (int s = 0; s < samples; ++s) {
        std::int64_t v = 0;
        double clock = rng.exponential(env.tau(0));
        while (clock <= t) {
            v += (rng.uniform01() < 0.5) ? -1 : 1;
            clock += rng.exponential(env.tau(v));
        }
        hits += (v == 0);
    }
    return binomial_estimate(t, hits, samples, env.tau(0), ci_level);
}

}  // namespace hklab
