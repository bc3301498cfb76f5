#include "hklab/oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "hklab/analysis.hpp"
#include "hklab/env.hpp"
#include "hklab/errors.hpp"
#include "hklab/gasket.hpp"
#include "hklab/iic.hpp"
#include "hklab/kernel.hpp"
#include "hklab/rng.hpp"
#include "hklab/spectral.hpp"
#include "hklab/stats.hpp"
#include "hklab/ust.hpp"

namespace hklab {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

// --------------------------------------------------------- IIC enumeration

std::map<std::string, double> iic_exact_atoms(int n0, int depth) {
    if (n0 < 2 || n0 > 4 || depth < 1 || depth > 2)
        throw ValidationError("iic_exact_atoms: enumeration covers n0<=4, depth<=2");
    const double pc = 1.0 / n0;

    std::map<std::string, double> atoms;
    // Depth-first over per-vertex child masks, level by level. An atom's
    // percolation weight multiplies p^open (1-p)^closed over every vertex of
    // the cluster above the last level.
    std::function<void(int, const std::vector<int>&, std::string, double)> rec =
        [&](int level, const std::vector<int>& current, std::string enc, double prob) {
            if (level == depth) {
                if (!current.empty())
                    atoms[enc] += prob * static_cast<double>(current.size());
                return;
            }
            // assign a child mask to every vertex of the current level
            const int m = static_cast<int>(current.size());
            const int combos = 1 << (n0 * m);
            for (int c = 0; c < combos; ++c) {
                double p = prob;
                std::string e = enc;
                std::vector<int> next;
                int bits = c;
                for (int v = 0; v < m; ++v) {
                    for (int s = 0; s < n0; ++s) {
                        const bool open = bits & 1;
                        bits >>= 1;
                        e.push_back(open ? '1' : '0');
                        p *= open ? pc : (1.0 - pc);
                        if (open) next.push_back(0);
                    }
                }
                rec(level + 1, next, e, p);
            }
        };
    rec(0, {0}, "", 1.0);

    // drop zero-weight entries (clusters that die before the last level)
    for (auto it = atoms.begin(); it != atoms.end();)
        it = it->second > 0.0 ? std::next(it) : atoms.erase(it);
    return atoms;
}

std::string iic_config_encoding(const IicSample& sample, int n0, int depth) {
    std::string enc;
    const auto& lv = sample.level;
    for (int v = 0; v < sample.graph.vertex_count(); ++v) {
        if (lv[v] >= depth) continue;
        std::string mask(static_cast<std::size_t>(n0), '0');
        for (int w = 0; w < sample.graph.vertex_count(); ++w)
            if (sample.parent[w] == v) mask[static_cast<std::size_t>(sample.slot[w])] = '1';
        enc += mask;
    }
    return enc;
}

// ------------------------------------------------- dense eigensolve oracle

double dense_ctmc_transition(const WeightedGraph& g, int x, int y, double t) {
    const int n = g.vertex_count();
    if (n > 600) throw ValidationError("dense_ctmc_transition: oracle is for small graphs");
    // symmetrized generator A = D^{1/2} Q D^{-1/2}, A(x,y) = c_xy/sqrt(mu_x mu_y)
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int v = 0; v < n; ++v) {
        a(v, v) = -g.weighted_degree(v) / g.measure[v];
        for (const auto& arc : g.adj[v])
            a(v, arc.to) += arc.conductance / std::sqrt(g.measure[v] * g.measure[arc.to]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw Error("dense_ctmc_transition: solve failed");
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
        acc += std::exp(vals[k] * t) * vecs(x, k) * vecs(y, k);
    return acc * std::sqrt(g.measure[y] / g.measure[x]);
}

std::vector<double> path_dirichlet_eigenvalues(int n) {
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        ev[static_cast<std::size_t>(k - 1)] = 2.0 * (1.0 - std::cos(k * M_PI / (n + 1)));
    return ev;
}

std::string spanning_tree_key(const WeightedGraph& tree) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < tree.vertex_count(); ++v)
        for (const auto& a : tree.adj[v])
            if (a.to > v) edges.emplace_back(v, a.to);
    std::sort(edges.begin(), edges.end());
    std::string key;
    for (const auto& [u, v] : edges)
        key += std::to_string(u) + "-" + std::to_string(v) + ";";
    return key;
}

// ----------------------------------------------------------- suite checks

OracleResult check_iic_sampler(int n0, int samples, std::uint64_t seed) {
    const int depth = 2;
    const auto atoms = iic_exact_atoms(n0, depth);
    double total = 0.0;
    for (const auto& [enc, p] : atoms) total += p;

    std::map<std::string, long> counts;
    for (int i = 0; i < samples; ++i) {
        const IicSample s = build_iic_sample(n0, depth, mix_seed(seed, i));
        counts[iic_config_encoding(s, n0, depth)]++;
    }
    for (const auto& [enc, c] : counts)
        if (!atoms.count(enc))
            return {"iic-sampler n0=" + std::to_string(n0), false,
                    "sampled atom outside the exact support"};

    double tv = 0.0, sigma_tv = 0.0;
    for (const auto& [enc, p] : atoms) {
        const auto it = counts.find(enc);
        const double f = it == counts.end() ? 0.0
                                            : static_cast<double>(it->second) / samples;
        tv += 0.5 * std::abs(f - p);
        sigma_tv += 0.5 * std::sqrt(p * (1.0 - p) / samples);
    }
    const bool pass = std::abs(total - 1.0) < 1e-12 && tv <= 3.0 * sigma_tv;
    return {"iic-sampler n0=" + std::to_string(n0), pass,
            "atoms=" + std::to_string(atoms.size()) + " mass=" + fmt(total) +
                " tv=" + fmt(tv) + " bound=" + fmt(3.0 * sigma_tv)};
}

OracleResult check_wilson_on_cycle(int samples, std::uint64_t seed) {
    WeightedGraph square = make_grid(2, 2);  // the 4-cycle
    if (spanning_tree_count(square) != 4)
        return {"wilson-4cycle", false, "matrix-tree count != 4"};
    std::map<std::string, long> counts;
    for (int i = 0; i < samples; ++i)
        counts[spanning_tree_key(uniform_spanning_tree(square, mix_seed(seed, i)))]++;
    if (counts.size() != 4)
        return {"wilson-4cycle", false,
                "saw " + std::to_string(counts.size()) + " distinct trees, expected 4"};
    const double sigma = std::sqrt(0.25 * 0.75 / samples);
    double worst = 0.0;
    for (const auto& [key, c] : counts)
        worst = std::max(worst, std::abs(static_cast<double>(c) / samples - 0.25));
    return {"wilson-4cycle", worst <= 3.0 * sigma,
            "max |freq-1/4| = " + fmt(worst) + " bound=" + fmt(3.0 * sigma)};
}

OracleResult check_wilson_on_grid3(int samples, std::uint64_t seed) {
    WeightedGraph grid = make_grid(3, 3);
    const std::int64_t trees = spanning_tree_count(grid);
    if (trees != 192)
        return {"wilson-3x3", false, "matrix-tree count = " + std::to_string(trees)};
    std::map<std::string, long> counts;
    for (int i = 0; i < samples; ++i)
        counts[spanning_tree_key(uniform_spanning_tree(grid, mix_seed(seed, i)))]++;
    if (static_cast<std::int64_t>(counts.size()) > trees)
        return {"wilson-3x3", false, "more distinct trees than the matrix-tree count"};
    const double expected = static_cast<double>(samples) / static_cast<double>(trees);
    double chi2 = 0.0;
    long seen = 0;
    for (const auto& [key, c] : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
        seen += c;
    }
    chi2 += (trees - static_cast<std::int64_t>(counts.size())) * expected;  // unseen cells
    const double crit = chi_square_quantile(0.99, static_cast<int>(trees) - 1);
    return {"wilson-3x3", chi2 <= crit && seen == samples,
            "chi2=" + fmt(chi2) + " crit(1%)=" + fmt(crit) +
                " distinct=" + std::to_string(counts.size())};
}

OracleResult check_two_state_kernel() {
    WeightedGraph edge = make_single_edge();
    const std::vector<double> times{0.1, 0.5, 1.0, 2.0, 5.0};
    const HeatKernelSeries s = ctmc_kernel(edge, 0, 0, times, 1e-12);
    double worst = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double exact = 0.5 * (1.0 + std::exp(-2.0 * times[j]));
        worst = std::max(worst, std::abs(s.points[j].value - exact));
    }
    return {"two-state-kernel", worst <= 1e-10, "max |err| = " + fmt(worst)};
}

OracleResult check_uniformization_vs_dense(std::uint64_t seed) {
    std::vector<WeightedGraph> graphs;
    graphs.push_back(build_gasket(constant_gasket_plan(2, 2)));  // 15 vertices
    graphs.push_back(make_complete(7));
    graphs.push_back(make_grid(5, 5));
    // trap-model window as a weighted graph: conductance 1/2, measure tau
    {
        TrapEnvironment env = sample_traps(1.5, {-12, 12}, seed);
        WeightedGraph w;
        w.adj.resize(25);
        for (int i = 0; i + 1 < 25; ++i) w.add_edge(i, i + 1, 0.5);
        w.measure.resize(25);
        for (int i = 0; i < 25; ++i) w.measure[i] = env.tau(i - 12);
        w.descriptor = "btm window graph";
        graphs.push_back(std::move(w));
    }

    double worst = 0.0;
    Rng rng(seed);
    for (const auto& g : graphs) {
        const int n = g.vertex_count();
        for (int rep = 0; rep < 3; ++rep) {
            const int x = static_cast<int>(rng.below(n));
            const int y = static_cast<int>(rng.below(n));
            const double t = 0.2 + 2.0 * rng.uniform01();
            const HeatKernelSeries s = ctmc_kernel(g, x, y, {t}, 1e-12);
            const double exact = dense_ctmc_transition(g, x, y, t) / g.measure[y];
            worst = std::max(worst, std::abs(s.points[0].value - exact));
        }
    }
    return {"uniformization-vs-dense", worst <= 1e-10, "max |err| = " + fmt(worst)};
}

OracleResult check_series_invariants(std::uint64_t seed) {
    std::string detail;
    bool pass = true;
    auto fail = [&](const std::string& what) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    };

    WeightedGraph gasket = build_gasket(constant_gasket_plan(2, 3));
    WeightedGraph tri = make_complete(3);

    // conservation of the discrete walk
    for (const auto* g : {&gasket, &tri}) {
        const auto dist = srw_distribution(*g, g->root, {1, 7, 64});
        for (const auto& d : dist) {
            double sum = 0.0;
            for (double v : d) sum += v;
            if (std::abs(sum - 1.0) > 1e-12) fail("discrete conservation");
        }
    }
    // conservation of the continuous-time walk (within truncation bound)
    {
        const auto dist = ctmc_distribution(tri, 0, {0.5, 3.0}, 1e-11);
        for (const auto& d : dist) {
            double sum = 0.0;
            for (double v : d) sum += v;
            if (std::abs(sum - 1.0) > 1e-9) fail("ctmc conservation");
        }
    }
    // kernel symmetry p(x,y) = p(y,x)
    {
        const int x = gasket.root, y = gasket.vertex_count() / 2;
        const auto fwd = srw_kernel_discrete(gasket, x, y, 64);
        const auto bwd = srw_kernel_discrete(gasket, y, x, 64);
        for (std::size_t j = 0; j < fwd.points.size(); ++j)
            if (std::abs(fwd.points[j].value - bwd.points[j].value) > 1e-12)
                fail("discrete symmetry");
    }
    // monotone on-diagonal decay of the continuous-time kernels
    {
        const auto grid = dyadic_time_grid(0.25, 64.0, 4);
        const auto s = ctmc_kernel(gasket, gasket.root, gasket.root, grid, 1e-11);
        for (std::size_t j = 1; j < s.points.size(); ++j)
            if (s.points[j].value > s.points[j - 1].value + 1e-11)
                fail("ctmc monotone decay");
        TrapEnvironment env = sample_traps(0.8, {-4096, 4096}, seed);
        const auto grid2 = dyadic_time_grid(1.0, 256.0, 4);
        const auto b = btm_kernel(env, grid2, 1e-6);
        for (std::size_t j = 1; j < b.points.size(); ++j)
            if (b.points[j].value > b.points[j - 1].value + 1e-9)
                fail("btm monotone decay");
        // reversibility through the window graph: p(0,z) vs p(z,0)
        WeightedGraph w;
        const int K = 64;
        w.adj.resize(2 * K + 1);
        for (int i = 0; i + 1 < 2 * K + 1; ++i) w.add_edge(i, i + 1, 0.5);
        w.measure.resize(2 * K + 1);
        for (int i = 0; i <= 2 * K; ++i) w.measure[i] = env.tau(i - K);
        w.descriptor = "btm window";
        for (int z : {1, 5}) {
            const auto fwd = ctmc_kernel(w, K, K + z, {4.0, 16.0}, 1e-12);
            const auto bwd = ctmc_kernel(w, K + z, K, {4.0, 16.0}, 1e-12);
            for (std::size_t j = 0; j < fwd.points.size(); ++j)
                if (std::abs(fwd.points[j].value - bwd.points[j].value) > 1e-10)
                    fail("btm reversibility");
        }
    }
    return {"series-invariants", pass, pass ? "conservation/symmetry/decay hold" : detail};
}

OracleResult check_chapman_kolmogorov() {
    WeightedGraph g = make_grid(4, 4);  // 16 vertices
    const int x = 0, y = 9, s_steps = 5, t_steps = 8;
    // discrete
    const auto at_s = srw_distribution(g, x, {s_steps})[0];
    const auto direct = srw_distribution(g, x, {s_steps + t_steps})[0];
    double composed = 0.0;
    for (int z = 0; z < g.vertex_count(); ++z)
        composed += at_s[z] * srw_distribution(g, z, {t_steps})[0][y];
    double worst = std::abs(direct[y] - composed);
    // continuous time
    const double s_time = 0.7, t_time = 1.9;
    const auto cs = ctmc_distribution(g, x, {s_time}, 1e-12)[0];
    const auto cd = ctmc_distribution(g, x, {s_time + t_time}, 1e-12)[0];
    double ccomposed = 0.0;
    for (int z = 0; z < g.vertex_count(); ++z)
        ccomposed += cs[z] * ctmc_distribution(g, z, {t_time}, 1e-12)[0][y];
    worst = std::max(worst, std::abs(cd[y] - ccomposed));
    return {"chapman-kolmogorov", worst <= 1e-8, "max |err| = " + fmt(worst)};
}

OracleResult check_fit_on_power_law() {
    HeatKernelSeries s;
    s.model = "synthetic t^-1/2";
    for (double t : dyadic_time_grid(1.0, 1e4, 4))
        s.points.push_back({t, std::pow(t, -0.5), 0.0});
    const ExponentFit f = fit_exponent(s, 1.0, 1e4);
    double max_resid = 0.0;
    for (double r : f.residuals) max_resid = std::max(max_resid, std::abs(r));
    bool pass = std::abs(f.slope - 0.5) <= 1e-12 && max_resid <= 1e-12;
    // scale equivariance: multiplying the series moves the intercept only
    HeatKernelSeries scaled = s;
    for (auto& p : scaled.points) p.value *= 7.25;
    const ExponentFit f2 = fit_exponent(scaled, 1.0, 1e4);
    pass = pass && std::abs(f2.slope - f.slope) <= 1e-12 &&
           std::abs((f.intercept - f2.intercept) - std::log(7.25)) <= 1e-12;
    return {"fit-power-law", pass,
            "slope=" + fmt(f.slope) + " max|resid|=" + fmt(max_resid)};
}

OracleResult check_oscillation_detector() {
    const double period = std::log(5.0);
    HeatKernelSeries pure, modulated;
    for (double t : dyadic_time_grid(1.0, 1e6, 4)) {
        const double base = std::pow(t, -0.68);
        pure.points.push_back({t, base, 0.0});
        modulated.points.push_back(
            {t, base * (1.0 + 0.1 * std::sin(2.0 * M_PI * std::log(t) / period)), 0.0});
    }
    const OscillationStats a = oscillation_profile(pure, 0.68);
    const OscillationStats b = oscillation_profile(modulated, 0.68);
    const double rel = std::abs(b.dominant_log_period - period) / period;
    const bool pass = !a.peak_detected && std::abs(a.max_over_min - 1.0) < 1e-9 &&
                      b.peak_detected && rel <= 0.05;
    return {"oscillation-detector", pass,
            "pure ratio=" + fmt(a.max_over_min) + " detected period=" +
                fmt(b.dominant_log_period) + " target=" + fmt(period) +
                " rel err=" + fmt(rel)};
}

OracleResult check_path_spectrum() {
    WeightedGraph path = make_path(50);
    const SpectrumResult s = laplacian_spectrum(path, BoundaryCondition::Dirichlet, true);
    const auto exact = path_dirichlet_eigenvalues(48);
    double worst = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k)
        worst = std::max(worst, std::abs(s.eigenvalues[k] - exact[k]));
    bool pass = s.eigenvalues.size() == exact.size() && worst <= 1e-9;
    // counting function against the closed form at a few thresholds
    for (double x : {0.1, 0.5, 1.0, 2.0, 3.5}) {
        int exact_count = 0;
        for (double ev : exact) exact_count += ev <= x;
        if (counting_function(s, x) != exact_count) pass = false;
    }
    return {"path-spectrum", pass, "max |err| = " + fmt(worst)};
}

OracleResult check_matrix_tree_cases() {
    bool pass = true;
    std::string detail;
    auto expect = [&](const WeightedGraph& g, std::int64_t want, const char* name) {
        const std::int64_t got = spanning_tree_count(g);
        if (got != want) {
            pass = false;
            detail += std::string(name) + ": got " + std::to_string(got) + " want " +
                      std::to_string(want) + "; ";
        }
    };
    expect(make_complete(3), 3, "triangle");
    expect(make_cycle(4), 4, "4-cycle");
    expect(make_complete(4), 16, "K4");
    expect(make_path(5), 1, "path");
    expect(make_grid(3, 3), 192, "3x3 grid");
    return {"matrix-tree", pass, pass ? "all exact counts match" : detail};
}

std::vector<OracleResult> run_oracle_suite(std::uint64_t seed) {
    std::vector<OracleResult> results;
    results.push_back(check_matrix_tree_cases());
    results.push_back(check_iic_sampler(2, 100000, mix_seed(seed, 1)));
    results.push_back(check_iic_sampler(3, 100000, mix_seed(seed, 2)));
    results.push_back(check_wilson_on_cycle(10000, mix_seed(seed, 3)));
    results.push_back(check_wilson_on_grid3(100000, mix_seed(seed, 4)));
    results.push_back(check_two_state_kernel());
    results.push_back(check_uniformization_vs_dense(mix_seed(seed, 5)));
    results.push_back(check_series_invariants(mix_seed(seed, 6)));
    results.push_back(check_chapman_kolmogorov());
    results.push_back(check_fit_on_power_law());
    results.push_back(check_oscillation_detector());
    results.push_back(check_path_spectrum());
    return results;
}

}  // namespace hklab
