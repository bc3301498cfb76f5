// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion. Criteria may be selected
// by number on the command line (default: all). Exit code = number of
// failures.
//
// Criterion 6 is known-red: the trend it asserts does not hold for the
// tau-normalized kernel at these scales (see the FAIL diagnostics it prints);
// it is kept as stated rather than weakened.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hklab/analysis.hpp"
#include "hklab/env.hpp"
#include "hklab/errors.hpp"
#include "hklab/gasket.hpp"
#include "hklab/iic.hpp"
#include "hklab/kernel.hpp"
#include "hklab/oracles.hpp"
#include "hklab/spectral.hpp"
#include "hklab/stats.hpp"
#include "hklab/ust.hpp"

using namespace hklab;

namespace {

constexpr std::uint64_t kMasterSeed = 42;

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct Criterion {
    int id;
    bool pass;
    std::string label;
    std::string detail;
    double seconds;
};

void report(std::vector<Criterion>& out, int id, bool pass, const std::string& label,
            const std::string& detail, double t0) {
    out.push_back({id, pass, label, detail, now_s() - t0});
    std::printf("[%s] criterion %d: %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id,
                label.c_str(), detail.c_str(), now_s() - t0);
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---- shared BTM ensembles (criterion 5 and criterion 8 use the same data)

struct BtmEnsemble {
    std::vector<double> grid;
    std::vector<std::vector<double>> values;  // [member][time] of p_t(0,0)
};

const BtmEnsemble& btm_ensemble(double alpha) {
    static std::map<double, BtmEnsemble> cache;
    auto it = cache.find(alpha);
    if (it != cache.end()) return it->second;

    BtmEnsemble ens;
    ens.grid = dyadic_time_grid(1.0, 1e5, 4);
    const std::int64_t cap = 16L * btm_initial_window(alpha, 1e5);
    const int M = 200;
    ens.values.resize(M);
    for (int i = 0; i < M; ++i) {
        const TrapEnvironment env =
            sample_traps(alpha, {-cap, cap}, member_seed(kMasterSeed, i));
        const HeatKernelSeries s = btm_kernel(env, ens.grid, 1e-4);
        ens.values[i].reserve(ens.grid.size());
        for (const auto& p : s.points) ens.values[i].push_back(p.value);
    }
    return cache.emplace(alpha, std::move(ens)).first->second;
}

double ensemble_mean_slope(const BtmEnsemble& ens, double fit_lo, double fit_hi) {
    HeatKernelSeries mean;
    for (std::size_t j = 0; j < ens.grid.size(); ++j) {
        double acc = 0.0;
        for (const auto& member : ens.values) acc += member[j];
        mean.points.push_back({ens.grid[j], acc / ens.values.size(), 0.0});
    }
    return fit_exponent(mean, fit_lo, fit_hi).slope;
}

double ensemble_quantile_ratio(const BtmEnsemble& ens, double alpha, double t) {
    std::size_t j = 0;
    for (std::size_t k = 0; k < ens.grid.size(); ++k)
        if (std::abs(ens.grid[k] - t) < std::abs(ens.grid[j] - t)) j = k;
    std::vector<double> column;
    const double phi = phi_alpha(ens.grid[j], alpha).value;
    for (const auto& member : ens.values) column.push_back(member[j] / phi);
    std::sort(column.begin(), column.end());
    return sorted_quantile(column, 0.95) / sorted_quantile(column, 0.05);
}

// fitted exponent of log rho vs log x over the reliable range (counting
// function between 10 and a tenth of the spectrum)
double counting_exponent(const SpectrumResult& s) {
    std::vector<double> lx, ly;
    const int n = static_cast<int>(s.eigenvalues.size());
    for (double x : default_weyl_grid(s)) {
        const int c = counting_function(s, x);
        if (c >= 10 && c <= n / 10) {
            lx.push_back(std::log(x));
            ly.push_back(std::log(static_cast<double>(c)));
        }
    }
    return least_squares(lx, ly).slope;
}

// ------------------------------------------------------------- criteria

void criterion_1(std::vector<Criterion>& out) {
    const double t0 = now_s();
    const WeightedGraph g = build_gasket(constant_gasket_plan(2, 8));
    DiscreteOptions opt;
    opt.report_steps = dyadic_step_grid(1, 10000, 8, false);
    const HeatKernelSeries s = srw_kernel_discrete(g, g.root, g.root, 10000, opt);
    const ExponentFit fit = fit_exponent(s, 100.0, 10000.0);
    const double target = std::log(3.0) / std::log(5.0);
    const bool pass = std::abs(fit.slope - target) <= 0.03;
    report(out, 1, pass, "gasket spectral dimension (SG(2) level 8)",
           "slope=" + fmt(fit.slope) + " target=" + fmt(target) + " tol=0.03", t0);
}

void criterion_2(std::vector<Criterion>& out) {
    const double t0 = now_s();
    const double exponent = std::log(3.0) / std::log(5.0);
    std::map<int, double> ratio;
    for (int level : {5, 6, 7}) {
        const SpectrumResult s = laplacian_spectrum(
            build_gasket(constant_gasket_plan(2, level)), BoundaryCondition::Neumann);
        ratio[level] = weyl_ratio(s, exponent, default_weyl_grid(s)).max_over_min;
    }
    const double threshold = 0.95 * std::min(ratio[5], ratio[6]);
    const bool gasket_ok = ratio[7] >= threshold && ratio[7] >= 1.05;

    const double path_exp = counting_exponent(
        laplacian_spectrum(make_path(1200), BoundaryCondition::Dirichlet));
    // 2D control needs a box beyond the dense budget before the lattice
    // boundary and dispersion corrections drop under the tolerance; counts
    // come from exact LDL^T inertia slicing
    const WeightedGraph box = make_grid(222, 222);
    std::vector<double> lx, ly;
    for (double x : geometric_grid(0.04, 0.4, 48)) {
        const int c = eigenvalue_count_below(box, BoundaryCondition::Dirichlet, x);
        lx.push_back(std::log(x));
        ly.push_back(std::log(static_cast<double>(c)));
    }
    const double grid_exp = least_squares(lx, ly).slope;
    const bool controls_ok =
        std::abs(path_exp - 0.5) <= 0.05 && std::abs(grid_exp - 1.0) <= 0.05;

    report(out, 2, gasket_ok && controls_ok, "gasket Weyl-ratio non-convergence",
           "max/min L5=" + fmt(ratio[5]) + " L6=" + fmt(ratio[6]) + " L7=" +
               fmt(ratio[7]) + " threshold=" + fmt(threshold) + "; controls path=" +
               fmt(path_exp) + " (0.5±0.05) grid=" + fmt(grid_exp) + " (1±0.05)",
           t0);
}

void criterion_3(std::vector<Criterion>& out) {
    const double t0 = now_s();
    const int n_max = 10000, M = 200;
    DiscreteOptions opt;
    opt.absorb_boundary = true;
    opt.report_steps = dyadic_step_grid(2, n_max, 4, true);
    std::vector<double> grid(opt.report_steps.begin(), opt.report_steps.end());

    std::vector<double> mean(grid.size(), 0.0);
    for (int i = 0; i < M; ++i) {
        const std::uint64_t seed = member_seed(kMasterSeed, i);
        // depth auto-extension: the deeper tree extends the same realization
        int depth = 16 + static_cast<int>(std::ceil(3.0 * std::cbrt(double(n_max))));
        auto solve = [&](int d) {
            return srw_kernel_discrete(build_iic(2, d, seed), 0, 0, n_max, opt);
        };
        HeatKernelSeries a = solve(depth);
        HeatKernelSeries b;
        for (int round = 0;; ++round) {
            if (round == 8) throw ResourceError("iic depth certificate failed", depth);
            b = solve(2 * depth);
            double worst = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j)
                worst = std::max(worst, std::abs(a.points[j].value - b.points[j].value) /
                                            std::max(b.points[j].value, 1e-300));
            if (worst <= 1e-3) break;
            a = std::move(b);
            depth *= 2;
        }
        for (std::size_t j = 0; j < grid.size(); ++j) mean[j] += b.points[j].value;
    }
    HeatKernelSeries ms;
    for (std::size_t j = 0; j < grid.size(); ++j)
        ms.points.push_back({grid[j], mean[j] / M, 0.0});
    const double slope = fit_exponent(ms, 100.0, 10000.0).slope;
    const bool pass = std::abs(slope - 2.0 / 3.0) <= 0.05;
    report(out, 3, pass, "IIC annealed exponent (n0=2, M=200)",
           "slope=" + fmt(slope) + " target=0.6667 tol=0.05", t0);
}

void criterion_4(std::vector<Criterion>& out) {
    const double t0 = now_s();
    DiscreteOptions opt;
    opt.absorb_boundary = true;
    opt.report_steps = dyadic_step_grid(2, 10000, 4, true);
    std::vector<double> slopes;
    for (int r = 0; r < 5; ++r) {
        const WeightedGraph tree = wilson_ust(100, member_seed(kMasterSeed, r));
        const HeatKernelSeries s =
            srw_kernel_discrete(tree, tree.root, tree.root, 10000, opt);
        slopes.push_back(fit_exponent(s, 100.0, 10000.0).slope);
    }
    std::vector<double> sorted = slopes;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[2];
    const double target = 8.0 / 13.0;
    const bool pass = std::abs(median - target) <= 0.06;
    std::string detail = "median=" + fmt(median) + " target=" + fmt(target) +
                         " tol=0.06 (wide-tolerance check; slopes:";
    for (double s : slopes) detail += " " + fmt(s);
    detail += ")";
    report(out, 4, pass, "UST quenched exponent (N=100, 5 realizations)", detail, t0);
}

void criterion_5(std::vector<Criterion>& out) {
    const double t0 = now_s();
    bool pass = true;
    std::string detail;
    for (double alpha : {0.5, 0.8, 2.0}) {
        const BtmEnsemble& ens = btm_ensemble(alpha);
        const double slope = ensemble_mean_slope(ens, 100.0, 1e5);
        const double target = alpha < 1.0 ? 1.0 / (1.0 + alpha) : 0.5;
        const double tol = alpha < 1.0 ? 0.05 : 0.03;
        const bool ok = std::abs(slope - target) <= tol;
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += "alpha=" + fmt(alpha) + " slope=" + fmt(slope) + " target=" +
                  fmt(target) + "±" + fmt(tol) + (ok ? "" : " <-- out");
    }
    // stabilization of the normalized mean for alpha = 2 (moment proxy)
    {
        const BtmEnsemble& ens = btm_ensemble(2.0);
        auto normalized_mean_at = [&](double t) {
            std::size_t j = 0;
            for (std::size_t k = 0; k < ens.grid.size(); ++k)
                if (std::abs(ens.grid[k] - t) < std::abs(ens.grid[j] - t)) j = k;
            double acc = 0.0;
            for (const auto& member : ens.values) acc += member[j];
            return acc / ens.values.size() / phi_alpha(ens.grid[j], 2.0).value;
        };
        const double m4 = normalized_mean_at(1e4), m5 = normalized_mean_at(1e5);
        const bool stable = std::abs(m5 - m4) <= 0.25 * m4;
        pass = pass && stable;
        detail += "; normalized mean 1e4->" + fmt(m4) + " 1e5->" + fmt(m5) +
                  (stable ? " (stable)" : " <-- drifted");
    }
    report(out, 5, pass, "BTM annealed exponents (M=200, t<=1e5)", detail, t0);
}

void criterion_6(std::vector<Criterion>& out) {
    const double t0 = now_s();
    const double horizon = 2.0 * 80.0 * 80.0;
    const std::int64_t cap = 16L * btm_initial_window(2.0, horizon);
    const TrapEnvironment env =
        sample_traps(2.0, {-cap, cap}, member_seed(kMasterSeed, 0));
    std::vector<double> errors;
    std::string detail = "sup-errors:";
    for (double lambda : {20.0, 40.0, 80.0}) {
        const LocalCltResult r = local_clt_error(env, lambda, 2.0, 1.0, 2.0, 5, 1e-5);
        errors.push_back(r.sup_error);
        detail += " " + fmt(r.sup_error) + "@" + fmt(lambda);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < errors.size(); ++i)
        decreasing = decreasing && errors[i] < errors[i - 1];
    if (!decreasing) {
        // diagnostic: the comparison chases a defective Gaussian; the spatial
        // variance and the amplitude-implied variance disagree by ~E[tau]^2,
        // so the sup-error tends to a positive limit instead of zero
        const LocalCltResult r = local_clt_error(env, 80.0, 2.0, 1.0, 2.0, 5, 1e-5);
        detail += "; not strictly decreasing: amplitude-implied sigma2=" + fmt(r.sigma2) +
                  " vs spatial variance ~" + fmt(0.5) +
                  " -> width mismatch keeps the sup-error near " + fmt(errors.back());
    }
    report(out, 6, decreasing, "BTM local CLT trend (alpha=2, lambda=20/40/80)", detail,
           t0);
}

void criterion_7(std::vector<Criterion>& out) {
    const double t0 = now_s();
    const auto results = run_oracle_suite(7);
    int failed = 0;
    std::string detail;
    for (const auto& r : results) {
        if (!r.pass) {
            ++failed;
            detail += " " + r.name;
        }
    }
    report(out, 7, failed == 0, "oracle suite",
           failed == 0 ? std::to_string(results.size()) + "/" +
                             std::to_string(results.size()) + " oracles passed"
                       : "failed:" + detail,
           t0);
}

void criterion_8(std::vector<Criterion>& out) {
    const double t0 = now_s();
    const double r05 = ensemble_quantile_ratio(btm_ensemble(0.5), 0.5, 1e5);
    const double r20 = ensemble_quantile_ratio(btm_ensemble(2.0), 2.0, 1e5);
    const bool pass = r05 >= 2.0 * r20;
    report(out, 8, pass, "quenched fluctuation contrast (t=1e5, M=200)",
           "q95/q05 alpha=0.5: " + fmt(r05) + ", alpha=2: " + fmt(r20) +
               ", ratio=" + fmt(r05 / r20) + " (need >= 2)",
           t0);
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    auto wanted = [&](int id) { return selected.empty() || selected.count(id); };

    std::vector<Criterion> results;
    try {
        if (wanted(1)) criterion_1(results);
        if (wanted(2)) criterion_2(results);
        if (wanted(3)) criterion_3(results);
        if (wanted(4)) criterion_4(results);
        if (wanted(5)) criterion_5(results);
        if (wanted(6)) criterion_6(results);
        if (wanted(7)) criterion_7(results);
        if (wanted(8)) criterion_8(results);
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance aborted: %s\n", e.what());
        return 99;
    }

    int failures = 0;
    for (const auto& c : results) failures += !c.pass;
    std::printf("%zu/%zu criteria passed\n", results.size() - failures, results.size());
    return failures;
}
