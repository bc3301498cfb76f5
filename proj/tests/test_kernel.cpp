#include <doctest.h>

#include <cmath>

#include "hklab/env.hpp"
#include "hklab/errors.hpp"
#include "hklab/gasket.hpp"
#include "hklab/kernel.hpp"
#include "hklab/oracles.hpp"
#include "hklab/rng.hpp"

using namespace hklab;

TEST_CASE("discrete walk on a single edge returns surely at even times") {
    const WeightedGraph edge = make_single_edge();
    const HeatKernelSeries s = srw_kernel_discrete(edge, 0, 0, 20);
    for (const auto& p : s.points) {
        CHECK(static_cast<int>(p.time) % 2 == 0);  // bipartite: even steps only
        CHECK(p.value == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("triangle two-step return") {
    // 4 two-step paths, two return; P = 1/2, mu = 2 -> p_2 = 1/4
    const WeightedGraph tri = make_complete(3);
    const HeatKernelSeries s = srw_kernel_discrete(tri, 0, 0, 4);
    CHECK(s.points[1].time == 2.0);
    CHECK(s.points[1].value == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("discrete distributions conserve mass") {
    const WeightedGraph g = build_gasket(constant_gasket_plan(2, 3));
    const auto dist = srw_distribution(g, g.root, {1, 5, 25, 125});
    for (const auto& d : dist) {
        double sum = 0.0;
        for (double v : d) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("bipartite detection controls reporting parity") {
    const WeightedGraph path = make_path(6);
    const HeatKernelSeries s = srw_kernel_discrete(path, 0, 0, 10);
    for (const auto& p : s.points) CHECK(static_cast<int>(p.time) % 2 == 0);
    const WeightedGraph tri = make_complete(3);
    const HeatKernelSeries t = srw_kernel_discrete(tri, 0, 0, 10);
    CHECK(t.points.size() == 10);  // odd and even steps both reported
}

TEST_CASE("two-state chain matches the closed form") {
    const WeightedGraph edge = make_single_edge();
    for (double t : {0.05, 0.3, 1.0, 4.0}) {
        const HeatKernelSeries s = ctmc_kernel(edge, 0, 0, {t}, 1e-12);
        CHECK(s.points[0].value ==
              doctest::Approx(0.5 * (1.0 + std::exp(-2.0 * t))).epsilon(1e-12));
        CHECK(s.points[0].error <= 1e-12);
    }
}

TEST_CASE("continuous kernel approaches 1/mu as t -> 0+") {
    const WeightedGraph tri = make_complete(3);
    const HeatKernelSeries s = ctmc_kernel(tri, 0, 0, {1e-8}, 1e-13);
    CHECK(s.points[0].value == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("uniformization agrees with the dense eigensolve oracle") {
    const WeightedGraph tri = make_complete(3);
    const double exact = dense_ctmc_transition(tri, 0, 0, 1.0) / tri.measure[0];
    const HeatKernelSeries s = ctmc_kernel(tri, 0, 0, {1.0}, 1e-12);
    CHECK(std::abs(s.points[0].value - exact) <= 1e-10);
}

TEST_CASE("kernel series are symmetric in (x, y)") {
    const WeightedGraph g = build_gasket(constant_gasket_plan(2, 3));
    const int a = g.root, b = g.vertex_count() / 3;
    const auto fwd = ctmc_kernel(g, a, b, {0.5, 2.0, 8.0}, 1e-12);
    const auto bwd = ctmc_kernel(g, b, a, {0.5, 2.0, 8.0}, 1e-12);
    for (std::size_t j = 0; j < fwd.points.size(); ++j)
        CHECK(fwd.points[j].value == doctest::Approx(bwd.points[j].value).epsilon(1e-10));
}

TEST_CASE("on-diagonal continuous kernels decay monotonically") {
    const WeightedGraph g = build_gasket(constant_gasket_plan(2, 3));
    const auto grid = dyadic_time_grid(0.125, 64.0, 4);
    const HeatKernelSeries s = ctmc_kernel(g, g.root, g.root, grid, 1e-12);
    for (std::size_t j = 1; j < s.points.size(); ++j)
        CHECK(s.points[j].value <= s.points[j - 1].value + 1e-12);
}

TEST_CASE("btm kernel approaches 1/tau_0 as t -> 0+") {
    const TrapEnvironment env = sample_traps(0.5, {-2048, 2048}, 3);
    const HeatKernelSeries s = btm_kernel(env, {1e-9}, 1e-6);
    CHECK(s.points[0].value == doctest::Approx(1.0 / env.tau(0)).epsilon(1e-7));
}

TEST_CASE("btm kernel on a flat environment matches the rate-1 walk") {
    // tau == 1: P_0(X_t = 0) = e^{-t} I_0(t)
    const TrapEnvironment flat = sample_traps(1e18, {-4096, 4096}, 1);
    const std::vector<double> times{1.0, 10.0, 100.0};
    const HeatKernelSeries s = btm_kernel(flat, times, 1e-9);
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double exact = std::exp(-times[j]) * std::cyl_bessel_i(0.0, times[j]);
        CHECK(std::abs(s.points[j].value - exact) <= 1e-8);
    }
}

TEST_CASE("btm kernel against an independent solve on a doubled window") {
    const TrapEnvironment env = sample_traps(0.8, {-8192, 8192}, 91);
    const std::vector<double> times{1.0, 10.0, 100.0};
    const HeatKernelSeries normal = btm_kernel(env, times, 1e-6);
    BtmOptions wide;
    wide.initial_window = 2048;  // far beyond the certified window
    const BtmProfile oracle = btm_profile(env, times, {0}, 1e-6, wide);
    for (std::size_t j = 0; j < times.size(); ++j)
        CHECK(std::abs(normal.points[j].value - oracle.values[0][j]) <= 1e-8);
}

TEST_CASE("btm detailed balance: tau_0 P_0(X_t = z) = tau_z P_z(X_t = 0)") {
    // via the symmetry of the tau-normalized kernel computed on a window graph
    const TrapEnvironment env = sample_traps(0.8, {-64, 64}, 12);
    const int K = 64;
    WeightedGraph w;
    w.adj.resize(2 * K + 1);
    for (int i = 0; i + 1 < 2 * K + 1; ++i) w.add_edge(i, i + 1, 0.5);
    w.measure.resize(2 * K + 1);
    for (int i = 0; i <= 2 * K; ++i) w.measure[i] = env.tau(i - K);
    w.descriptor = "btm window";
    for (int z : {1, 5}) {
        const auto fwd = ctmc_kernel(w, K, K + z, {2.0, 8.0}, 1e-12);
        const auto bwd = ctmc_kernel(w, K + z, K, {2.0, 8.0}, 1e-12);
        for (std::size_t j = 0; j < fwd.points.size(); ++j)
            CHECK(fwd.points[j].value ==
                  doctest::Approx(bwd.points[j].value).epsilon(1e-10));
    }
}

TEST_CASE("btm window certificate reports a resource error when capped") {
    const TrapEnvironment tiny = sample_traps(2.0, {-64, 64}, 7);
    CHECK_THROWS_AS(btm_kernel(tiny, {1e4}, 1e-6), ResourceError);
    try {
        btm_kernel(tiny, {1e4}, 1e-6);
    } catch (const ResourceError& e) {
        CHECK(e.best_tried() >= 0);
    }
}

TEST_CASE("monte carlo matches the exact solvers") {
    // single edge, even steps: returns surely
    const WeightedGraph edge = make_single_edge();
    const McEstimate sure = mc_return_probability(edge, 0, 6, 200, 11);
    CHECK(sure.value == 1.0);
    CHECK(sure.ci_half_width == 0.0);

    // triangle, two steps: CI around 1/4
    const McEstimate tri = mc_return_probability(make_complete(3), 0, 2, 20000, 12);
    CHECK(std::abs(tri.value - 0.25) <= tri.ci_half_width * 1.5);

    // continuous time on the single edge
    const double exact = 0.5 * (1.0 + std::exp(-2.0));
    const McEstimate ct = mc_return_probability_ctmc(edge, 0, 1.0, 20000, 13);
    CHECK(std::abs(ct.value - exact) <= ct.ci_half_width * 1.5);

    // BTM at alpha = 2, t = 50 against the certified solver
    const TrapEnvironment env = sample_traps(2.0, {-2048, 2048}, 14);
    const HeatKernelSeries s = btm_kernel(env, {50.0}, 1e-6);
    const McEstimate bm = mc_return_probability(env, 50.0, 100000, 15);
    CHECK(std::abs(bm.value - s.points[0].value) <= bm.ci_half_width * 1.5);
}

TEST_CASE("mc/exact coverage: exact value inside the 99% CI in most trials") {
    const WeightedGraph tri = make_complete(3);
    const HeatKernelSeries s = ctmc_kernel(tri, 0, 0, {1.5}, 1e-12);
    const double exact = s.points[0].value;
    int covered = 0;
    const int trials = 40;
    for (int k = 0; k < trials; ++k) {
        const McEstimate e =
            mc_return_probability_ctmc(tri, 0, 1.5, 4000, mix_seed(500, k), 0.99);
        covered += std::abs(e.value - exact) <= e.ci_half_width;
    }
    CHECK(covered >= 38);  // >= 95% of independent trials
}

TEST_CASE("monte carlo validates inputs") {
    CHECK_THROWS_AS(mc_return_probability(make_single_edge(), 0, 4, 50, 1),
                    ValidationError);
}

TEST_CASE("chapman-kolmogorov holds on a small graph") {
    CHECK(check_chapman_kolmogorov().pass);
}

TEST_CASE("dyadic grids") {
    const auto t = dyadic_time_grid(1.0, 32.0, 1);
    REQUIRE(t.size() == 6);
    CHECK(t.front() == 1.0);
    CHECK(t.back() == doctest::Approx(32.0));
    const auto s = dyadic_step_grid(2, 100, 4, true);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i] % 2 == 0);
        if (i) CHECK(s[i] > s[i - 1]);
    }
    CHECK_THROWS_AS(dyadic_time_grid(0.0, 1.0, 4), ValidationError);
}
