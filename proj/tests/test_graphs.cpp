#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "hklab/errors.hpp"
#include "hklab/gasket.hpp"
#include "hklab/iic.hpp"
#include "hklab/oracles.hpp"
#include "hklab/rng.hpp"
#include "hklab/ust.hpp"

using namespace hklab;

// ------------------------------------------------------------------ gaskets

TEST_CASE("level-0 plan gives the bare triangle") {
    const WeightedGraph g = build_gasket(constant_gasket_plan(2, 0));
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.boundary.size() == 3);
    g.validate();
}

TEST_CASE("first subdivision of SG(2) and SG(3)") {
    const WeightedGraph sg2 = build_gasket(constant_gasket_plan(2, 1));
    CHECK(sg2.vertex_count() == 6);
    CHECK(sg2.edge_count() == 9);
    const WeightedGraph sg3 = build_gasket(constant_gasket_plan(3, 1));
    CHECK(sg3.vertex_count() == 10);
    CHECK(sg3.edge_count() == 18);
    sg2.validate();
    sg3.validate();
}

TEST_CASE("SG(2) vertex counts match (3^{n+1}+3)/2 up to level 6") {
    for (int n = 0; n <= 6; ++n) {
        const WeightedGraph g = build_gasket(constant_gasket_plan(2, n));
        const std::int64_t expected =
            (static_cast<std::int64_t>(std::llround(std::pow(3.0, n + 1))) + 3) / 2;
        CHECK(g.vertex_count() == expected);
        CHECK(g.edge_count() == std::llround(std::pow(3.0, n + 1)));
    }
}

TEST_CASE("gasket graphs are connected, measure equals degree, corners are boundary") {
    const WeightedGraph g = build_gasket(constant_gasket_plan(3, 2));
    g.validate();
    CHECK(g.is_connected());
    for (int v = 0; v < g.vertex_count(); ++v)
        CHECK(g.measure[v] == doctest::Approx(g.weighted_degree(v)));
    CHECK(g.boundary.size() == 3);
    for (int b : g.boundary) CHECK(g.adj[b].size() == 2);  // outer corners have degree 2
    CHECK(g.root == g.boundary[0]);
    REQUIRE(g.coords.has_value());
    // coordinates glued exactly: no two vertices share a position
    std::set<std::pair<double, double>> seen;
    for (const auto& c : *g.coords) seen.insert({c[0], c[1]});
    CHECK(static_cast<int>(seen.size()) == g.vertex_count());
}

TEST_CASE("scale-irregular plan mixes branching factors per level") {
    const GasketPlan plan = scale_irregular_plan({2, 3});
    plan.validate();
    const WeightedGraph g = build_gasket(plan);
    // 3 cells after round one, each splits into 6: 18 leaf cells, 54 edges
    CHECK(plan.leaf_cell_count() == 18);
    CHECK(g.edge_count() == 54);
    g.validate();
}

TEST_CASE("degenerate recursive weights reproduce the deterministic gasket") {
    const GasketPlan random_plan = build_recursive_gasket(1.0, 0.0, 3, 77);
    const GasketPlan constant = constant_gasket_plan(2, 3);
    CHECK(random_plan.nu_by_level == constant.nu_by_level);
    const WeightedGraph a = build_gasket(random_plan);
    const WeightedGraph b = build_gasket(constant);
    REQUIRE(a.vertex_count() == b.vertex_count());
    for (int v = 0; v < a.vertex_count(); ++v) {
        REQUIRE(a.adj[v].size() == b.adj[v].size());
        for (std::size_t k = 0; k < a.adj[v].size(); ++k)
            CHECK(a.adj[v][k].to == b.adj[v][k].to);
    }
}

TEST_CASE("recursive gasket draws nu = 3 with the configured frequency") {
    const int trials = 4000;
    int threes = 0;
    for (int s = 0; s < trials; ++s) {
        const GasketPlan plan = build_recursive_gasket(0.5, 0.5, 1, mix_seed(4, s));
        threes += plan.nu_by_level[0][0] == 3;
    }
    const double se = std::sqrt(0.25 / trials);
    CHECK(std::abs(threes / static_cast<double>(trials) - 0.5) <= 3.0 * se);
}

TEST_CASE("recursive plan child counts follow nu(nu+1)/2") {
    const GasketPlan plan = build_recursive_gasket(0.5, 0.5, 2, 99);
    plan.validate();
    const int root_nu = plan.nu_by_level[0][0];
    const std::size_t children = plan.nu_by_level[1].size();
    CHECK((children == 3 || children == 6));
    CHECK(children == static_cast<std::size_t>(root_nu * (root_nu + 1) / 2));
}

TEST_CASE("gasket builders are deterministic in the seed") {
    const GasketPlan a = build_recursive_gasket(0.4, 0.6, 4, 1234);
    const GasketPlan b = build_recursive_gasket(0.4, 0.6, 4, 1234);
    CHECK(a.nu_by_level == b.nu_by_level);
    CHECK_THROWS_AS(build_recursive_gasket(0.7, 0.7, 2, 1), ValidationError);
    CHECK_THROWS_AS(constant_gasket_plan(1, 2), ValidationError);
}

// --------------------------------------------------------------------- IIC

TEST_CASE("iic depth-1 law for the binary tree") {
    // P(both children) = 1/2, P(single child) = 1/4 each
    const int trials = 40000;
    std::map<std::string, int> counts;
    for (int s = 0; s < trials; ++s) {
        const IicSample sample = build_iic_sample(2, 1, mix_seed(11, s));
        counts[iic_config_encoding(sample, 2, 1)]++;
    }
    REQUIRE(counts.size() == 3);
    const double n = trials;
    CHECK(std::abs(counts["11"] / n - 0.5) <= 3.0 * std::sqrt(0.25 / n));
    CHECK(std::abs(counts["10"] / n - 0.25) <= 3.0 * std::sqrt(0.1875 / n));
    CHECK(std::abs(counts["01"] / n - 0.25) <= 3.0 * std::sqrt(0.1875 / n));
}

TEST_CASE("iic always survives to the requested depth") {
    for (int n0 : {2, 3}) {
        for (int depth : {1, 4, 16}) {
            const WeightedGraph tree = build_iic(n0, depth, 7000 + n0 + depth);
            CHECK_FALSE(tree.boundary.empty());  // vertices at the last level exist
            tree.validate();
            CHECK(tree.edge_count() == tree.vertex_count() - 1);
        }
    }
}

TEST_CASE("iic exact atoms sum to one with the binary-tree values") {
    const auto atoms = iic_exact_atoms(2, 1);
    double total = 0.0;
    for (const auto& [enc, p] : atoms) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(atoms.at("11") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(atoms.at("10") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(atoms.at("01") == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("iic sampler matches the exact enumeration at depth 2") {
    CHECK(check_iic_sampler(2, 40000, 21).pass);
    CHECK(check_iic_sampler(3, 40000, 22).pass);
}

TEST_CASE("deepening an iic truncation extends the same realization") {
    const IicSample shallow = build_iic_sample(2, 8, 321);
    const IicSample deep = build_iic_sample(2, 16, 321);
    REQUIRE(deep.graph.vertex_count() >= shallow.graph.vertex_count());
    for (int v = 0; v < shallow.graph.vertex_count(); ++v) {
        CHECK(shallow.parent[v] == deep.parent[v]);
        CHECK(shallow.slot[v] == deep.slot[v]);
    }
}

// --------------------------------------------------------------------- UST

TEST_CASE("wilson produces spanning trees") {
    for (int N : {1, 3, 10}) {
        const WeightedGraph tree = wilson_ust(N, 17);
        tree.validate();
        CHECK(tree.edge_count() == tree.vertex_count() - 1);
        CHECK(tree.is_connected());
        const int side = 2 * N - 1;
        CHECK(tree.vertex_count() == side * side + 1);
        CHECK(tree.boundary.size() == 1);
    }
    const WeightedGraph free_tree = wilson_ust_free(2, 18);
    CHECK(free_tree.vertex_count() == 25);
    CHECK(free_tree.edge_count() == 24);
    CHECK(free_tree.is_connected());
}

TEST_CASE("wilson is uniform on the 4-cycle and the 3x3 grid") {
    CHECK(check_wilson_on_cycle(8000, 5).pass);
    CHECK(check_wilson_on_grid3(60000, 6).pass);
}

TEST_CASE("wilson is uniform on K4 (16 trees by Cayley)") {
    const WeightedGraph k4 = make_complete(4);
    REQUIRE(spanning_tree_count(k4) == 16);
    std::map<std::string, int> counts;
    const int trials = 32000;
    for (int s = 0; s < trials; ++s)
        counts[spanning_tree_key(uniform_spanning_tree(k4, mix_seed(9, s)))]++;
    CHECK(counts.size() == 16);
    const double p = 1.0 / 16.0;
    const double se = std::sqrt(p * (1 - p) / trials);
    for (const auto& [key, c] : counts)
        CHECK(std::abs(c / static_cast<double>(trials) - p) <= 3.5 * se);
}

TEST_CASE("matrix-tree counts") {
    CHECK(spanning_tree_count(make_complete(3)) == 3);
    CHECK(spanning_tree_count(make_cycle(4)) == 4);
    CHECK(spanning_tree_count(make_grid(3, 3)) == 192);
    CHECK(spanning_tree_count(make_path(7)) == 1);
    // Cayley: n^{n-2} for complete graphs
    CHECK(spanning_tree_count(make_complete(5)) == 125);
    CHECK(spanning_tree_count(make_complete(7)) == 16807);
}

TEST_CASE("matrix-tree guards") {
    CHECK_THROWS_AS(spanning_tree_count(make_grid(16, 16)), Error);  // overflow or size
    WeightedGraph g = make_path(3);
    g.adj[0][0].conductance = 2.0;
    g.adj[1][0].conductance = 2.0;
    CHECK_THROWS_AS(spanning_tree_count(g), ValidationError);
}
