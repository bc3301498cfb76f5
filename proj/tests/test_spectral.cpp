#include <doctest.h>

#include <cmath>

#include "hklab/errors.hpp"
#include "hklab/gasket.hpp"
#include "hklab/oracles.hpp"
#include "hklab/spectral.hpp"
#include "hklab/stats.hpp"

using namespace hklab;

TEST_CASE("small closed-form spectra") {
    const SpectrumResult edge =
        laplacian_spectrum(make_single_edge(), BoundaryCondition::Neumann, true);
    REQUIRE(edge.eigenvalues.size() == 2);
    CHECK(edge.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(edge.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));

    const SpectrumResult p3 =
        laplacian_spectrum(make_path(3), BoundaryCondition::Neumann, true);
    REQUIRE(p3.eigenvalues.size() == 3);
    CHECK(p3.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p3.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p3.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-12));

    const SpectrumResult tri =
        laplacian_spectrum(make_complete(3), BoundaryCondition::Neumann, true);
    REQUIRE(tri.eigenvalues.size() == 3);
    CHECK(tri.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(tri.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(tri.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("path dirichlet spectrum matches the cosine formula") {
    CHECK(check_path_spectrum().pass);
}

TEST_CASE("neumann kernel of the spectrum: zero eigenvalue count equals components") {
    const SpectrumResult s =
        laplacian_spectrum(build_gasket(constant_gasket_plan(2, 3)),
                           BoundaryCondition::Neumann);
    int zeros = 0;
    for (double ev : s.eigenvalues) zeros += std::abs(ev) < 1e-9;
    CHECK(zeros == 1);

    const SpectrumResult d =
        laplacian_spectrum(make_path(20), BoundaryCondition::Dirichlet);
    for (double ev : d.eigenvalues) CHECK(ev > 0.0);
}

TEST_CASE("counting function basics") {
    const SpectrumResult tri =
        laplacian_spectrum(make_complete(3), BoundaryCondition::Neumann);
    CHECK(counting_function(tri, 2.9) == 1);
    // the doubled eigenvalue 3 is computed to round-off; count just above it
    CHECK(counting_function(tri, 3.0 + 1e-9) == 3);
    CHECK(counting_function(tri, 100.0) == 3);
    CHECK(counting_function(tri, -1.0) == 0);
    // right-continuity at a computed eigenvalue
    CHECK(counting_function(tri, tri.eigenvalues[1]) >= 2);
}

TEST_CASE("counting function is a right-continuous staircase") {
    const SpectrumResult s = laplacian_spectrum(make_path(30), BoundaryCondition::Neumann);
    int prev = 0;
    for (double x = 0.0; x <= 4.2; x += 0.01) {
        const int c = counting_function(s, x);
        CHECK(c >= prev);
        prev = c;
    }
    CHECK(prev == 30);
}

TEST_CASE("trace identity: eigenvalue sum equals weighted degree sum") {
    const WeightedGraph g = build_gasket(constant_gasket_plan(3, 2));
    const SpectrumResult s = laplacian_spectrum(g, BoundaryCondition::Neumann);
    double tr = 0.0, deg = 0.0;
    for (double ev : s.eigenvalues) tr += ev;
    for (int v = 0; v < g.vertex_count(); ++v) deg += g.weighted_degree(v);
    CHECK(tr == doctest::Approx(deg).epsilon(1e-6));
}

TEST_CASE("dirichlet eigenvalues dominate neumann eigenvalues") {
    for (const WeightedGraph& g :
         {make_path(25), make_grid(5, 7), build_gasket(constant_gasket_plan(2, 3))}) {
        const SpectrumResult nm = laplacian_spectrum(g, BoundaryCondition::Neumann);
        const SpectrumResult dr = laplacian_spectrum(g, BoundaryCondition::Dirichlet);
        for (std::size_t k = 0; k < dr.eigenvalues.size(); ++k)
            CHECK(dr.eigenvalues[k] >= nm.eigenvalues[k] - 1e-9);
    }
}

TEST_CASE("weyl ratio is flat for a quadratic synthetic spectrum") {
    // lambda_k = k^2 -> rho(x) = floor(sqrt(x)), ratio ~ 1 up to floor effects
    SpectrumResult s;
    s.bc = BoundaryCondition::Dirichlet;
    s.graph_descriptor = "synthetic k^2";
    for (int k = 1; k <= 4000; ++k)
        s.eigenvalues.push_back(static_cast<double>(k) * k);
    const WeylRatioSeries w = weyl_ratio(s, 0.5, default_weyl_grid(s));
    CHECK(w.max_over_min <= 1.15);
    CHECK(w.max_ratio <= 1.0 + 1e-9);
}

TEST_CASE("weyl ratio flags an empty reliable range") {
    SpectrumResult s;
    s.eigenvalues = {0.5, 1.0, 1.5, 2.0};
    CHECK_THROWS_AS(weyl_ratio(s, 0.5, geometric_grid(0.5, 2.0, 16)), ValidationError);
}

TEST_CASE("weyl ratio validates the grid range") {
    const SpectrumResult s = laplacian_spectrum(make_path(100), BoundaryCondition::Neumann);
    CHECK_THROWS_AS(weyl_ratio(s, 0.5, geometric_grid(1e-9, 10.0, 16)), ValidationError);
}

TEST_CASE("path dirichlet counting exponent sits at 1/2") {
    const SpectrumResult s =
        laplacian_spectrum(make_path(1200), BoundaryCondition::Dirichlet);
    std::vector<double> lx, ly;
    const int n = static_cast<int>(s.eigenvalues.size());
    for (double x : default_weyl_grid(s)) {
        const int c = counting_function(s, x);
        if (c >= 10 && c <= n / 10) {
            lx.push_back(std::log(x));
            ly.push_back(std::log(static_cast<double>(c)));
        }
    }
    const double slope = least_squares(lx, ly).slope;
    CHECK(std::abs(slope - 0.5) <= 0.05);
    // the 2D control needs a far larger box (lattice boundary/dispersion
    // corrections); it runs in the acceptance suite via inertia counting
}

TEST_CASE("grid dirichlet spectrum matches the separable closed form") {
    const int rows = 12, cols = 9;
    const SpectrumResult s =
        laplacian_spectrum(make_grid(rows, cols), BoundaryCondition::Dirichlet);
    std::vector<double> exact;
    for (int j = 1; j <= rows - 2; ++j)
        for (int k = 1; k <= cols - 2; ++k)
            exact.push_back(4.0 - 2.0 * std::cos(j * M_PI / (rows - 1)) -
                            2.0 * std::cos(k * M_PI / (cols - 1)));
    std::sort(exact.begin(), exact.end());
    REQUIRE(s.eigenvalues.size() == exact.size());
    for (std::size_t i = 0; i < exact.size(); ++i)
        CHECK(s.eigenvalues[i] == doctest::Approx(exact[i]).epsilon(1e-10));
}

TEST_CASE("inertia counting agrees with dense spectra") {
    const std::vector<WeightedGraph> graphs = {
        make_path(300), make_grid(18, 23), build_gasket(constant_gasket_plan(2, 4))};
    for (const auto& g : graphs) {
        for (BoundaryCondition bc :
             {BoundaryCondition::Neumann, BoundaryCondition::Dirichlet}) {
            if (bc == BoundaryCondition::Dirichlet && g.boundary.empty()) continue;
            const SpectrumResult s = laplacian_spectrum(g, bc);
            for (double x : {0.01, 0.17, 0.9, 2.3, 3.9}) {
                CHECK(eigenvalue_count_below(g, bc, x) == counting_function(s, x));
            }
        }
    }
}

TEST_CASE("multiplicity histogram on closed-form spectra") {
    const SpectrumResult tri =
        laplacian_spectrum(make_complete(3), BoundaryCondition::Neumann);
    const auto h = multiplicity_histogram(tri, 1e-6);
    REQUIRE(h.size() == 2);
    CHECK(h.at(1) == 1);
    CHECK(h.at(2) == 1);

    const SpectrumResult path =
        laplacian_spectrum(make_path(40), BoundaryCondition::Neumann);
    for (const auto& [mult, count] : multiplicity_histogram(path, 1e-9))
        CHECK(mult == 1);
}

TEST_CASE("gasket multiplicities grow with the level") {
    int prev = 0;
    for (int level : {3, 4, 5}) {
        const SpectrumResult s = laplacian_spectrum(
            build_gasket(constant_gasket_plan(2, level)), BoundaryCondition::Neumann);
        int max_mult = 0;
        for (const auto& [mult, count] :
             multiplicity_histogram(s, 1e-8 * s.eigenvalues.back()))
            max_mult = std::max(max_mult, mult);
        CHECK(max_mult > prev);
        prev = max_mult;
    }
}

TEST_CASE("multiplicity tolerance guard") {
    const SpectrumResult s = laplacian_spectrum(make_path(50), BoundaryCondition::Neumann);
    CHECK_THROWS_AS(multiplicity_histogram(s, 1.0), ValidationError);
}

TEST_CASE("dense budget guard") {
    WeightedGraph big;
    big.adj.resize(13000);
    for (int i = 0; i + 1 < 13000; ++i) big.add_edge(i, i + 1);
    big.set_degree_measure();
    CHECK_THROWS_AS(laplacian_spectrum(big, BoundaryCondition::Neumann), ResourceError);
}
