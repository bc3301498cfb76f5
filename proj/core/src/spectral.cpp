#include "hklab/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hklab/errors.hpp"

namespace hklab {

namespace {

constexpr int kDenseBudget = 12000;

Eigen::MatrixXd dense_laplacian(const WeightedGraph& g, BoundaryCondition bc,
                                std::vector<int>& kept) {
    const int n = g.vertex_count();
    std::vector<char> drop(n, 0);
    if (bc == BoundaryCondition::Dirichlet) {
        if (g.boundary.empty())
            throw ValidationError("laplacian_spectrum: Dirichlet needs a boundary set");
        for (int b : g.boundary) drop[b] = 1;
    }
    kept.clear();
    std::vector<int> remap(n, -1);
    for (int v = 0; v < n; ++v) {
        if (!drop[v]) {
            remap[v] = static_cast<int>(kept.size());
            kept.push_back(v);
        }
    }
    const int m = static_cast<int>(kept.size());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
    for (int v = 0; v < n; ++v) {
        if (drop[v]) continue;
        const int i = remap[v];
        for (const auto& a : g.adj[v]) {
            lap(i, i) += a.conductance;  // full weighted degree, boundary included
            if (!drop[a.to]) lap(i, remap[a.to]) -= a.conductance;
        }
    }
    return lap;
}

}  // namespace

const char* to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::Neumann ? "neumann" : "dirichlet";
}

SpectrumResult laplacian_spectrum(const WeightedGraph& g, BoundaryCondition bc,
                                  bool verify_residuals) {
    if (g.vertex_count() > kDenseBudget)
        throw ResourceError("laplacian_spectrum: " + std::to_string(g.vertex_count()) +
                                " vertices beyond dense budget " +
                                std::to_string(kDenseBudget),
                            kDenseBudget);
    std::vector<int> kept;
    const Eigen::MatrixXd lap = dense_laplacian(g, bc, kept);
    if (lap.rows() == 0)
        throw ValidationError("laplacian_spectrum: no interior vertices left");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        lap, verify_residuals ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error("laplacian_spectrum: eigensolver failed");

    if (verify_residuals) {
        const auto& vecs = solver.eigenvectors();
        const auto& vals = solver.eigenvalues();
        for (int k = 0; k < vals.size(); ++k) {
            const double resid = (lap * vecs.col(k) - vals[k] * vecs.col(k)).norm();
            if (resid > 1e-8 * std::max(1.0, vecs.col(k).norm()))
                throw Error("laplacian_spectrum: residual check failed at index " +
                            std::to_string(k));
        }
    }

    SpectrumResult out;
    out.bc = bc;
    out.graph_descriptor = g.descriptor;
    out.eigenvalues.assign(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    // clip tiny negative round-off on the bottom eigenvalue
    for (double& ev : out.eigenvalues)
        if (ev < 0.0 && ev > -1e-9) ev = std::max(ev, 0.0);
    return out;
}

int eigenvalue_count_below(const WeightedGraph& g, BoundaryCondition bc, double x) {
    const int n = g.vertex_count();
    if (n > 200000)
        throw ResourceError("eigenvalue_count_below: graph beyond slicing budget", 200000);
    std::vector<char> drop(n, 0);
    if (bc == BoundaryCondition::Dirichlet) {
        if (g.boundary.empty())
            throw ValidationError("eigenvalue_count_below: Dirichlet needs a boundary set");
        for (int b : g.boundary) drop[b] = 1;
    }
    std::vector<int> remap(n, -1);
    int m = 0;
    for (int v = 0; v < n; ++v)
        if (!drop[v]) remap[v] = m++;
    if (m == 0) throw ValidationError("eigenvalue_count_below: no interior vertices");

    using Triplet = Eigen::Triplet<double>;
    double scale = 1.0;
    for (int v = 0; v < n; ++v)
        if (!drop[v]) scale = std::max(scale, g.weighted_degree(v));

    // a shift exactly on an eigenvalue (or an unlucky pivot) gets nudged
    double shift = x;
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<Triplet> trips;
        for (int v = 0; v < n; ++v) {
            if (drop[v]) continue;
            const int i = remap[v];
            trips.emplace_back(i, i, g.weighted_degree(v) - shift);
            for (const auto& a : g.adj[v])
                if (!drop[a.to]) trips.emplace_back(i, remap[a.to], -a.conductance);
        }
        Eigen::SparseMatrix<double> a(m, m);
        a.setFromTriplets(trips.begin(), trips.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
        if (ldlt.info() == Eigen::Success) {
            const auto& d = ldlt.vectorD();
            bool suspicious = false;
            int negatives = 0;
            for (int i = 0; i < d.size(); ++i) {
                if (std::abs(d[i]) < 1e-11 * scale) suspicious = true;
                negatives += d[i] < 0.0;
            }
            if (!suspicious) return negatives;
        }
        shift = x * (1.0 + 3e-10 * (attempt + 1)) + 1e-13 * scale * (attempt + 1);
    }
    throw Error("eigenvalue_count_below: factorization kept hitting near-zero pivots");
}

int counting_function(const SpectrumResult& s, double x) {
    return static_cast<int>(std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), x) -
                            s.eigenvalues.begin());
}

std::vector<double> geometric_grid(double lo, double hi, int points_per_decade) {
    if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("geometric_grid: need 0 < lo < hi");
    if (points_per_decade < 2)
        throw ValidationError("geometric_grid: need >= 2 points per decade");
    std::vector<double> grid;
    const double step = std::pow(10.0, 1.0 / points_per_decade);
    for (double x = lo; x <= hi * (1.0 + 1e-12); x *= step) grid.push_back(x);
    return grid;
}

std::vector<double> default_weyl_grid(const SpectrumResult& s, int points_per_decade) {
    const double top = s.eigenvalues.back();
    double bottom = 0.0;
    for (double ev : s.eigenvalues)
        if (ev > 1e-12 * std::max(1.0, top)) {
            bottom = ev;
            break;
        }
    if (!(bottom > 0.0)) throw ValidationError("default_weyl_grid: no positive eigenvalue");
    return geometric_grid(bottom, top, points_per_decade);
}

WeylRatioSeries weyl_ratio(const SpectrumResult& s, double exponent,
                           const std::vector<double>& x_grid) {
    if (!(exponent > 0.0)) throw ValidationError("weyl_ratio: exponent must be positive");
    if (x_grid.size() < 2) throw ValidationError("weyl_ratio: grid too small");
    const double top = s.eigenvalues.back();
    double bottom = 0.0;
    for (double ev : s.eigenvalues)
        if (ev > 1e-12 * std::max(1.0, top)) {
            bottom = ev;
            break;
        }
    if (x_grid.front() < bottom * (1.0 - 1e-9) || x_grid.back() > top * (1.0 + 1e-9))
        throw ValidationError(
            "weyl_ratio: grid must lie within (smallest positive eigenvalue, largest)");

    WeylRatioSeries out;
    out.x = x_grid;
    out.ratio.reserve(x_grid.size());
    for (double x : x_grid)
        out.ratio.push_back(counting_function(s, x) / std::pow(x, exponent));

    // top reliable decade: ends at the largest grid point still within the
    // bottom tenth of the spectrum
    const int n = static_cast<int>(s.eigenvalues.size());
    const int count_cap = std::max(2, n / 10);
    double x_hi = -1.0;
    for (double x : x_grid)
        if (counting_function(s, x) <= count_cap) x_hi = x;
    if (x_hi <= 0.0 || x_hi / 10.0 < x_grid.front() * (1.0 - 1e-9) ||
        counting_function(s, x_hi / 10.0) < 1)
        throw ValidationError("weyl_ratio: empty reliable range");
    out.decade_hi = x_hi;
    out.decade_lo = x_hi / 10.0;

    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        if (x_grid[i] < out.decade_lo * (1.0 - 1e-9) || x_grid[i] > x_hi * (1.0 + 1e-9))
            continue;
        hi = std::max(hi, out.ratio[i]);
        lo = std::min(lo, out.ratio[i]);
    }
    out.max_ratio = hi;
    out.min_ratio = lo;
    out.max_over_min = hi / lo;
    return out;
}

std::map<int, int> multiplicity_histogram(const SpectrumResult& s, double tol) {
    if (!(tol > 0.0)) throw ValidationError("multiplicity_histogram: tol must be positive");
    const auto& ev = s.eigenvalues;
    if (ev.empty()) throw ValidationError("multiplicity_histogram: empty spectrum");

    // guard: tol must resolve typical gaps between distinct eigenvalues
    const double noise = 16.0 * 1e-16 * std::max(1.0, std::abs(ev.back()));
    std::vector<double> gaps;
    for (std::size_t i = 1; i < ev.size(); ++i) {
        const double gap = ev[i] - ev[i - 1];
        if (gap > noise) gaps.push_back(gap);
    }
    if (!gaps.empty()) {
        std::sort(gaps.begin(), gaps.end());
        const double median_gap = gaps[gaps.size() / 2];
        if (tol > median_gap)
            throw ValidationError("multiplicity_histogram: tol exceeds median spectral gap");
    }

    std::map<int, int> hist;
    std::size_t i = 0;
    while (i < ev.size()) {
        std::size_t j = i + 1;
        while (j < ev.size() && ev[j] - ev[j - 1] <= tol) ++j;
        hist[static_cast<int>(j - i)]++;
        i = j;
    }
    return hist;
}

}  // namespace hklab
