#include "hklab/gasket.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "hklab/errors.hpp"
#include "hklab/rng.hpp"

namespace hklab {

namespace {

std::int64_t child_count(int nu) { return static_cast<std::int64_t>(nu) * (nu + 1) / 2; }

}  // namespace

std::int64_t GasketPlan::leaf_cell_count() const {
    if (nu_by_level.empty()) return 1;
    std::int64_t cells = 0;
    for (int nu : nu_by_level.back()) cells += child_count(nu);
    return cells;
}

void GasketPlan::validate() const {
    std::int64_t expected = 1;
    for (int i = 0; i < levels(); ++i) {
        const auto& level = nu_by_level[static_cast<std::size_t>(i)];
        if (static_cast<std::int64_t>(level.size()) != expected)
            throw ValidationError("GasketPlan: level " + std::to_string(i) +
                                  " has wrong cell count");
        std::int64_t next = 0;
        for (int nu : level) {
            if (nu < 2)
                throw ValidationError("GasketPlan: branching factor must be >= 2");
            next += child_count(nu);
        }
        expected = next;
    }
}

GasketPlan constant_gasket_plan(int nu, int levels) {
    if (nu < 2) throw ValidationError("constant_gasket_plan: nu must be >= 2");
    if (levels < 0) throw ValidationError("constant_gasket_plan: negative level count");
    GasketPlan plan;
    std::int64_t cells = 1;
    for (int i = 0; i < levels; ++i) {
        plan.nu_by_level.emplace_back(static_cast<std::size_t>(cells), nu);
        cells *= child_count(nu);
    }
    return plan;
}

GasketPlan scale_irregular_plan(const std::vector<int>& level_nus) {
    GasketPlan plan;
    std::int64_t cells = 1;
    for (int nu : level_nus) {
        if (nu < 2) throw ValidationError("scale_irregular_plan: nu must be >= 2");
        plan.nu_by_level.emplace_back(static_cast<std::size_t>(cells), nu);
        cells *= child_count(nu);
    }
    return plan;
}

GasketPlan build_recursive_gasket(double weight2, double weight3, int levels,
                                  std::uint64_t seed) {
    if (levels < 0) throw ValidationError("build_recursive_gasket: negative level count");
    if (weight2 < 0.0 || weight3 < 0.0 || std::abs(weight2 + weight3 - 1.0) > 1e-12)
        throw ValidationError("build_recursive_gasket: weights must be a probability vector");
    GasketPlan plan;
    Rng rng(seed);
    std::int64_t cells = 1;
    for (int i = 0; i < levels; ++i) {
        std::vector<int> level;
        level.reserve(static_cast<std::size_t>(cells));
        std::int64_t next = 0;
        for (std::int64_t j = 0; j < cells; ++j) {
            const int nu = (rng.uniform01() < weight3) ? 3 : 2;
            level.push_back(nu);
            next += child_count(nu);
        }
        plan.nu_by_level.push_back(std::move(level));
        cells = next;
    }
    return plan;
}

namespace {

// Point in the triangular-lattice basis e1=(1,0), e2=(1/2, sqrt(3)/2),
// scaled by the plan's common denominator.
struct LatticePoint {
    std::int64_t a = 0;
    std::int64_t b = 0;
    bool operator<(const LatticePoint& o) const {
        return a != o.a ? a < o.a : b < o.b;
    }
};

struct Cell {
    LatticePoint p0, p1, p2;  // corners; p1-p0 and p2-p0 span the cell
};

}  // namespace

WeightedGraph build_gasket(const GasketPlan& plan) {
    plan.validate();

    // Common denominator: product over levels of lcm of that level's nus.
    // Every cell corner is then an exact integer point.
    std::int64_t denom = 1;
    for (const auto& level : plan.nu_by_level) {
        std::int64_t l = 1;
        for (int nu : level) l = std::lcm(l, static_cast<std::int64_t>(nu));
        if (denom > (std::int64_t{1} << 40) / l)
            throw ValidationError("build_gasket: plan too deep for exact coordinates");
        denom *= l;
    }

    std::vector<Cell> cells{Cell{{0, 0}, {denom, 0}, {0, denom}}};
    for (const auto& level : plan.nu_by_level) {
        std::vector<Cell> next;
        next.reserve(cells.size() * 3);
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const Cell& c = cells[j];
            const std::int64_t nu = level[j];
            const std::int64_t ua = (c.p1.a - c.p0.a) / nu, ub = (c.p1.b - c.p0.b) / nu;
            const std::int64_t va = (c.p2.a - c.p0.a) / nu, vb = (c.p2.b - c.p0.b) / nu;
            // keep the nu(nu+1)/2 upward sub-triangles
            for (std::int64_t r = 0; r < nu; ++r) {
                for (std::int64_t s = 0; s < nu - r; ++s) {
                    LatticePoint q{c.p0.a + r * ua + s * va, c.p0.b + r * ub + s * vb};
                    next.push_back(Cell{q,
                                        {q.a + ua, q.b + ub},
                                        {q.a + va, q.b + vb}});
                }
            }
        }
        cells = std::move(next);
    }

    // Glue coincident corners; label vertices lexicographically.
    std::map<LatticePoint, int> vertex_id;
    for (const Cell& c : cells)
        for (const LatticePoint& p : {c.p0, c.p1, c.p2}) vertex_id.emplace(p, 0);
    int next_id = 0;
    for (auto& [p, id] : vertex_id) id = next_id++;

    WeightedGraph g;
    g.adj.resize(vertex_id.size());
    for (const Cell& c : cells) {
        const int i0 = vertex_id[c.p0], i1 = vertex_id[c.p1], i2 = vertex_id[c.p2];
        g.add_edge(i0, i1);
        g.add_edge(i1, i2);
        g.add_edge(i0, i2);
    }
    g.set_degree_measure();

    g.root = vertex_id[LatticePoint{0, 0}];
    g.boundary = {vertex_id[LatticePoint{0, 0}], vertex_id[LatticePoint{denom, 0}],
                  vertex_id[LatticePoint{0, denom}]};

    g.coords.emplace(vertex_id.size());
    const double inv = 1.0 / static_cast<double>(denom);
    for (const auto& [p, id] : vertex_id) {
        const double x = (static_cast<double>(p.a) + 0.5 * static_cast<double>(p.b)) * inv;
        const double y = 0.5 * std::sqrt(3.0) * static_cast<double>(p.b) * inv;
        (*g.coords)[static_cast<std::size_t>(id)] = {x, y};
    }

    g.descriptor = "gasket levels=" + std::to_string(plan.levels()) +
                   " cells=" + std::to_string(static_cast<long long>(cells.size()));
    return g;
}

}  // namespace hklab
