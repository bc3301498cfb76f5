#include "hklab/ust.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hklab/errors.hpp"
#include "hklab/rng.hpp"

namespace hklab {

namespace {

// Picks an incident arc of v with probability proportional to conductance.
int random_neighbour(const WeightedGraph& g, int v, double wdeg, Rng& rng) {
    const auto& arcs = g.adj[static_cast<std::size_t>(v)];
    double u = rng.uniform01() * wdeg;
    for (std::size_t i = 0; i + 1 < arcs.size(); ++i) {
        u -= arcs[i].conductance;
        if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(arcs.size()) - 1;
}

// Wilson's algorithm with the tree grown from `start`. Uses the next-arc
// overwrite formulation: re-walking a vertex overwrites its pointer, which
// erases loops implicitly.
WeightedGraph wilson_from(const WeightedGraph& g, int start, Rng& rng) {
    const int n = g.vertex_count();
    std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
    std::vector<int> next_arc(static_cast<std::size_t>(n), -1);
    std::vector<double> wdeg(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) wdeg[static_cast<std::size_t>(v)] = g.weighted_degree(v);

    in_tree[static_cast<std::size_t>(start)] = 1;
    for (int v = 0; v < n; ++v) {
        int u = v;
        while (!in_tree[static_cast<std::size_t>(u)]) {
            const int a = random_neighbour(g, u, wdeg[static_cast<std::size_t>(u)], rng);
            next_arc[static_cast<std::size_t>(u)] = a;
            u = g.adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(a)].to;
        }
        u = v;
        while (!in_tree[static_cast<std::size_t>(u)]) {
            in_tree[static_cast<std::size_t>(u)] = 1;
            u = g.adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(next_arc[u])].to;
        }
    }

    WeightedGraph tree;
    tree.adj.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        if (v == start) continue;
        const auto& arc =
            g.adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(next_arc[v])];
        tree.add_edge(v, arc.to, 1.0);
    }
    tree.set_degree_measure();
    tree.root = g.root;
    tree.boundary = g.boundary;
    tree.coords = g.coords;
    return tree;
}

}  // namespace

WeightedGraph uniform_spanning_tree(const WeightedGraph& g, std::uint64_t seed) {
    if (!g.is_connected())
        throw ValidationError("uniform_spanning_tree: graph must be connected");
    Rng rng(seed);
    WeightedGraph tree = wilson_from(g, g.root, rng);
    tree.descriptor = "ust of (" + g.descriptor + ") seed=" + std::to_string(seed);
    return tree;
}

WeightedGraph wilson_ust(int N, std::uint64_t seed) {
    if (N < 1) throw ValidationError("wilson_ust: N must be >= 1");
    const int side = 2 * N - 1;  // interior points per axis
    const int interior = side * side;
    const int wired = interior;

    WeightedGraph box;
    box.adj.resize(static_cast<std::size_t>(interior) + 1);
    auto id = [&](int x, int y) { return (y + N - 1) * side + (x + N - 1); };
    for (int y = -(N - 1); y <= N - 1; ++y) {
        for (int x = -(N - 1); x <= N - 1; ++x) {
            const int v = id(x, y);
            const int dx[4] = {1, -1, 0, 0};
            const int dy[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                const int nx = x + dx[k], ny = y + dy[k];
                const bool inside = std::abs(nx) <= N - 1 && std::abs(ny) <= N - 1;
                const int w = inside ? id(nx, ny) : wired;
                if (w > v || w == wired) box.add_edge(v, w, 1.0);
            }
        }
    }
    box.set_degree_measure();
    box.root = wired;  // Wilson grows the tree from the wired vertex

    Rng rng(seed);
    WeightedGraph tree = wilson_from(box, wired, rng);
    tree.root = id(0, 0);
    tree.boundary = {wired};
    tree.coords.emplace(static_cast<std::size_t>(interior) + 1);
    for (int y = -(N - 1); y <= N - 1; ++y)
        for (int x = -(N - 1); x <= N - 1; ++x)
            (*tree.coords)[static_cast<std::size_t>(id(x, y))] = {double(x), double(y)};
    (*tree.coords)[static_cast<std::size_t>(wired)] = {double(N), double(N)};
    tree.descriptor = "ust wired N=" + std::to_string(N) + " seed=" + std::to_string(seed);
    return tree;
}

WeightedGraph wilson_ust_free(int N, std::uint64_t seed) {
    if (N < 1) throw ValidationError("wilson_ust_free: N must be >= 1");
    WeightedGraph grid = make_grid(2 * N + 1, 2 * N + 1);
    grid.root = (2 * N + 1) * N + N;  // origin at the centre
    WeightedGraph tree = uniform_spanning_tree(grid, seed);
    tree.boundary.clear();
    tree.descriptor = "ust free N=" + std::to_string(N) + " seed=" + std::to_string(seed);
    return tree;
}

std::int64_t spanning_tree_count(const WeightedGraph& g) {
    const int n = g.vertex_count();
    if (n > 220)
        throw ValidationError("spanning_tree_count: graph too large for exact count");
    if (!g.is_connected())
        throw ValidationError("spanning_tree_count: graph must be connected");
    for (int v = 0; v < n; ++v)
        for (const auto& a : g.adj[static_cast<std::size_t>(v)])
            if (a.conductance != 1.0)
                throw ValidationError("spanning_tree_count: needs unit conductances");
    if (n == 1) return 1;

    // Laplacian cofactor: drop the last row/column, then fraction-free
    // Bareiss elimination over exact integers.
    const int m = n - 1;
    std::vector<__int128> a(static_cast<std::size_t>(m) * m, 0);
    auto at = [&](int i, int j) -> __int128& { return a[static_cast<std::size_t>(i) * m + j]; };
    for (int v = 0; v < m; ++v) {
        at(v, v) = static_cast<__int128>(g.adj[static_cast<std::size_t>(v)].size());
        for (const auto& arc : g.adj[static_cast<std::size_t>(v)])
            if (arc.to < m) at(v, arc.to) -= 1;
    }

    auto checked_mul = [](__int128 x, __int128 y) {
        __int128 r;
        if (__builtin_mul_overflow(x, y, &r))
            throw ResourceError("spanning_tree_count: overflow beyond exact-integer range");
        return r;
    };

    __int128 prev_pivot = 1;
    for (int k = 0; k < m - 1; ++k) {
        if (at(k, k) == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < m; ++i)
                if (at(i, k) != 0) { swap_row = i; break; }
            if (swap_row < 0) return 0;  // singular: no spanning tree
            for (int j = 0; j < m; ++j) std::swap(at(k, j), at(swap_row, j));
            // a row swap flips the determinant sign; for a Laplacian cofactor
            // the count is |det|, so the sign is dropped at the end anyway
        }
        for (int i = k + 1; i < m; ++i) {
            for (int j = k + 1; j < m; ++j) {
                const __int128 num =
                    checked_mul(at(i, j), at(k, k)) - checked_mul(at(i, k), at(k, j));
                at(i, j) = num / prev_pivot;  // exact division (Bareiss)
            }
            at(i, k) = 0;
        }
        prev_pivot = at(k, k);
    }

    __int128 det = at(m - 1, m - 1);
    if (det < 0) det = -det;
    if (det > static_cast<__int128>(INT64_MAX))
        throw ResourceError("spanning_tree_count: overflow beyond exact-integer range");
    return static_cast<std::int64_t>(det);
}

}  // namespace hklab
