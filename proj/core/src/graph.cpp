#include "hklab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "hklab/errors.hpp"

namespace hklab {

std::int64_t WeightedGraph::edge_count() const {
    std::int64_t arcs = 0;
    for (const auto& nbrs : adj) arcs += static_cast<std::int64_t>(nbrs.size());
    return arcs / 2;
}

double WeightedGraph::weighted_degree(int v) const {
    double d = 0.0;
    for (const auto& a : adj[v]) d += a.conductance;
    return d;
}

void WeightedGraph::add_edge(int u, int v, double conductance) {
    adj[u].push_back({v, conductance});
    adj[v].push_back({u, conductance});
}

void WeightedGraph::set_degree_measure() {
    measure.resize(adj.size());
    for (int v = 0; v < vertex_count(); ++v) measure[v] = weighted_degree(v);
}

bool WeightedGraph::is_connected() const {
    if (adj.empty()) return false;
    std::vector<char> seen(adj.size(), 0);
    std::queue<int> q;
    q.push(root);
    seen[root] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& a : adj[v]) {
            if (!seen[a.to]) {
                seen[a.to] = 1;
                ++reached;
                q.push(a.to);
            }
        }
    }
    return reached == adj.size();
}

bool WeightedGraph::is_bipartite() const {
    std::vector<int> color(adj.size(), -1);
    std::queue<int> q;
    for (int s = 0; s < vertex_count(); ++s) {
        if (color[s] != -1) continue;
        color[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const auto& a : adj[v]) {
                if (color[a.to] == -1) {
                    color[a.to] = 1 - color[v];
                    q.push(a.to);
                } else if (color[a.to] == color[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

void WeightedGraph::validate() const {
    const int n = vertex_count();
    if (n == 0) throw ValidationError("graph: empty vertex set");
    if (root < 0 || root >= n) throw ValidationError("graph: root out of range");
    if (measure.size() != adj.size())
        throw ValidationError("graph: measure size mismatch");
    for (int v = 0; v < n; ++v) {
        if (!(measure[v] > 0.0))
            throw ValidationError("graph: non-positive measure at vertex " +
                                  std::to_string(v));
        for (const auto& a : adj[v]) {
            if (a.to < 0 || a.to >= n)
                throw ValidationError("graph: dangling arc");
            if (!(a.conductance > 0.0))
                throw ValidationError("graph: non-positive conductance");
            // symmetry: count of (v->to) must match (to->v) with equal weight
            double forward = 0.0, backward = 0.0;
            for (const auto& b : adj[v])
                if (b.to == a.to) forward += b.conductance;
            for (const auto& b : adj[a.to])
                if (b.to == v) backward += b.conductance;
            if (std::abs(forward - backward) > 1e-12 * std::max(1.0, forward))
                throw ValidationError("graph: asymmetric adjacency");
        }
    }
    for (int b : boundary)
        if (b < 0 || b >= n) throw ValidationError("graph: boundary vertex out of range");
    if (!is_connected()) throw ValidationError("graph: not connected from root");
}

WeightedGraph make_single_edge() {
    WeightedGraph g;
    g.adj.resize(2);
    g.add_edge(0, 1);
    g.set_degree_measure();
    g.descriptor = "single-edge";
    return g;
}

WeightedGraph make_path(int n) {
    if (n < 2) throw ValidationError("make_path: need at least 2 vertices");
    WeightedGraph g;
    g.adj.resize(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    g.set_degree_measure();
    g.boundary = {0, n - 1};
    g.descriptor = "path n=" + std::to_string(n);
    return g;
}

WeightedGraph make_cycle(int n) {
    if (n < 3) throw ValidationError("make_cycle: need at least 3 vertices");
    WeightedGraph g;
    g.adj.resize(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    g.set_degree_measure();
    g.descriptor = "cycle n=" + std::to_string(n);
    return g;
}

WeightedGraph make_complete(int n) {
    if (n < 2) throw ValidationError("make_complete: need at least 2 vertices");
    WeightedGraph g;
    g.adj.resize(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    g.set_degree_measure();
    g.descriptor = "complete n=" + std::to_string(n);
    return g;
}

WeightedGraph make_grid(int rows, int cols) {
    if (rows < 2 || cols < 2) throw ValidationError("make_grid: need at least 2x2");
    WeightedGraph g;
    g.adj.resize(static_cast<std::size_t>(rows) * cols);
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1));
            if (r + 1 < rows) g.add_edge(id(r, c), id(r + 1, c));
        }
    }
    g.set_degree_measure();
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (r == 0 || c == 0 || r == rows - 1 || c == cols - 1)
                g.boundary.push_back(id(r, c));
    g.coords.emplace();
    g.coords->reserve(g.adj.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            g.coords->push_back({static_cast<double>(c), static_cast<double>(r)});
    g.descriptor = "grid " + std::to_string(rows) + "x" + std::to_string(cols);
    return g;
}

}  // namespace hklab
