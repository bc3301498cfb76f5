#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hklab {

// Finite weighted graph: the common substrate for gasket graphs, IIC
// truncations, uniform spanning trees and trap-model windows.
//
// Invariants (checked by validate()):
//   - adjacency is symmetric, conductances strictly positive,
//   - connected from `root`,
//   - measure[v] > 0 for all v; for simple-walk graphs measure[v] equals
//     the (conductance-weighted) degree of v.
struct WeightedGraph {
    struct Arc {
        int to = 0;
        double conductance = 1.0;
    };

    std::vector<std::vector<Arc>> adj;
    std::vector<double> measure;   // invariant measure of the walk at each vertex
    int root = 0;
    std::vector<int> boundary;     // distinguished boundary vertices (may be empty)
    std::optional<std::vector<std::array<double, 2>>> coords;  // planar layout, if any
    std::string descriptor;        // builder name + parameters + seed

    int vertex_count() const { return static_cast<int>(adj.size()); }

    // Number of undirected edges.
    std::int64_t edge_count() const;

    // Sum of conductances incident to v.
    double weighted_degree(int v) const;

    void add_edge(int u, int v, double conductance = 1.0);

    // Sets measure[v] = weighted degree of v (the simple-walk convention).
    void set_degree_measure();

    bool is_connected() const;
    bool is_bipartite() const;

    // Throws ValidationError when a structural invariant is violated.
    void validate() const;
};

// Small standard graphs, used by tests, oracles and Weyl controls.
WeightedGraph make_single_edge();
WeightedGraph make_path(int n);
WeightedGraph make_cycle(int n);
WeightedGraph make_complete(int n);

// rows x cols grid; boundary = outer ring vertices.
WeightedGraph make_grid(int rows, int cols);

}  // namespace hklab
