#include "hklab/iic.hpp"

#include <string>

#include "hklab/errors.hpp"
#include "hklab/rng.hpp"

namespace hklab {

IicSample build_iic_sample(int n0, int depth, std::uint64_t seed) {
    if (n0 < 2) throw ValidationError("build_iic: n0 must be >= 2");
    if (depth < 1) throw ValidationError("build_iic: depth must be >= 1");

    const double pc = 1.0 / static_cast<double>(n0);
    Rng rng(seed);

    IicSample out;
    WeightedGraph& g = out.graph;
    g.adj.resize(1);
    out.parent = {-1};
    out.slot = {-1};
    out.level = {0};
    std::vector<int> level{0};

    for (int d = 0; d < depth; ++d) {
        const auto m = static_cast<std::uint64_t>(level.size());
        const auto special_vertex = rng.below(m);
        const auto special_slot = rng.below(static_cast<std::uint64_t>(n0));

        std::vector<int> next;
        for (std::uint64_t j = 0; j < m; ++j) {
            const int parent = level[j];
            for (int c = 0; c < n0; ++c) {
                bool open;
                if (j == special_vertex && c == static_cast<int>(special_slot)) {
                    open = true;  // the size-biased slot
                } else {
                    open = rng.uniform01() < pc;
                }
                if (open) {
                    const int child = g.vertex_count();
                    g.adj.emplace_back();
                    g.add_edge(parent, child);
                    out.parent.push_back(parent);
                    out.slot.push_back(c);
                    out.level.push_back(d + 1);
                    next.push_back(child);
                }
            }
        }
        level = std::move(next);
    }

    g.set_degree_measure();
    g.root = 0;
    g.boundary = level;
    g.descriptor = "iic n0=" + std::to_string(n0) + " depth=" + std::to_string(depth) +
                   " seed=" + std::to_string(seed);
    return out;
}

WeightedGraph build_iic(int n0, int depth, std::uint64_t seed) {
    return build_iic_sample(n0, depth, seed).graph;
}

}  // namespace hklab
