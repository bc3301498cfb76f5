#include "hklab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hklab/errors.hpp"

namespace hklab {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::vector<std::string> non_comment_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

// pulls "key = value" out of '#' header lines
std::string header_value(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    const std::string needle = key + " = ";
    while (std::getline(in, line)) {
        if (line.empty() || line[0] != '#') continue;
        const auto pos = line.find(needle);
        if (pos != std::string::npos) return line.substr(pos + needle.size());
    }
    throw ValidationError("parse: missing header key '" + key + "'");
}

}  // namespace

// ------------------------------------------------------------- environment

std::string dump_environment(const TrapEnvironment& env) {
    std::ostringstream out;
    out << "# hklab environment dump\n";
    out << "# alpha = " << format_double(env.alpha()) << "\n";
    out << "# seed = " << env.seed() << "\n";
    out << "# window = " << env.window().lo << " " << env.window().hi << "\n";
    for (std::int64_t x = env.window().lo; x <= env.window().hi; ++x)
        out << x << " " << format_double(env.tau(x)) << "\n";
    return out.str();
}

TrapEnvironment parse_environment(const std::string& text) {
    const double alpha = std::stod(header_value(text, "alpha"));
    const std::uint64_t seed = std::stoull(header_value(text, "seed"));
    std::istringstream win(header_value(text, "window"));
    SiteInterval window{};
    if (!(win >> window.lo >> window.hi))
        throw ValidationError("parse_environment: bad window header");

    TrapEnvironment env = sample_traps(alpha, window, seed);
    // verify the regenerated values against the dump
    for (const auto& line : non_comment_lines(text)) {
        std::istringstream ls(line);
        std::int64_t x;
        double tau;
        if (!(ls >> x >> tau)) throw ValidationError("parse_environment: bad site line");
        if (tau != env.tau(x))
            throw ValidationError("parse_environment: dump disagrees with (alpha, seed) at x=" +
                                  std::to_string(x));
    }
    return env;
}

// ------------------------------------------------------------------- graph

std::string dump_graph(const WeightedGraph& g) {
    std::ostringstream out;
    out << "# hklab graph dump\n";
    out << "# descriptor = " << g.descriptor << "\n";
    out << "# vertices = " << g.vertex_count() << "\n";
    out << "# root = " << g.root << "\n";
    out << "# boundary =";
    for (int b : g.boundary) out << " " << b;
    out << "\n";
    for (int v = 0; v < g.vertex_count(); ++v)
        for (const auto& a : g.adj[v])
            if (a.to > v)
                out << "e " << v << " " << a.to << " " << format_double(a.conductance)
                    << "\n";
    for (int v = 0; v < g.vertex_count(); ++v) {
        out << "v " << v << " " << format_double(g.measure[v]);
        if (g.coords)
            out << " " << format_double((*g.coords)[v][0]) << " "
                << format_double((*g.coords)[v][1]);
        out << "\n";
    }
    return out.str();
}

WeightedGraph parse_graph(const std::string& text) {
    WeightedGraph g;
    g.descriptor = header_value(text, "descriptor");
    const int n = std::stoi(header_value(text, "vertices"));
    g.root = std::stoi(header_value(text, "root"));
    {
        std::istringstream bs(header_value(text, "boundary"));
        int b;
        while (bs >> b) g.boundary.push_back(b);
    }
    g.adj.resize(n);
    g.measure.assign(n, 0.0);
    bool any_coords = false;
    std::vector<std::array<double, 2>> coords(n, {0.0, 0.0});
    for (const auto& line : non_comment_lines(text)) {
        std::istringstream ls(line);
        char tag;
        ls >> tag;
        if (tag == 'e') {
            int u, v;
            double c;
            if (!(ls >> u >> v >> c)) throw ValidationError("parse_graph: bad edge line");
            g.add_edge(u, v, c);
        } else if (tag == 'v') {
            int v;
            double mu;
            if (!(ls >> v >> mu)) throw ValidationError("parse_graph: bad vertex line");
            g.measure[v] = mu;
            double x, y;
            if (ls >> x >> y) {
                coords[v] = {x, y};
                any_coords = true;
            }
        } else {
            throw ValidationError("parse_graph: unknown line tag");
        }
    }
    if (any_coords) g.coords = std::move(coords);
    g.validate();
    return g;
}

// ------------------------------------------------------------------ series

std::string dump_series_csv(const HeatKernelSeries& s) {
    std::ostringstream out;
    out << "# hklab kernel series\n";
    out << "# model = " << s.model << "\n";
    out << "# source = " << s.source << "\n";
    out << "# target = " << s.target << "\n";
    out << "# method = " << to_string(s.method) << "\n";
    out << "time,value,error\n";
    for (const auto& p : s.points)
        out << format_double(p.time) << "," << format_double(p.value) << ","
            << format_double(p.error) << "\n";
    return out.str();
}

HeatKernelSeries parse_series_csv(const std::string& text) {
    HeatKernelSeries s;
    s.model = header_value(text, "model");
    s.source = std::stoi(header_value(text, "source"));
    s.target = std::stoi(header_value(text, "target"));
    const std::string method = header_value(text, "method");
    if (method == "exact-iteration") s.method = KernelMethod::ExactIteration;
    else if (method == "uniformization") s.method = KernelMethod::Uniformization;
    else if (method == "monte-carlo") s.method = KernelMethod::MonteCarlo;
    else throw ValidationError("parse_series_csv: unknown method tag");

    for (const auto& line : non_comment_lines(text)) {
        if (line.rfind("time,", 0) == 0) continue;  // column header
        KernelPoint p;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &p.time, &p.value, &p.error) != 3)
            throw ValidationError("parse_series_csv: bad row '" + line + "'");
        s.points.push_back(p);
    }
    return s;
}

// ---------------------------------------------------------------- spectrum

std::string dump_spectrum(const SpectrumResult& s) {
    std::ostringstream out;
    out << "# hklab spectrum dump\n";
    out << "# descriptor = " << s.graph_descriptor << "\n";
    out << "# bc = " << to_string(s.bc) << "\n";
    for (double ev : s.eigenvalues) out << format_double(ev) << "\n";
    return out.str();
}

SpectrumResult parse_spectrum(const std::string& text) {
    SpectrumResult s;
    s.graph_descriptor = header_value(text, "descriptor");
    const std::string bc = header_value(text, "bc");
    if (bc == "neumann") s.bc = BoundaryCondition::Neumann;
    else if (bc == "dirichlet") s.bc = BoundaryCondition::Dirichlet;
    else throw ValidationError("parse_spectrum: unknown boundary condition");
    for (const auto& line : non_comment_lines(text)) s.eigenvalues.push_back(std::stod(line));
    return s;
}

}  // namespace hklab
