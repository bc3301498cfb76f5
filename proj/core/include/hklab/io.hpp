#pragma once

#include <cstdint>
#include <string>

#include "hklab/env.hpp"
#include "hklab/graph.hpp"
#include "hklab/kernel.hpp"
#include "hklab/spectral.hpp"

namespace hklab {

// Text dump formats. All floating-point fields are printed with %.17g so a
// dump-parse round trip reproduces every value bit for bit.

// Environment: '#' header with alpha/seed/window, then one "x tau" per site.
std::string dump_environment(const TrapEnvironment& env);
TrapEnvironment parse_environment(const std::string& text);

// Graph: header, "e u v conductance" per edge, "v id mu [x y]" per vertex.
std::string dump_graph(const WeightedGraph& g);
WeightedGraph parse_graph(const std::string& text);

// Kernel series: '#' key = value headers, CSV rows time,value,error,method.
std::string dump_series_csv(const HeatKernelSeries& s);
HeatKernelSeries parse_series_csv(const std::string& text);

// Spectrum: '#' header with descriptor and boundary condition, one
// eigenvalue per line.
std::string dump_spectrum(const SpectrumResult& s);
SpectrumResult parse_spectrum(const std::string& text);

// Helpers shared by the dump formats and the experiment runner.
std::string format_double(double x);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace hklab
