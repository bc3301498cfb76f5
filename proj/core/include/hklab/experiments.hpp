#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hklab/config.hpp"

namespace hklab {

struct ManifestEntry {
    std::string name;
    std::uint64_t bytes = 0;
    std::uint64_t fnv64 = 0;
    std::string seeds;  // provenance of the randomness behind this artifact
};

struct RunResult {
    std::vector<ManifestEntry> entries;
    std::string manifest_path;
    std::string summary;  // one-paragraph outcome, also stored in the out dir
    bool ok = true;       // false when an embedded pass/fail rule failed
};

// Executes the configured experiment: writes series/spectra CSVs, an
// analysis summary, one SVG per plotted series and a manifest naming every
// file with its byte count, content hash and seed provenance. Deterministic:
// identical configs produce byte-identical artifacts.
RunResult run(const ExperimentConfig& cfg);

// Dry-run plan: model sizes, matrix dimensions, grids, window estimates.
// No computation beyond cheap counting.
std::string describe(const ExperimentConfig& cfg);

}  // namespace hklab
