#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hklab {

enum class ExperimentKind {
    GasketHeatKernel,
    GasketSpectrum,
    IicAnnealed,
    UstExponent,
    BtmQuenched,
    BtmAnnealed,
    BtmClt,
    OracleSuite,
};

const char* to_string(ExperimentKind k);
ExperimentKind experiment_kind_from(const std::string& name);

// Flat sectioned key=value configuration of one experiment run. Every random
// quantity in a run derives from master_seed; serialize/parse round-trips
// the full record unchanged.
struct ExperimentConfig {
    // [experiment]
    ExperimentKind kind = ExperimentKind::OracleSuite;
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    int jobs = 1;

    // [model]
    int nu = 2;                     // gasket branching (constant plans)
    int level = 4;                  // gasket subdivision rounds
    double recursive_weight3 = -1;  // >=0: random recursive gasket, P(nu=3)
    int n0 = 2;                     // IIC tree arity
    int depth = 0;                  // IIC truncation depth; 0 = auto-extend
    int box_n = 100;                // UST box half-width N
    int realizations = 5;           // UST realizations
    std::string ust_boundary = "wired";  // wired | free
    double alpha = 0.5;             // BTM tail index
    int environments = 200;         // ensemble size M
    std::string bc = "neumann";     // spectrum boundary condition

    // [time]
    double t0 = 1.0;
    double t_max = 1e4;
    int points_per_octave = 4;
    int n_max = 10000;              // discrete-time horizon

    // [fit]
    double fit_lo = 100.0;
    double fit_hi = 10000.0;
    double exit_tol = 1e-4;

    // [clt]
    double clt_x0 = 2.0;
    double clt_t_lo = 1.0;
    double clt_t_hi = 2.0;
    std::vector<double> clt_lambdas = {20, 40, 80};

    // Throws ValidationError naming the offending field.
    void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& c);
ExperimentConfig load_config_file(const std::string& path);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace hklab
