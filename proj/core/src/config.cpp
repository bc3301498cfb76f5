#include "hklab/config.hpp"

#include <map>
#include <sstream>

#include "hklab/errors.hpp"
#include "hklab/io.hpp"

namespace hklab {

const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::GasketHeatKernel: return "gasket-heatkernel";
        case ExperimentKind::GasketSpectrum: return "gasket-spectrum";
        case ExperimentKind::IicAnnealed: return "iic-annealed";
        case ExperimentKind::UstExponent: return "ust-exponent";
        case ExperimentKind::BtmQuenched: return "btm-quenched";
        case ExperimentKind::BtmAnnealed: return "btm-annealed";
        case ExperimentKind::BtmClt: return "btm-clt";
        case ExperimentKind::OracleSuite: return "oracle-suite";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from(const std::string& name) {
    for (ExperimentKind k :
         {ExperimentKind::GasketHeatKernel, ExperimentKind::GasketSpectrum,
          ExperimentKind::IicAnnealed, ExperimentKind::UstExponent,
          ExperimentKind::BtmQuenched, ExperimentKind::BtmAnnealed, ExperimentKind::BtmClt,
          ExperimentKind::OracleSuite})
        if (name == to_string(k)) return k;
    throw ValidationError("config: experiment.kind '" + name + "' is not recognized");
}

void ExperimentConfig::validate() const {
    auto bad = [](const std::string& field, const std::string& why) {
        throw ValidationError("config: " + field + " " + why);
    };
    if (nu < 2) bad("model.nu", "must be >= 2");
    if (level < 0) bad("model.level", "must be >= 0");
    if (recursive_weight3 > 1.0) bad("model.recursive_weight3", "must be <= 1");
    if (n0 < 2) bad("model.n0", "must be >= 2");
    if (depth < 0) bad("model.depth", "must be >= 0");
    if (box_n < 1) bad("model.box_n", "must be >= 1");
    if (realizations < 1) bad("model.realizations", "must be >= 1");
    if (ust_boundary != "wired" && ust_boundary != "free")
        bad("model.ust_boundary", "must be 'wired' or 'free'");
    if (!(alpha > 0.0)) bad("model.alpha", "must be positive");
    if (environments < 1) bad("model.environments", "must be >= 1");
    if (bc != "neumann" && bc != "dirichlet") bad("model.bc", "must be neumann|dirichlet");
    if (!(t0 > 0.0)) bad("time.t0", "must be positive");
    if (!(t_max >= t0)) bad("time.t_max", "must be >= t0");
    if (points_per_octave < 1) bad("time.points_per_octave", "must be >= 1");
    if (n_max < 2) bad("time.n_max", "must be >= 2");
    if (!(fit_lo > 0.0) || !(fit_hi > fit_lo)) bad("fit.window", "needs 0 < lo < hi");
    if (!(exit_tol > 0.0)) bad("fit.exit_tol", "must be positive");
    if (!(clt_x0 >= 0.0)) bad("clt.x0", "must be >= 0");
    if (!(clt_t_lo > 0.0) || !(clt_t_hi >= clt_t_lo)) bad("clt.interval", "needs 0 < lo <= hi");
    if (clt_lambdas.empty()) bad("clt.lambdas", "must not be empty");
    for (double l : clt_lambdas)
        if (!(l > 0.0)) bad("clt.lambdas", "entries must be positive");
    if (jobs < 1) bad("experiment.jobs", "must be >= 1");
}

namespace {

std::string lambdas_to_string(const std::vector<double>& ls) {
    std::string s;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        if (i) s += ",";
        s += format_double(ls[i]);
    }
    return s;
}

std::vector<double> lambdas_from_string(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "kind = " << to_string(c.kind) << "\n";
    out << "seed = " << c.master_seed << "\n";
    out << "out = " << c.out_dir << "\n";
    out << "jobs = " << c.jobs << "\n";
    out << "\n[model]\n";
    out << "nu = " << c.nu << "\n";
    out << "level = " << c.level << "\n";
    out << "recursive_weight3 = " << format_double(c.recursive_weight3) << "\n";
    out << "n0 = " << c.n0 << "\n";
    out << "depth = " << c.depth << "\n";
    out << "box_n = " << c.box_n << "\n";
    out << "realizations = " << c.realizations << "\n";
    out << "ust_boundary = " << c.ust_boundary << "\n";
    out << "alpha = " << format_double(c.alpha) << "\n";
    out << "environments = " << c.environments << "\n";
    out << "bc = " << c.bc << "\n";
    out << "\n[time]\n";
    out << "t0 = " << format_double(c.t0) << "\n";
    out << "t_max = " << format_double(c.t_max) << "\n";
    out << "points_per_octave = " << c.points_per_octave << "\n";
    out << "n_max = " << c.n_max << "\n";
    out << "\n[fit]\n";
    out << "lo = " << format_double(c.fit_lo) << "\n";
    out << "hi = " << format_double(c.fit_hi) << "\n";
    out << "exit_tol = " << format_double(c.exit_tol) << "\n";
    out << "\n[clt]\n";
    out << "x0 = " << format_double(c.clt_x0) << "\n";
    out << "t_lo = " << format_double(c.clt_t_lo) << "\n";
    out << "t_hi = " << format_double(c.clt_t_hi) << "\n";
    out << "lambdas = " << lambdas_to_string(c.clt_lambdas) << "\n";
    return out.str();
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    bool kind_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments and whitespace
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto l = line.find_first_not_of(" \t\r");
        if (l == std::string::npos) continue;
        auto r = line.find_last_not_of(" \t\r");
        line = line.substr(l, r - l + 1);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("config line " + std::to_string(lineno) +
                                      ": unterminated section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        const std::string qualified = section + "." + key;

        try {
            if (qualified == "experiment.kind") {
                c.kind = experiment_kind_from(value);
                kind_seen = true;
            } else if (qualified == "experiment.seed") c.master_seed = std::stoull(value);
            else if (qualified == "experiment.out") c.out_dir = value;
            else if (qualified == "experiment.jobs") c.jobs = std::stoi(value);
            else if (qualified == "model.nu") c.nu = std::stoi(value);
            else if (qualified == "model.level") c.level = std::stoi(value);
            else if (qualified == "model.recursive_weight3")
                c.recursive_weight3 = std::stod(value);
            else if (qualified == "model.n0") c.n0 = std::stoi(value);
            else if (qualified == "model.depth") c.depth = std::stoi(value);
            else if (qualified == "model.box_n") c.box_n = std::stoi(value);
            else if (qualified == "model.realizations") c.realizations = std::stoi(value);
            else if (qualified == "model.ust_boundary") c.ust_boundary = value;
            else if (qualified == "model.alpha") c.alpha = std::stod(value);
            else if (qualified == "model.environments") c.environments = std::stoi(value);
            else if (qualified == "model.bc") c.bc = value;
            else if (qualified == "time.t0") c.t0 = std::stod(value);
            else if (qualified == "time.t_max") c.t_max = std::stod(value);
            else if (qualified == "time.points_per_octave")
                c.points_per_octave = std::stoi(value);
            else if (qualified == "time.n_max") c.n_max = std::stoi(value);
            else if (qualified == "fit.lo") c.fit_lo = std::stod(value);
            else if (qualified == "fit.hi") c.fit_hi = std::stod(value);
            else if (qualified == "fit.exit_tol") c.exit_tol = std::stod(value);
            else if (qualified == "clt.x0") c.clt_x0 = std::stod(value);
            else if (qualified == "clt.t_lo") c.clt_t_lo = std::stod(value);
            else if (qualified == "clt.t_hi") c.clt_t_hi = std::stod(value);
            else if (qualified == "clt.lambdas") c.clt_lambdas = lambdas_from_string(value);
            else
                throw ValidationError("config: unknown key '" + qualified + "'");
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception&) {
            throw ValidationError("config: bad value for '" + qualified + "': " + value);
        }
    }
    if (!kind_seen) throw ValidationError("config: experiment.kind is required");
    c.validate();
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    return parse_config(read_file(path));
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

}  // namespace hklab
