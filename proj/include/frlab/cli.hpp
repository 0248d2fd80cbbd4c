#pragma once

#include <string>
#include <vector>

#include "frlab/io.hpp"
#include "frlab/solver.hpp"

namespace frlab::cli {

struct Options {
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::csv;
    bool allow_unstable = false;
    int threads = 0;
};

/// Thrown when a computation-level check fails (exit code 2); config errors
/// surface as std::invalid_argument / json exceptions (exit code 1).
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json load_config(const std::string& path);

int cmd_dispersion(const nlohmann::json& cfg, const Options& opt);
int cmd_cfl_map(const nlohmann::json& cfg, const Options& opt);
int cmd_spectral_order(const nlohmann::json& cfg, const Options& opt);
int cmd_convergence(const nlohmann::json& cfg, const Options& opt);
int cmd_sysmatrix(const nlohmann::json& cfg, const Options& opt);
int cmd_equivalence(const nlohmann::json& cfg, const Options& opt);
int cmd_table1(const nlohmann::json& cfg, const Options& opt);

/// "both", "FDG-only" or "FR-only" for the scheme under the given flux blend.
std::string equivalence_verdict(const SchemeSpec& spec, double alpha);

/// Reference maximum-CFL schemes (both families, p in {3,4}, three RK methods).
struct Table1Entry {
    Family family;
    int p;
    RkScheme rk;
    double par1, par2;  // SSDG: (c_p, c_{p-1}); EESFR: (q0, q1)
    double tau_ref;
};
const std::vector<Table1Entry>& table1_entries();
SchemeSpec table1_scheme(const Table1Entry& e);

int run(int argc, char** argv);

}  // namespace frlab::cli
