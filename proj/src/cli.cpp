#include "frlab/cli.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "CLI11.hpp"

namespace frlab::cli {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

void check_keys(const nlohmann::json& j, const char* ctx, std::set<std::string> allowed) {
    if (!j.is_object()) throw std::invalid_argument(std::string(ctx) + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            throw std::invalid_argument(std::string(ctx) + ": unknown key '" + key + "'");
    }
}

SchemeSpec scheme_at(const nlohmann::json& j) { return j.get<SchemeSpec>(); }

std::vector<SchemeSpec> scheme_list(const nlohmann::json& cfg) {
    std::vector<SchemeSpec> specs;
    if (cfg.contains("scheme")) specs.push_back(scheme_at(cfg.at("scheme")));
    if (cfg.contains("schemes"))
        for (const auto& js : cfg.at("schemes")) specs.push_back(scheme_at(js));
    if (specs.empty()) throw std::invalid_argument("config: missing 'scheme' or 'schemes'");
    return specs;
}

void gate_stability(const SchemeSpec& spec, const Options& opt) {
    if (opt.allow_unstable) return;
    if (auto why = stability_violation(spec))
        throw CheckFailure("unstable scheme: " + *why + " (pass --allow-unstable to override)");
}

struct GridAxis {
    double min = 0.0, max = 0.0;
    int n = 0;
    bool log = false;

    double at(int i) const {
        if (n == 1) return min;
        if (log) return min * std::pow(max / min, static_cast<double>(i) / (n - 1));
        return min + (max - min) * static_cast<double>(i) / (n - 1);
    }
};

GridAxis parse_axis(const nlohmann::json& j, const char* ctx) {
    check_keys(j, ctx, {"min", "max", "n", "scale"});
    GridAxis ax;
    ax.min = j.at("min").get<double>();
    ax.max = j.at("max").get<double>();
    ax.n = j.at("n").get<int>();
    const std::string scale = j.value("scale", "linear");
    if (scale == "log")
        ax.log = true;
    else if (scale != "linear")
        throw std::invalid_argument(std::string(ctx) + ": scale must be 'linear' or 'log'");
    if (ax.n < 1) throw std::invalid_argument(std::string(ctx) + ": n must be >= 1");
    if (ax.log && (ax.min <= 0.0 || ax.max <= 0.0))
        throw std::invalid_argument(std::string(ctx) + ": log scale needs positive bounds");
    return ax;
}

/// Two-parameter scheme for the sweep commands: SSDG maps (par1, par2) to
/// (c_p, c_{p-1}); EESFR to (q0, q1).
SchemeSpec sweep_scheme(Family family, int p, double alpha, double par1, double par2) {
    SchemeSpec spec;
    spec.family = family;
    spec.p = p;
    spec.alpha = alpha;
    if (family == Family::ssdg) {
        std::vector<double> c(static_cast<std::size_t>(p), 0.0);
        c[p - 1] = par1;
        c[p - 2] = par2;
        spec.params = c;
    } else if (family == Family::eesfr) {
        spec.params = {par1, par2};
    } else {
        throw std::invalid_argument("parameter sweeps support the SSDG and EESFR families only");
    }
    spec.validate();
    return spec;
}

std::string file_tag(const SchemeSpec& spec) {
    return family_name(spec.family) + "_p" + std::to_string(spec.p);
}

}  // namespace

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

int cmd_dispersion(const nlohmann::json& cfg, const Options& opt) {
    check_keys(cfg, "dispersion", {"scheme", "schemes", "theta_samples"});
    const int samples = cfg.value("theta_samples", 401);
    const auto specs = scheme_list(cfg);
    for (std::size_t s = 0; s < specs.size(); ++s) {
        const SchemeSpec& spec = specs[s];
        gate_stability(spec, opt);
        const FilterPair fp = make_filter(build_operators(spec.p), spec);
        const Eigen::VectorXd grid = default_theta_grid(spec.p, samples);
        const WaveAnalysis wa = solve_modes(fp, spec.alpha, grid);

        Table tab;
        tab.name = "dispersion_" + std::to_string(s) + "_" + file_tag(spec);
        tab.config = {{"command", "dispersion"}, {"theta_samples", samples}, {"scheme", spec}};
        tab.columns = {"theta", "re_omega_phys", "im_omega_phys"};
        for (int m = 0; m <= spec.p; ++m) {
            tab.columns.push_back("re_omega_" + std::to_string(m));
            tab.columns.push_back("im_omega_" + std::to_string(m));
        }
        tab.columns.push_back("re_omega_exact");
        tab.columns.push_back("im_omega_exact");
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            std::vector<Cell> row{grid(i), wa.omega_phys(i).real(), wa.omega_phys(i).imag()};
            for (int m = 0; m <= spec.p; ++m) {
                row.emplace_back(wa.omega_all[i](m).real());
                row.emplace_back(wa.omega_all[i](m).imag());
            }
            row.emplace_back(grid(i));  // exact dispersion
            row.emplace_back(0.0);      // exact dissipation
            tab.rows.push_back(std::move(row));
        }
        std::cout << write_table(tab, opt.out_dir, opt.format) << "\n";
    }
    return 0;
}

int cmd_cfl_map(const nlohmann::json& cfg, const Options& opt) {
    check_keys(cfg, "cfl-map",
               {"family", "p", "alpha", "rk", "param1", "param2", "tol", "theta_samples"});
    const Family family = family_from_name(cfg.at("family").get<std::string>());
    const int p = cfg.at("p").get<int>();
    const double alpha = cfg.value("alpha", 0.0);
    const RkMethod rk = RkMethod::get(rk_from_name(cfg.at("rk").get<std::string>()));
    const GridAxis ax1 = parse_axis(cfg.at("param1"), "param1");
    const GridAxis ax2 = parse_axis(cfg.at("param2"), "param2");
    const double tol = cfg.value("tol", 1e-4);
    const int samples = cfg.value("theta_samples", 400);

    const OperatorSet ops = build_operators(p);
    const int cells = ax1.n * ax2.n;
    std::vector<std::array<double, 4>> grid(static_cast<std::size_t>(cells));
    for_each_index(cells, Exec::parallel, [&](std::ptrdiff_t c) {
        const int i = static_cast<int>(c) / ax2.n;
        const int j = static_cast<int>(c) % ax2.n;
        const double v1 = ax1.at(i), v2 = ax2.at(j);
        grid[c] = {v1, v2, nan_v, nan_v};
        try {
            const SchemeSpec spec = sweep_scheme(family, p, alpha, v1, v2);
            if (stability_violation(spec)) return;  // NaN cell
            const CflResult res =
                cfl_limit(make_filter(ops, spec), alpha, rk, tol, samples, Exec::serial);
            grid[c][2] = res.tau_cfl;
            grid[c][3] = res.argmax_theta;
        } catch (const std::exception&) {
            // cell stays NaN; sweeps never abort on one bad cell
        }
    });

    int best = -1;
    for (int c = 0; c < cells; ++c)
        if (!std::isnan(grid[c][2]) && (best < 0 || grid[c][2] > grid[best][2])) best = c;

    Table tab;
    tab.name = "cflmap_" + family_name(family) + "_p" + std::to_string(p) + "_" + rk_name(rk.tag);
    tab.config = cfg;
    tab.config["command"] = "cfl-map";
    if (best >= 0) {
        std::ostringstream note;
        note << "argmax: param1=" << format_g17(grid[best][0]) << " param2="
             << format_g17(grid[best][1]) << " tau_cfl=" << format_g17(grid[best][2])
             << " argmax_theta=" << format_g17(grid[best][3]);
        tab.notes.push_back(note.str());
    }
    tab.columns = {"param1", "param2", "tau_cfl", "argmax_theta"};
    for (const auto& row : grid) tab.rows.push_back({row[0], row[1], row[2], row[3]});
    std::cout << write_table(tab, opt.out_dir, opt.format) << "\n";
    return 0;
}

int cmd_spectral_order(const nlohmann::json& cfg, const Options& opt) {
    const double theta_R = cfg.value("theta_R", std::numbers::pi / 4);
    if (cfg.contains("schemes") || cfg.contains("scheme")) {
        check_keys(cfg, "spectral-order", {"scheme", "schemes", "theta_R"});
        const auto specs = scheme_list(cfg);
        Table tab;
        tab.name = "spectral_order";
        tab.config = cfg;
        tab.config["command"] = "spectral-order";
        tab.columns = {"scheme_index", "p", "alpha", "theta_R", "A_T"};
        for (std::size_t s = 0; s < specs.size(); ++s) {
            const SchemeSpec& spec = specs[s];
            gate_stability(spec, opt);
            const FilterPair fp = make_filter(build_operators(spec.p), spec);
            tab.rows.push_back({static_cast<double>(s), static_cast<double>(spec.p), spec.alpha,
                                theta_R, spectral_order(fp, spec.alpha, theta_R)});
        }
        std::cout << write_table(tab, opt.out_dir, opt.format) << "\n";
        return 0;
    }

    // grid mode: A_T map over a two-parameter family
    check_keys(cfg, "spectral-order", {"family", "p", "alpha", "param1", "param2", "theta_R"});
    const Family family = family_from_name(cfg.at("family").get<std::string>());
    const int p = cfg.at("p").get<int>();
    const double alpha = cfg.value("alpha", 0.0);
    const GridAxis ax1 = parse_axis(cfg.at("param1"), "param1");
    const GridAxis ax2 = parse_axis(cfg.at("param2"), "param2");
    const OperatorSet ops = build_operators(p);
    const int cells = ax1.n * ax2.n;
    std::vector<std::array<double, 3>> grid(static_cast<std::size_t>(cells));
    for_each_index(cells, Exec::parallel, [&](std::ptrdiff_t c) {
        const int i = static_cast<int>(c) / ax2.n;
        const int j = static_cast<int>(c) % ax2.n;
        const double v1 = ax1.at(i), v2 = ax2.at(j);
        grid[c] = {v1, v2, nan_v};
        try {
            const SchemeSpec spec = sweep_scheme(family, p, alpha, v1, v2);
            if (stability_violation(spec)) return;
            grid[c][2] = spectral_order(make_filter(ops, spec), alpha, theta_R);
        } catch (const std::exception&) {
        }
    });
    Table tab;
    tab.name = "atmap_" + family_name(family) + "_p" + std::to_string(p);
    tab.config = cfg;
    tab.config["command"] = "spectral-order";
    tab.columns = {"param1", "param2", "A_T"};
    for (const auto& row : grid) tab.rows.push_back({row[0], row[1], row[2]});
    std::cout << write_table(tab, opt.out_dir, opt.format) << "\n";
    return 0;
}

int cmd_convergence(const nlohmann::json& cfg, const Options& opt) {
    check_keys(cfg, "convergence",
               {"scheme", "rk", "a", "domain", "t_final", "N_list", "tau_policy", "ic"});
    const SchemeSpec spec = scheme_at(cfg.at("scheme"));
    const RkScheme rk = rk_from_name(cfg.at("rk").get<std::string>());
    const double a = cfg.value("a", 2.0);
    std::pair<double, double> domain{-std::numbers::pi, std::numbers::pi};
    if (cfg.contains("domain")) {
        const auto d = cfg.at("domain").get<std::vector<double>>();
        if (d.size() != 2) throw std::invalid_argument("convergence: domain must be [xl, xr]");
        domain = {d[0], d[1]};
    }
    const double t_final = cfg.value("t_final", std::numbers::pi);
    const auto N_list = cfg.value("N_list", std::vector<int>{16, 32, 64, 128, 256});
    double tau_safety = 0.1;
    if (cfg.contains("tau_policy")) {
        check_keys(cfg.at("tau_policy"), "tau_policy", {"safety"});
        tau_safety = cfg.at("tau_policy").value("safety", 0.1);
    }
    const std::string ic = cfg.value("ic", "sin");
    if (ic != "sin") throw std::invalid_argument("convergence: only the 'sin' initial condition is supported");
    gate_stability(spec, opt);

    const ConvergenceRecord rec =
        convergence_study(spec, rk, a, domain, sine_wave, t_final, N_list, tau_safety);

    Table tab;
    tab.name = "convergence_" + file_tag(spec);
    tab.config = cfg;
    tab.config["command"] = "convergence";
    {
        std::ostringstream note;
        note << "tau_cfl=" << format_g17(rec.tau_cfl)
             << " coarse_error_half_tau=" << format_g17(rec.coarse_error_half_tau)
             << " temporal_ok=" << (rec.temporal_ok ? "true" : "false");
        tab.notes.push_back(note.str());
    }
    tab.columns = {"N", "dx", "l2_error", "order"};
    for (const auto& lev : rec.levels)
        tab.rows.push_back(
            {static_cast<double>(lev.N), lev.dx, lev.l2_error, lev.observed_order});
    std::cout << write_table(tab, opt.out_dir, opt.format) << "\n";
    if (!rec.temporal_ok) {
        std::cerr << "warning: half-step rerun moved the coarsest error by >= 1%; "
                     "temporal error is not negligible\n";
        return 2;
    }
    return 0;
}

int cmd_sysmatrix(const nlohmann::json& cfg, const Options& opt) {
    check_keys(cfg, "sysmatrix", {"scheme", "mesh", "a"});
    const SchemeSpec spec = scheme_at(cfg.at("scheme"));
    const auto& jm = cfg.at("mesh");
    check_keys(jm, "mesh", {"xl", "xr", "N"});
    Mesh1D mesh{jm.at("xl").get<double>(), jm.at("xr").get<double>(), jm.at("N").get<int>()};
    const double a = cfg.at("a").get<double>();

    const SystemMatrix sys = assemble_system_matrix(spec, mesh, a);
    Table tab;
    tab.name = "sysmatrix_" + file_tag(spec);
    tab.config = cfg;
    tab.config["command"] = "sysmatrix";
    {
        std::ostringstream note;
        note << "max_re_eigenvalue: re=" << format_g17(sys.max_re_eigenvalue.real())
             << " im=" << format_g17(sys.max_re_eigenvalue.imag());
        tab.notes.push_back(note.str());
    }
    tab.columns = {"re", "im"};
    for (Eigen::Index i = 0; i < sys.eigenvalues.size(); ++i)
        tab.rows.push_back({sys.eigenvalues(i).real(), sys.eigenvalues(i).imag()});
    std::cout << write_table(tab, opt.out_dir, opt.format) << "\n";
    return 0;
}

std::string equivalence_verdict(const SchemeSpec& spec, double alpha) {
    const FilterPair fp = make_filter(build_operators(spec.p), spec);
    if (fp.side == Side::fdg)
        return fdg_expressible_as_fr(fp) ? "both" : "FDG-only";
    return fr_expressible_as_fdg(fp, alpha).expressible ? "both" : "FR-only";
}

int cmd_equivalence(const nlohmann::json& cfg, const Options&) {
    check_keys(cfg, "equivalence", {"scheme", "alpha", "expect"});
    const SchemeSpec spec = scheme_at(cfg.at("scheme"));
    const double alpha = cfg.value("alpha", spec.alpha);
    const std::string verdict = equivalence_verdict(spec, alpha);
    std::cout << verdict << "\n";
    if (cfg.contains("expect") && cfg.at("expect").get<std::string>() != verdict) {
        std::cerr << "expected verdict '" << cfg.at("expect").get<std::string>() << "', got '"
                  << verdict << "'\n";
        return 2;
    }
    return 0;
}

const std::vector<Table1Entry>& table1_entries() {
    static const std::vector<Table1Entry> entries = {
        {Family::ssdg, 3, RkScheme::rk33, -1.42e-2, 8.06e-2, 0.757},
        {Family::eesfr, 3, RkScheme::rk33, 29.4, 0.761, 0.758},
        {Family::ssdg, 3, RkScheme::rk44, -1.52e-2, 8.36e-2, 0.800},
        {Family::eesfr, 3, RkScheme::rk44, 29.6, 0.772, 0.800},
        {Family::ssdg, 3, RkScheme::rk45, -1.72e-2, 8.43e-2, 1.039},
        {Family::eesfr, 3, RkScheme::rk45, 24.9, 0.757, 1.038},
        {Family::ssdg, 4, RkScheme::rk33, -3.70e-4, 1.54e-3, 0.413},
        {Family::eesfr, 4, RkScheme::rk33, 9.38, 0.349, 0.413},
        {Family::ssdg, 4, RkScheme::rk44, -3.76e-4, 1.56e-3, 0.437},
        {Family::eesfr, 4, RkScheme::rk44, 9.23, 0.350, 0.437},
        {Family::ssdg, 4, RkScheme::rk45, -4.00e-4, 1.57e-3, 0.565},
        {Family::eesfr, 4, RkScheme::rk45, 8.19, 0.351, 0.565},
    };
    return entries;
}

SchemeSpec table1_scheme(const Table1Entry& e) {
    return sweep_scheme(e.family, e.p, 0.0, e.par1, e.par2);  // upwind flux
}

int cmd_table1(const nlohmann::json& cfg, const Options& opt) {
    check_keys(cfg, "table1", {"tol", "theta_samples"});
    const double tol = cfg.value("tol", 1e-4);
    const int samples = cfg.value("theta_samples", 400);
    const auto& entries = table1_entries();

    std::vector<double> tau(entries.size(), nan_v);
    for_each_index(static_cast<std::ptrdiff_t>(entries.size()), Exec::parallel,
                   [&](std::ptrdiff_t i) {
                       try {
                           const auto& e = entries[i];
                           const SchemeSpec spec = table1_scheme(e);
                           const FilterPair fp = make_filter(build_operators(e.p), spec);
                           tau[i] = cfl_limit(fp, 0.0, RkMethod::get(e.rk), tol, samples,
                                              Exec::serial)
                                        .tau_cfl;
                       } catch (const std::exception&) {
                           // entry stays NaN
                       }
                   });

    Table tab;
    tab.name = "table1";
    tab.config = cfg;
    tab.config["command"] = "table1";
    tab.columns = {"family", "p", "rk", "param1", "param2", "tau_cfl", "tau_ref", "abs_diff"};
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        tab.rows.push_back({family_name(e.family), static_cast<double>(e.p), rk_name(e.rk),
                            e.par1, e.par2, tau[i], e.tau_ref, std::abs(tau[i] - e.tau_ref)});
        std::cout << family_name(e.family) << " p=" << e.p << " " << rk_name(e.rk)
                  << ": tau_cfl=" << format_g17(tau[i]) << " (ref " << e.tau_ref << ")\n";
    }
    std::cout << write_table(tab, opt.out_dir, opt.format) << "\n";
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Spatial-scheme laboratory: filtered-DG / flux-reconstruction analysis"};
    app.require_subcommand(1);

    Options opt;
    std::string config_path;
    std::string format = "csv";
    app.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    app.add_option("--format", format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--allow-unstable", opt.allow_unstable,
                 "Run analyses on schemes outside their stability region");
    app.add_option("--threads", opt.threads, "OpenMP thread count (0 = runtime default)");

    struct Cmd {
        const char* name;
        const char* help;
        int (*fn)(const nlohmann::json&, const Options&);
        bool needs_config;
    };
    const Cmd cmds[] = {
        {"dispersion", "Dispersion/dissipation curves per scheme", cmd_dispersion, true},
        {"cfl-map", "CFL time-step limit over a 2D parameter grid", cmd_cfl_map, true},
        {"spectral-order", "Spectral order of accuracy (list or grid)", cmd_spectral_order, true},
        {"convergence", "h-refinement study for periodic linear advection", cmd_convergence, true},
        {"sysmatrix", "Global system matrix spectrum", cmd_sysmatrix, true},
        {"equivalence", "FDG/FR expressibility verdict", cmd_equivalence, true},
        {"table1", "Maximum-CFL reference schemes for both families", cmd_table1, false},
    };
    for (const auto& c : cmds) app.add_subcommand(c.name, c.help)->fallthrough();
    app.add_option("--config", config_path, "JSON configuration file");

    CLI11_PARSE(app, argc, argv);
    set_threads(opt.threads);
    opt.format = (format == "json") ? OutputFormat::json : OutputFormat::csv;

    for (const auto& c : cmds) {
        if (!app.got_subcommand(c.name)) continue;
        try {
            nlohmann::json cfg = nlohmann::json::object();
            if (!config_path.empty())
                cfg = load_config(config_path);
            else if (c.needs_config)
                throw std::invalid_argument(std::string(c.name) + ": --config is required");
            return c.fn(cfg, opt);
        } catch (const CheckFailure& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        } catch (const std::invalid_argument& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return 1;
}

}  // namespace frlab::cli
