// Command-line front end: scenario runs, convergence and energy studies,
// parameter sweeps. Configs are JSON; --set overrides win over file values.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "vlfs/export.hpp"
#include "vlfs/scenarios.hpp"
#include "vlfs/studies.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vlfs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSolver = 4;

struct CommonArgs {
    std::string scenario;
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    double k = 15.0;
    double xi = 0.0;
    double omega = 0.4;
    int order = 0; // 0 = scenario default
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--scenario", args.scenario,
                    "periodic_beam | finite_beam | khabakhpasheva | liu");
    cmd->add_option("--config", args.config_path, "JSON scenario file");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--set", args.overrides, "dotted-key override, e.g. mode.dt=0.01")
        ->take_all();
    cmd->add_option("--k", args.k, "wavenumber parameter (periodic/finite beam)");
    cmd->add_option("--xi", args.xi, "joint stiffness parameter (khabakhpasheva)");
    cmd->add_option("--omega", args.omega, "wave frequency parameter (liu)");
    cmd->add_option("--r", args.order, "polynomial order for both fields");
    cmd->add_option("--threads", args.threads, "worker threads for sweeps");
}

json parse_override_value(const std::string& text) {
    json v = json::parse(text, nullptr, false);
    if (v.is_discarded()) return json(text); // plain string
    return v;
}

void apply_overrides(json& config, const std::vector<std::string>& overrides) {
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ValidationError("override '" + item + "' is not key=value");
        std::string key = item.substr(0, eq);
        const json value = parse_override_value(item.substr(eq + 1));
        std::string pointer = "/" + key;
        for (auto& c : pointer)
            if (c == '.') c = '/';
        // overrides must reference existing schema keys
        const json::json_pointer ptr(pointer);
        if (!config.contains(ptr))
            throw ValidationError("override key '" + key + "' not in the config schema");
        config[ptr] = value;
    }
}

ScenarioConfig resolve_config(const CommonArgs& args, double scenario_parameter) {
    json raw;
    if (!args.config_path.empty()) {
        std::ifstream is(args.config_path);
        if (!is) throw ValidationError("cannot open config file " + args.config_path);
        std::stringstream buf;
        buf << is.rdbuf();
        raw = json::parse(buf.str(), nullptr, false);
        if (raw.is_discarded())
            throw ValidationError("config file is not valid JSON");
    } else {
        const std::string name = args.scenario.empty() ? "periodic_beam" : args.scenario;
        ScenarioConfig base = build_scenario(name, scenario_parameter);
        if (args.order > 0) {
            base.disc.r_phi = args.order;
            base.disc.r_eta = args.order;
        }
        raw = json::parse(base.to_json());
    }
    apply_overrides(raw, args.overrides);
    ScenarioConfig cfg = ScenarioConfig::from_json(raw.dump());
    cfg.validate();
    return cfg;
}

double scenario_parameter(const CommonArgs& args) {
    const std::string name = args.scenario.empty() ? "periodic_beam" : args.scenario;
    if (name == "khabakhpasheva") return args.xi;
    if (name == "liu") return args.omega;
    return args.k;
}

void write_metadata(const fs::path& dir, const ScenarioConfig& cfg,
                    const std::vector<double>& residuals, double runtime_s,
                    const json& extra = json::object()) {
    json meta;
    meta["schema_version"] = 1;
    meta["config"] = json::parse(cfg.to_json());
    {
        std::ostringstream hash;
        hash << std::hex << cfg.config_hash();
        meta["config_hash"] = hash.str();
    }
    meta["solver_residuals"] = residuals;
    meta["runtime_seconds"] = runtime_s;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%FT%TZ", std::gmtime(&now));
    meta["timestamp"] = stamp;
    for (auto& [k, v] : extra.items()) meta[k] = v;
    std::ofstream os(dir / "metadata.json");
    os << meta.dump(2) << "\n";
}

void export_run(const fs::path& dir, const ScenarioConfig& cfg, const RunResult& result) {
    const std::string& name = cfg.name;
    if (!cfg.is_time_mode()) {
        // frequency response curves along the beam and the free surface
        {
            std::vector<std::vector<double>> rows;
            for (int i = 0; i < result.eta_c.size(); ++i)
                rows.push_back({result.eta_gauge_x[i], result.eta_c[i].real(),
                                result.eta_c[i].imag(), std::abs(result.eta_c[i]),
                                std::abs(result.eta_c[i]) / cfg.wave.eta0});
            write_csv((dir / (name + "_eta_response.csv")).string(),
                      {"x_m", "eta_re_m", "eta_im_m", "eta_abs_m", "eta_abs_rel"}, rows);
        }
        {
            std::vector<std::vector<double>> rows;
            for (int i = 0; i < result.kappa_c.size(); ++i)
                rows.push_back({result.kappa_gauge_x[i], result.kappa_c[i].real(),
                                result.kappa_c[i].imag(), std::abs(result.kappa_c[i]),
                                std::abs(result.kappa_c[i]) / cfg.wave.eta0});
            write_csv((dir / (name + "_kappa_response.csv")).string(),
                      {"x_m", "kappa_re_m", "kappa_im_m", "kappa_abs_m", "kappa_abs_rel"},
                      rows);
        }
        if (cfg.outputs.vtk) {
            auto model = build_model(cfg);
            write_mesh_vtk(model.mesh, (dir / (name + "_mesh.vtk")).string());
            write_solution_vtk_complex((dir / (name + "_solution_freq.vtk")).string(),
                                       model.mesh, model.phi_space, model.kappa_space,
                                       model.eta_space, result.phi_c, result.kappa_c,
                                       result.eta_c);
        }
        return;
    }

    if (cfg.outputs.gauges && !result.eta_gauges.empty()) {
        std::vector<std::string> cols = {"t_s"};
        for (double x : result.eta_gauge_x) {
            std::ostringstream c;
            c.precision(6);
            c << "eta_m(x=" << x << ")";
            cols.push_back(c.str());
        }
        std::vector<std::vector<double>> rows;
        for (std::size_t s = 0; s < result.times.size(); ++s) {
            std::vector<double> row = {result.times[s]};
            for (int i = 0; i < result.eta_gauges[s].size(); ++i)
                row.push_back(result.eta_gauges[s][i]);
            rows.push_back(std::move(row));
        }
        write_csv((dir / (name + "_eta_gauges.csv")).string(), cols, rows);
    }
    if (cfg.outputs.energies && !result.energies.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t s = 0; s < result.times.size(); ++s) {
            const auto& e = result.energies[s];
            std::vector<double> row = {result.times[s], e.kin_flow, e.pot_flow,
                                       e.kin_str,       e.ela_str, e.joint,
                                       e.total};
            if (result.exact_total_energy > 0)
                row.push_back(std::abs(e.total - result.exact_total_energy) /
                              result.exact_total_energy);
            rows.push_back(std::move(row));
        }
        std::vector<std::string> cols = {
            "t_s",
            "E_kin_flow_rhoW_norm", // multiply by rho_w for J per unit width
            "E_pot_flow_rhoW_norm", "E_kin_str_rhoW_norm", "E_ela_str_rhoW_norm",
            "E_joint_rhoW_norm",    "E_total_rhoW_norm"};
        if (result.exact_total_energy > 0) cols.push_back("e_E_rel");
        write_csv((dir / (name + "_energies.csv")).string(), cols, rows);
    }
    if (cfg.outputs.errors && !result.errors.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t s = 0; s < result.errors.size(); ++s)
            rows.push_back({result.times[s], result.errors[s][0], result.errors[s][1]});
        write_csv((dir / (name + "_errors.csv")).string(), {"t_s", "e_phi", "e_eta"},
                  rows);
    }
    if (cfg.outputs.vtk && !result.snapshots.empty()) {
        auto model = build_model(cfg);
        write_mesh_vtk(model.mesh, (dir / (name + "_mesh.vtk")).string());
        for (const auto& [t, state] : result.snapshots) {
            std::ostringstream file;
            file << name << "_solution_" << state.step << ".vtk";
            write_solution_vtk((dir / file.str()).string(), model.mesh, model.phi_space,
                               model.kappa_space, model.eta_space, state.phi.x,
                               state.kappa.x, state.eta.x);
        }
    }
}

int cmd_run(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig cfg = resolve_config(args, scenario_parameter(args));
    fs::create_directories(args.out_dir);
    RunResult result = run_scenario(cfg);
    export_run(args.out_dir, cfg, result);
    const double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json extra;
    extra["dofs"] = {{"phi", result.layout.n_phi},
                     {"kappa", result.layout.n_kappa},
                     {"eta", result.layout.n_eta}};
    extra["nx_used"] = result.nx_used;
    write_metadata(args.out_dir, cfg, {result.solver_residual}, runtime, extra);
    std::cout << "run: " << cfg.name << " done, residual " << result.solver_residual
              << ", outputs in " << args.out_dir << "\n";
    return kExitOk;
}

void write_convergence_csv(const fs::path& dir, const std::string& stem,
                           const std::string& abscissa, const ConvergenceTable& table) {
    std::vector<std::vector<double>> rows;
    for (const auto& p : table.points) rows.push_back({p.h_or_dt, p.e_phi, p.e_eta});
    write_csv((dir / (stem + ".csv")).string(), {abscissa, "e_phi", "e_eta"}, rows);
    write_csv((dir / (stem + "_slopes.csv")).string(), {"slope_phi", "slope_eta"},
              {{table.slope_phi, table.slope_eta}});
}

int cmd_converge_space(const CommonArgs& args, const std::vector<int>& orders,
                       const std::vector<int>& meshes, int r_phi_fixed) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(args.out_dir);
    StudyOptions opt;
    opt.k_lambda = args.k;
    for (int r : orders) {
        const int r_phi = r_phi_fixed > 0 ? r_phi_fixed : r;
        auto table = spatial_convergence_study(r_phi, r, meshes, opt);
        std::ostringstream stem;
        stem << "periodic_beam_convergence_space_r" << r;
        if (r_phi_fixed > 0) stem << "_rphi" << r_phi_fixed;
        write_convergence_csv(args.out_dir, stem.str(), "h_m", table);
        std::cout << "r=" << r << (r_phi_fixed > 0 ? " (phi fixed)" : "")
                  << ": slope_phi=" << table.slope_phi
                  << " slope_eta=" << table.slope_eta << "\n";
    }
    ScenarioConfig meta_cfg = build_scenario_periodic_beam(args.k);
    write_metadata(args.out_dir, meta_cfg, {},
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                       .count());
    return kExitOk;
}

int cmd_converge_time(const CommonArgs& args, int nx, int nz, double dt0, int levels,
                      double t_final) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(args.out_dir);
    std::vector<double> dts;
    for (int l = 0; l < levels; ++l) dts.push_back(dt0 / std::pow(2.0, l));
    const int r = args.order > 0 ? args.order : 4;
    auto table = temporal_convergence_study(nx, nz, r, args.k, dts, t_final);
    write_convergence_csv(args.out_dir, "periodic_beam_convergence_time", "dt_s", table);
    std::cout << "temporal slopes: phi=" << table.slope_phi
              << " eta=" << table.slope_eta << "\n";
    ScenarioConfig meta_cfg = build_scenario_periodic_beam(args.k);
    write_metadata(args.out_dir, meta_cfg, {},
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                       .count());
    return kExitOk;
}

int cmd_energy_study(const CommonArgs& args, bool finite_beam) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(args.out_dir);
    EnergyStudyOptions opt;
    opt.finite_beam = finite_beam;
    opt.k_lambda = args.k;
    auto result = energy_study(opt);
    const std::string name = finite_beam ? "finite_beam" : "periodic_beam";
    for (const auto& row : result.case1) {
        std::vector<std::vector<double>> rows;
        for (std::size_t s = 0; s < row.times.size(); ++s)
            rows.push_back({row.times[s], row.e_E[s]});
        std::ostringstream stem;
        stem << name << "_energy_error_nx" << row.nx << ".csv";
        write_csv((args.out_dir / fs::path(stem.str())).string(), {"t_s", "e_E_rel"},
                  rows);
        std::cout << "nx=" << row.nx << ": max e_E=" << row.e_E_max
                  << " drift/s=" << row.drift_per_second << "\n";
    }
    {
        std::vector<std::vector<double>> rows;
        for (const auto& [dt, e] : result.case2) rows.push_back({dt, e});
        write_csv((args.out_dir / fs::path(name + "_energy_error_dt.csv")).string(),
                  {"dt_s", "e_E_rel_max"}, rows);
        std::cout << "case 2 slope in dt: " << result.case2_slope << "\n";
    }
    ScenarioConfig meta_cfg =
        finite_beam ? build_scenario_finite_beam(args.k) : build_scenario_periodic_beam(args.k);
    write_metadata(args.out_dir, meta_cfg, {},
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                       .count());
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args, const std::vector<std::string>& grid_specs) {
    fs::create_directories(args.out_dir);
    // cartesian product over key=v1,v2,... axes
    struct Axis {
        std::string key;
        std::vector<std::string> values;
    };
    std::vector<Axis> axes;
    for (const auto& spec : grid_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw ValidationError("grid '" + spec + "' is not key=v1,v2,...");
        Axis axis;
        axis.key = spec.substr(0, eq);
        std::stringstream ss(spec.substr(eq + 1));
        std::string item;
        while (std::getline(ss, item, ',')) axis.values.push_back(item);
        if (axis.values.empty())
            throw ValidationError("grid '" + spec + "' has no values");
        axes.push_back(std::move(axis));
    }
    std::vector<std::vector<std::string>> points{{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<std::string>> next;
        for (const auto& partial : points)
            for (const auto& v : axis.values) {
                auto p = partial;
                p.push_back(axis.key + "=" + v);
                next.push_back(std::move(p));
            }
        points = std::move(next);
    }

    std::vector<int> codes(points.size(), kExitOk);
    std::vector<std::string> messages(points.size());
    auto worker = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < points.size(); i += stride) {
            try {
                CommonArgs sub = args;
                sub.overrides.insert(sub.overrides.end(), points[i].begin(),
                                     points[i].end());
                std::ostringstream dir;
                dir << args.out_dir << "/point_" << i;
                sub.out_dir = dir.str();
                cmd_run(sub);
            } catch (const std::exception& e) {
                codes[i] = kExitValidation;
                messages[i] = e.what();
            }
        }
    };
    const int nthreads = std::max(1, args.threads);
    std::vector<std::thread> pool;
    for (int tId = 1; tId < nthreads; ++tId) pool.emplace_back(worker, tId, nthreads);
    worker(0, nthreads);
    for (auto& th : pool) th.join();

    int status = kExitOk;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (codes[i] != kExitOk) {
            std::cerr << "sweep point " << i << " failed: " << messages[i] << "\n";
            status = codes[i];
        }
    }
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monolithic hydroelastic wave-tank solver"};
    app.require_subcommand(1);

    CommonArgs run_args, cs_args, ct_args, es_args, sweep_args;

    auto* run = app.add_subcommand("run", "run one scenario");
    add_common(run, run_args);

    auto* cs = app.add_subcommand("converge-space", "spatial convergence sweep");
    add_common(cs, cs_args);
    std::vector<int> orders = {2, 3, 4};
    std::vector<int> meshes = {16, 32, 64, 128};
    int r_phi_fixed = 0;
    cs->add_option("--orders", orders, "polynomial orders to sweep");
    cs->add_option("--meshes", meshes, "horizontal element counts");
    cs->add_option("--r-phi-fixed", r_phi_fixed,
                   "fix the potential order (mixed-order study)");
    cs_args.k = 15.0;

    auto* ct = app.add_subcommand("converge-time", "temporal convergence sweep");
    add_common(ct, ct_args);
    int ct_nx = 128, ct_nz = 64, ct_levels = 5;
    double ct_dt0 = 0.1, ct_tfinal = 1.0;
    ct->add_option("--nx", ct_nx, "horizontal elements");
    ct->add_option("--nz", ct_nz, "vertical elements");
    ct->add_option("--dt0", ct_dt0, "coarsest time step");
    ct->add_option("--levels", ct_levels, "number of halvings");
    ct->add_option("--t-final", ct_tfinal, "final time");
    ct_args.k = 1.0;

    auto* es = app.add_subcommand("energy-study", "energy conservation studies");
    add_common(es, es_args);
    bool finite_beam = false;
    es->add_flag("--finite-beam", finite_beam, "use the centered finite beam");
    es_args.k = 15.0;

    auto* sw = app.add_subcommand("sweep", "cartesian parameter sweep");
    add_common(sw, sweep_args);
    std::vector<std::string> grid_specs;
    sw->add_option("--grid", grid_specs, "axis key=v1,v2,... (repeatable)")->take_all();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (cs->parsed()) return cmd_converge_space(cs_args, orders, meshes, r_phi_fixed);
        if (ct->parsed())
            return cmd_converge_time(ct_args, ct_nx, ct_nz, ct_dt0, ct_levels, ct_tfinal);
        if (es->parsed()) return cmd_energy_study(es_args, finite_beam);
        if (sw->parsed()) return cmd_sweep(sweep_args, grid_specs);
    } catch (const SingularMatrixError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitUsage;
}
