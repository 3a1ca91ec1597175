#include "vlfs/studies.hpp"

#include <cmath>

namespace vlfs {

namespace {

std::pair<double, double> final_time_errors(const ScenarioConfig& cfg) {
    auto model = build_model(cfg);
    auto result = run_scenario(cfg);
    const AiryWave wave(cfg.wave, cfg.physics.g);
    const double t = result.final_state.t;
    return l2_errors(
        model.mesh, model.phi_space, model.eta_space,
        [&](double x, double z) { return wave.phi(x, z, t); },
        [&](double x) { return wave.eta(x, t); }, result.final_state.phi.x,
        result.final_state.eta.x);
}

ScenarioConfig quiet_periodic(double k, int nx, int nz, int r_phi, int r_eta,
                              double gamma) {
    ScenarioConfig cfg = build_scenario_periodic_beam(k);
    cfg.disc = {nx, nz, 1.0, r_phi, r_eta};
    cfg.stabilization.gamma = gamma;
    cfg.outputs.gauges = false;
    cfg.outputs.energies = false;
    cfg.outputs.errors = false;
    return cfg;
}

} // namespace

ConvergenceTable spatial_convergence_study(int r_phi, int r_eta,
                                           const std::vector<int>& meshes,
                                           const StudyOptions& opt) {
    const double gamma = opt.gamma > 0 ? opt.gamma : r_eta * (r_eta + 1);
    ConvergenceTable table;
    std::vector<std::pair<double, double>> ep, ee;
    for (int nx : meshes) {
        ScenarioConfig cfg = quiet_periodic(opt.k_lambda, nx, nx / 2, r_phi, r_eta, gamma);
        cfg.mode = TimeMode{opt.t_final, opt.dt};
        auto [e_phi, e_eta] = final_time_errors(cfg);
        const double h = cfg.geometry.domain_length / nx;
        table.points.push_back({h, e_phi, e_eta});
        ep.push_back({h, e_phi});
        ee.push_back({h, e_eta});
    }
    table.slope_phi = convergence_slope(ep);
    table.slope_eta = convergence_slope(ee);
    return table;
}

ConvergenceTable temporal_convergence_study(int nx, int nz, int order, double k_lambda,
                                            const std::vector<double>& dts,
                                            double t_final, double gamma) {
    const double g = gamma > 0 ? gamma : order * (order + 1);
    ConvergenceTable table;
    std::vector<std::pair<double, double>> ep, ee;
    for (double dt : dts) {
        ScenarioConfig cfg = quiet_periodic(k_lambda, nx, nz, order, order, g);
        cfg.mode = TimeMode{t_final, dt};
        auto [e_phi, e_eta] = final_time_errors(cfg);
        table.points.push_back({dt, e_phi, e_eta});
        ep.push_back({dt, e_phi});
        ee.push_back({dt, e_eta});
    }
    table.slope_phi = convergence_slope(ep);
    table.slope_eta = convergence_slope(ee);
    return table;
}

EnergyStudyResult energy_study(const EnergyStudyOptions& opt) {
    EnergyStudyResult out;

    auto make_config = [&](int nx, double dt, double periods) {
        ScenarioConfig cfg = opt.finite_beam ? build_scenario_finite_beam(opt.k_lambda)
                                             : build_scenario_periodic_beam(opt.k_lambda);
        cfg.disc = {nx, nx / 2, 1.0, opt.order, opt.order};
        if (opt.gamma > 0) cfg.stabilization.gamma = opt.gamma;
        const double T = cfg.wave.period();
        cfg.mode = TimeMode{periods * T, dt};
        cfg.outputs.gauges = false;
        cfg.outputs.errors = false;
        cfg.outputs.energies = true;
        return cfg;
    };

    {
        ScenarioConfig probe = make_config(opt.meshes.front(), opt.dt_case1, 1.0);
        out.exact_energy = exact_initial_energy(probe);
    }

    for (int nx : opt.meshes) {
        ScenarioConfig cfg = make_config(nx, opt.dt_case1, opt.periods_case1);
        auto result = run_scenario(cfg);
        EnergyMeshRow row;
        row.nx = nx;
        const double E0 = out.exact_energy;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(result.energies.size());
        for (int s = 0; s < n; ++s) {
            const double t = result.times[s];
            const double e = std::abs(result.energies[s].total - E0) / E0;
            row.e_E_max = std::max(row.e_E_max, e);
            row.mean_e_E += e / n;
            row.times.push_back(t);
            row.e_E.push_back(e);
            sx += t;
            sy += e;
            sxx += t * t;
            sxy += t * e;
        }
        row.e_E_initial = row.e_E.front();
        row.drift_per_second = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        out.case1.push_back(std::move(row));
    }

    {
        std::vector<std::pair<double, double>> pts;
        for (double frac : opt.case2_dt_fractions) {
            ScenarioConfig cfg = make_config(opt.case2_nx, 1.0, opt.case2_periods);
            const double T = cfg.wave.period();
            std::get<TimeMode>(cfg.mode).dt = frac * T;
            auto result = run_scenario(cfg);
            double emax = 0;
            for (std::size_t s = 1; s < result.energies.size(); ++s)
                emax = std::max(emax, std::abs(result.energies[s].total - out.exact_energy) /
                                          out.exact_energy);
            out.case2.emplace_back(frac * T, emax);
            pts.emplace_back(frac * T, emax);
        }
        out.case2_slope = convergence_slope(pts);
    }
    return out;
}

} // namespace vlfs
