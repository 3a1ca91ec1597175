// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// here. Returns the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "dense_oracle.hpp"
#include "vlfs/scenarios.hpp"
#include "vlfs/solver.hpp"
#include "vlfs/studies.hpp"

using namespace vlfs;

namespace {

struct Criterion {
    int number;
    std::string title;
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string& line) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "  ok   " : "  FAIL ") + line);
    }
    void note(const std::string& line) { details.push_back("       " + line); }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------------- 1, 2
Criterion criterion_spatial() {
    Criterion c{1, "spatial convergence, slopes of e_phi and e_eta >= r+0.8"};
    const std::vector<int> meshes = {16, 32, 64, 128};
    for (int r : {2, 3, 4}) {
        StudyOptions opt; // k=15, dt=1e-6, t=1e-4
        auto table = spatial_convergence_study(r, r, meshes, opt);
        c.check(table.slope_phi >= r + 0.8,
                fmt("r=%d e_phi slope %.3f (need >= %.1f)", r, table.slope_phi, r + 0.8));
        c.check(table.slope_eta >= r + 0.8,
                fmt("r=%d e_eta slope %.3f (need >= %.1f)", r, table.slope_eta, r + 0.8));
    }
    c.note("r=2 e_eta: the nx=16 point (kh=5.9) is interpolation-saturated; the");
    c.note("least-squares slope of the pinned sweep cannot exceed ~2.78 for any");
    c.note("conforming discretization (see notes/decisions.md)");
    return c;
}

Criterion criterion_mixed_order() {
    Criterion c{2, "mixed-order convergence, phi fixed at r=2"};
    const std::vector<int> meshes = {16, 32, 64, 128};
    for (int r_eta : {2, 3, 4}) {
        StudyOptions opt;
        auto table = spatial_convergence_study(2, r_eta, meshes, opt);
        c.check(table.slope_eta >= r_eta + 0.8,
                fmt("r_eta=%d e_eta slope %.3f (need >= %.1f)", r_eta, table.slope_eta,
                    r_eta + 0.8));
    }
    return c;
}

// ------------------------------------------------------------------------- 3
Criterion criterion_temporal() {
    Criterion c{3, "temporal convergence: slopes 2.0 +/- 0.2 at t=1.0"};
    std::vector<double> dts;
    for (int l = 0; l < 5; ++l) dts.push_back(0.1 / std::pow(2.0, l));
    auto table = temporal_convergence_study(128, 64, 4, 1.0, dts, 1.0);
    c.check(std::abs(table.slope_phi - 2.0) <= 0.2,
            fmt("e_phi slope %.3f (need 2.0 +/- 0.2)", table.slope_phi));
    c.check(std::abs(table.slope_eta - 2.0) <= 0.2,
            fmt("e_eta slope %.3f (need 2.0 +/- 0.2)", table.slope_eta));
    return c;
}

// ---------------------------------------------------------------------- 4, 5
Criterion criterion_energy(bool finite_beam) {
    Criterion c{finite_beam ? 5 : 4,
                finite_beam ? "finite-beam energy conservation"
                            : "periodic-beam energy conservation"};
    EnergyStudyOptions opt;
    opt.finite_beam = finite_beam;
    auto result = energy_study(opt);

    for (const auto& row : result.case1) {
        // no upward trend: drift <= 0 within noise (net growth over the run
        // within 10% of the mean level)
        const double duration = row.times.back();
        const bool ok = row.drift_per_second <= 0.0 ||
                        row.drift_per_second * duration <= 0.1 * row.mean_e_E;
        c.check(ok, fmt("nx=%3d e_E trend %+.2e /s (max e_E %.3e)", row.nx,
                        row.drift_per_second, row.e_E_max));
    }
    for (std::size_t i = 1; i < result.case1.size(); ++i)
        c.check(result.case1[i].e_E_max < result.case1[i - 1].e_E_max,
                fmt("max e_E decreases: nx=%d %.3e < nx=%d %.3e", result.case1[i].nx,
                    result.case1[i].e_E_max, result.case1[i - 1].nx,
                    result.case1[i - 1].e_E_max));
    const auto& finest = result.case1.back();
    c.check(finest.e_E_initial <= 1e-6,
            fmt("initial E_total matches closed form at nx=%d: e_E(0)=%.3e (need <= 1e-6)",
                finest.nx, finest.e_E_initial));
    if (finest.e_E_initial > 1e-6)
        c.note("floor set by the elastic term of the nodal interpolant "
               "(0.5 D_rho ||e''||^2); see notes/decisions.md");
    c.check(std::abs(result.case2_slope - 2.0) <= 0.2,
            fmt("case 2 e_E slope in dt: %.3f (need 2.0 +/- 0.2)", result.case2_slope));
    {
        std::string values = "case 2 values:";
        for (const auto& [dt, e] : result.case2) values += fmt(" (%.3fs %.2e)", dt, e);
        c.note(values);
    }
    if (std::abs(result.case2_slope - 2.0) > 0.2)
        c.note("the gamma_NB=1/2, beta_NB=1/4 pair conserves the energy of the "
               "linear system exactly, so e_E stays at the spatial level for "
               "every dt; see notes/decisions.md");
    return c;
}

// ---------------------------------------------------------------- 6, 7 and 9
struct KhabResult {
    RunResult freq;
    double envelope_gap = 0;   // rel L2 envelope vs |eta|
    double transmitted = 0;    // mean |kappa| downstream of the beam
    double reflected = 0;      // standing-wave half-range upstream
    double outlet_edge_amp = 0;
};

KhabResult run_khabakhpasheva_pair(double xi) {
    KhabResult out;
    ScenarioConfig freq = build_scenario_khabakhpasheva(xi);
    out.freq = run_scenario(freq);

    ScenarioConfig td = build_scenario_khabakhpasheva(xi);
    const double T = td.wave.period();
    td.mode = TimeMode{50 * T, T / 40.0};
    auto rt = run_scenario(td);
    const auto env = envelope(rt.times, rt.eta_gauges, 25 * T, 50 * T);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < env.size(); ++i) {
        const double a = std::abs(out.freq.eta_c[i]);
        num += (env[i] - a) * (env[i] - a);
        den += a * a;
    }
    out.envelope_gap = std::sqrt(num / den);

    const auto [x_bl, x_br] = *freq.geometry.structure_span;
    const double zone_in = freq.geometry.damping_length_inlet;
    const double zone_out_start =
        freq.geometry.domain_length - freq.geometry.damping_length_outlet;
    double up_max = 0, up_min = 1e300, down_sum = 0;
    int down_n = 0;
    for (int i = 0; i < out.freq.kappa_c.size(); ++i) {
        const double x = out.freq.kappa_gauge_x[i];
        const double a = std::abs(out.freq.kappa_c[i]);
        if (x > zone_in + 0.6 && x < x_bl - 0.6) {
            up_max = std::max(up_max, a);
            up_min = std::min(up_min, a);
        }
        if (x > x_br + 0.6 && x < zone_out_start - 0.6) {
            down_sum += a;
            ++down_n;
        }
        if (x >= freq.geometry.domain_length - 1e-9)
            out.outlet_edge_amp = std::max(out.outlet_edge_amp, a);
    }
    out.transmitted = down_sum / down_n;
    out.reflected = 0.5 * (up_max - up_min);
    return out;
}

// ------------------------------------------------------------------------- 8
Criterion criterion_bathymetry() {
    Criterion c{8, "variable bathymetry (liu): degenerate slope + sloped runs"};
    ScenarioConfig flat = build_scenario_liu(0.4);
    flat.geometry.depth_profile = BathymetryProfile::ramp(60.0, 60.0, 1800.0, 2100.0);
    ScenarioConfig constant = build_scenario_liu(0.4);
    constant.geometry.depth_profile = BathymetryProfile::constant(60.0);
    auto ra = run_scenario(flat);
    auto rb = run_scenario(constant);
    const double rel = (ra.eta_c - rb.eta_c).norm() / rb.eta_c.norm();
    c.check(rel <= 1e-10, fmt("H_l=H_r=60 vs constant depth: rel diff %.3e (need <= 1e-10)",
                              rel));
    for (double omega : {0.4, 0.8}) {
        auto r = run_scenario(build_scenario_liu(omega));
        c.check(r.solver_residual <= 1e-8,
                fmt("omega=%.1f sloped run residual %.3e (need <= 1e-8)", omega,
                    r.solver_residual));
    }
    return c;
}

// ------------------------------------------------------------------------ 10
Criterion criterion_oracle() {
    Criterion c{10, "dense-oracle equivalence and kernel dimensions"};

    auto tank = [&](double L, std::optional<std::array<double, 2>> span,
                    std::vector<double> joints, bool periodic) {
        GeometryConfig g;
        g.domain_length = L;
        g.depth_profile = BathymetryProfile::constant(1.0);
        g.structure_span = span;
        g.joint_positions = std::move(joints);
        g.periodic = periodic;
        return g;
    };

    struct Case {
        GeometryConfig geom;
        int nx, nz, r_phi, r_srf;
        bool frequency, damping;
        const char* label;
    };
    const std::vector<Case> cases = {
        {tank(4.0, {{2.0, 4.0}}, {3.0}, false), 4, 1, 2, 3, true, true,
         "freq, joint+damping, mixed orders"},
        {tank(4.0, {{1.0, 3.0}}, {2.0}, false), 4, 1, 2, 2, false, false,
         "time, fs+beam+joint"},
        {tank(2.0, {}, {}, false), 2, 2, 3, 3, true, true, "freq, pure fs, damping"},
        {tank(4.0, {{0.0, 4.0}}, {}, true), 4, 1, 2, 2, false, false,
         "time, periodic wrapped beam"},
    };

    for (const auto& cs : cases) {
        auto ref = build_structured_mesh(cs.geom, cs.nx, cs.nz);
        auto mesh = apply_bathymetry(ref, BathymetryProfile::constant(1.0));
        auto phi = build_fespace(mesh, FieldDomain::Volume, cs.r_phi);
        auto kappa = build_fespace(mesh, FieldDomain::FreeSurface, cs.r_srf);
        auto eta = build_fespace(mesh, FieldDomain::Structure, cs.r_srf);

        const double g = 9.81, beta = 0.5;
        WaveInput w;
        w.eta0 = 0.01;
        w.k = 1.3;
        w.depth = 1.0;
        w.omega = dispersion_omega(w.k, w.depth, g);
        AiryWave wave(w, g);
        DampingZone zone;
        zone.mu0 = 2.5;
        zone.inlet_length = 1.0;
        zone.outlet_start = cs.geom.domain_length;
        zone.outlet_length = 0.0;

        oracle::OracleSpec ospec;
        ospec.beta = beta;
        ospec.g = g;
        ospec.d0 = 2e-3;
        ospec.gamma = StabilizationParams::default_gamma(cs.r_srf);
        ospec.D_rho_facet.assign(mesh.structure_facet_ids().size(), 0.8);
        for (std::size_t i = 0; i < mesh.joint_interfaces.size(); ++i)
            ospec.joint_k_rho.push_back(1.7);
        ospec.incident = &wave;
        if (cs.damping) ospec.damping = &zone;

        Eigen::MatrixXcd A_prod;
        Eigen::VectorXcd rhs_prod;
        if (cs.frequency) {
            OperatorSpec<std::complex<double>> spec;
            spec.mode = frequency_mode(w.omega);
            spec.alpha_f = compute_alpha_f_frequency(beta, g, w.omega);
            spec.beta = beta;
            spec.g = g;
            spec.d0 = ospec.d0;
            spec.gamma = ospec.gamma;
            spec.D_rho_facet = ospec.D_rho_facet;
            spec.joint_k_rho = ospec.joint_k_rho;
            spec.incident = &wave;
            if (cs.damping) spec.damping = &zone;
            auto sys = assemble_system(mesh, phi, kappa, eta, spec);
            A_prod = Eigen::MatrixXcd(sys.A);
            rhs_prod = sys.rhs_amplitude;
            ospec.dt = spec.mode.dt;
            ospec.dtt = spec.mode.dtt;
            ospec.alpha_f = spec.alpha_f;
        } else {
            NewmarkParams np;
            np.dt = 0.01;
            OperatorSpec<double> spec;
            spec.mode = time_mode(np);
            spec.alpha_f = compute_alpha_f_time(beta, g, np.delta_t());
            spec.beta = beta;
            spec.g = g;
            spec.d0 = ospec.d0;
            spec.gamma = ospec.gamma;
            spec.D_rho_facet = ospec.D_rho_facet;
            spec.joint_k_rho = ospec.joint_k_rho;
            spec.incident = &wave;
            if (cs.damping) spec.damping = &zone;
            auto sys = assemble_system(mesh, phi, kappa, eta, spec);
            A_prod = Eigen::MatrixXd(sys.A).cast<std::complex<double>>();
            rhs_prod = sys.rhs_amplitude;
            ospec.dt = {spec.mode.dt, 0.0};
            ospec.dtt = {spec.mode.dtt, 0.0};
            ospec.alpha_f = {spec.alpha_f, 0.0};
        }
        const auto dense = oracle::assemble_dense(mesh, phi, kappa, eta, ospec);
        const double scale = dense.A.cwiseAbs().maxCoeff();
        const double gap = (A_prod - dense.A).cwiseAbs().maxCoeff() / scale;
        c.check(gap < 1e-12, fmt("%s: operator max rel gap %.2e", cs.label, gap));
        const double rhs_scale = std::max(dense.rhs.cwiseAbs().maxCoeff(), 1e-30);
        const double rhs_gap = (rhs_prod - dense.rhs).cwiseAbs().maxCoeff() / rhs_scale;
        c.check(rhs_gap < 1e-12, fmt("%s: rhs max rel gap %.2e", cs.label, rhs_gap));
    }

    // kernel dimensions
    {
        GeometryConfig g = tank(4.0, {}, {}, false);
        auto mesh = apply_bathymetry(build_structured_mesh(g, 4, 1),
                                     BathymetryProfile::constant(1.0));
        auto phi = build_fespace(mesh, FieldDomain::Volume, 2);
        auto K = assemble_fluid_laplacian(mesh, phi);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(K)};
        int dim = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) < 1e-10 * svd.singularValues()(0)) ++dim;
        c.check(dim == 1, fmt("laplacian kernel dimension %d (need 1)", dim));
    }
    {
        GeometryConfig g = tank(4.0, {{0.0, 4.0}}, {}, false);
        auto mesh = apply_bathymetry(build_structured_mesh(g, 4, 1),
                                     BathymetryProfile::constant(1.0));
        auto phi = build_fespace(mesh, FieldDomain::Volume, 2);
        auto kappa = build_fespace(mesh, FieldDomain::FreeSurface, 3);
        auto eta = build_fespace(mesh, FieldDomain::Structure, 3);
        OperatorSpec<double> spec;
        spec.mode = {0.0, 0.0};
        spec.gamma = StabilizationParams::default_gamma(3);
        spec.D_rho_facet.assign(4, 1.0);
        AssemblyOptions opt;
        opt.laplacian = opt.free_surface = opt.structure_coupling = opt.damping = false;
        auto sys = assemble_system(mesh, phi, kappa, eta, spec, opt);
        auto B = extract_block(sys.A, sys.layout, Field::Eta, Field::Eta);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(B)};
        int dim = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) < 1e-10 * svd.singularValues()(0)) ++dim;
        c.check(dim == 2, fmt("bending kernel dimension %d (need 2)", dim));
    }
    return c;
}

} // namespace

int main() {
    std::vector<Criterion> results;

    results.push_back(criterion_spatial());
    results.push_back(criterion_mixed_order());
    results.push_back(criterion_temporal());

    {
        // the two energy studies are independent scenario sweeps
        Criterion c4{4, ""}, c5{5, ""};
        std::thread t4([&] { c4 = criterion_energy(false); });
        c5 = criterion_energy(true);
        t4.join();
        results.push_back(std::move(c4));
        results.push_back(std::move(c5));
    }

    {
        Criterion c6{6, "frequency/time cross-validation (khabakhpasheva)"};
        Criterion c7{7, "joint physics ordering: transmission and reflection"};
        Criterion c9{9, "damping efficacy at the outlet zone edge"};
        const auto hinge = run_khabakhpasheva_pair(0.0);
        const auto stiff = run_khabakhpasheva_pair(625.0);
        c6.check(hinge.envelope_gap <= 0.05,
                 fmt("xi=0: envelope vs |eta| rel L2 %.4f (need <= 0.05)",
                     hinge.envelope_gap));
        c6.check(stiff.envelope_gap <= 0.05,
                 fmt("xi=625: envelope vs |eta| rel L2 %.4f (need <= 0.05)",
                     stiff.envelope_gap));
        c7.check(hinge.transmitted < stiff.transmitted,
                 fmt("transmitted: hinge %.4f < stiff %.4f (of eta0)",
                     hinge.transmitted / 0.01, stiff.transmitted / 0.01));
        c7.check(hinge.reflected > stiff.reflected,
                 fmt("reflected: hinge %.4f > stiff %.4f (of eta0)",
                     hinge.reflected / 0.01, stiff.reflected / 0.01));
        c9.check(hinge.outlet_edge_amp <= 0.05 * 0.01,
                 fmt("xi=0: |kappa|/eta0 at the domain end %.5f (need <= 0.05)",
                     hinge.outlet_edge_amp / 0.01));
        c9.check(stiff.outlet_edge_amp <= 0.05 * 0.01,
                 fmt("xi=625: |kappa|/eta0 at the domain end %.5f (need <= 0.05)",
                     stiff.outlet_edge_amp / 0.01));
        results.push_back(std::move(c6));
        results.push_back(std::move(c7));
        results.push_back(criterion_bathymetry());
        results.push_back(std::move(c9));
    }

    results.push_back(criterion_oracle());

    std::sort(results.begin(), results.end(),
              [](const Criterion& a, const Criterion& b) { return a.number < b.number; });

    int failures = 0;
    for (const auto& c : results) {
        printf("%s criterion %2d: %s\n", c.pass ? "PASS" : "FAIL", c.number,
               c.title.c_str());
        for (const auto& d : c.details) printf("%s\n", d.c_str());
        if (!c.pass) ++failures;
    }
    printf("\n%d of %zu criteria passed\n", static_cast<int>(results.size()) - failures,
           results.size());
    return failures;
}
