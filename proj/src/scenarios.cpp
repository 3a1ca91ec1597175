#include "vlfs/scenarios.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "vlfs/export.hpp"

namespace vlfs {

using nlohmann::json;

namespace {

json profile_to_json(const BathymetryProfile& p) {
    if (p.kind == BathymetryProfile::Kind::Constant)
        return json{{"kind", "constant"}, {"depth", p.depth}};
    return json{{"kind", "ramp"},
                {"depth_left", p.depth_left},
                {"depth_right", p.depth_right},
                {"ramp_from", p.ramp_from},
                {"ramp_to", p.ramp_to}};
}

BathymetryProfile profile_from_json(const json& j) {
    const std::string kind = j.at("kind");
    if (kind == "constant") return BathymetryProfile::constant(j.at("depth"));
    if (kind == "ramp")
        return BathymetryProfile::ramp(j.at("depth_left"), j.at("depth_right"),
                                       j.at("ramp_from"), j.at("ramp_to"));
    throw ValidationError("config: unknown bathymetry kind '" + kind + "'");
}

} // namespace

void ScenarioConfig::validate() const {
    geometry.validate();
    physics.validate();
    stabilization.validate();
    if (disc.nx < 1 || disc.nz < 1)
        throw ValidationError("config: nx and nz must be >= 1");
    if (disc.r_phi < 1) throw ValidationError("config: r_phi must be >= 1");
    if (geometry.structure_span && disc.r_eta < 2)
        throw ValidationError("config: structure trace requires r_eta >= 2");
    if (disc.r_eta < disc.r_phi)
        throw ValidationError(
            "config: surface order below the volume trace violates compatibility");
    if (wave.eta0 > 0 || exact_initial_conditions) wave.validate(physics.g);
    if (damping && damping->mu0 > 0) {
        if (geometry.damping_length_inlet + geometry.damping_length_outlet >
            geometry.domain_length)
            throw ValidationError("config: damping zones exceed the domain");
        if (geometry.structure_span) {
            const auto [a, b] = *geometry.structure_span;
            if (geometry.damping_length_inlet > a ||
                geometry.domain_length - geometry.damping_length_outlet < b)
                throw ValidationError("config: damping zones overlap the structure span");
        }
    }
    if (is_time_mode()) {
        const auto& tm = time_mode_cfg();
        if (tm.dt <= 0 || tm.t_final <= 0)
            throw ValidationError("config: time mode requires positive dt and t_final");
    }
    if (exact_initial_conditions) {
        // periodic traveling wave must fit the domain
        const double m = wave.k * geometry.domain_length / (2.0 * M_PI);
        if (std::abs(m - std::round(m)) > 1e-8)
            throw ValidationError("config: exact start requires k Lx = 2 pi m");
    }
}

std::string ScenarioConfig::to_json() const {
    json j;
    j["schema_version"] = schema_version;
    j["name"] = name;
    json g;
    g["domain_length"] = geometry.domain_length;
    g["depth_profile"] = profile_to_json(geometry.depth_profile);
    if (geometry.structure_span)
        g["structure_span"] = {(*geometry.structure_span)[0], (*geometry.structure_span)[1]};
    g["damping_length_inlet"] = geometry.damping_length_inlet;
    g["damping_length_outlet"] = geometry.damping_length_outlet;
    g["joint_positions"] = geometry.joint_positions;
    g["periodic"] = geometry.periodic;
    j["geometry"] = g;

    json p;
    p["g"] = physics.g;
    p["rho_w"] = physics.rho_w;
    p["rho_b"] = physics.rho_b;
    p["h_b"] = physics.h_b;
    json segs = json::array();
    for (const auto& s : physics.rigidity) segs.push_back({{"x_to", s.x_to}, {"D", s.D}});
    p["rigidity"] = segs;
    p["joint_xi"] = physics.joint_xi;
    p["joint_rigidity_reference"] =
        physics.joint_ref == PhysicalParams::JointRef::LeftSegment ? "left" : "right";
    j["physics"] = p;

    j["wave"] = {{"eta0", wave.eta0}, {"k", wave.k}, {"omega", wave.omega},
                 {"depth", wave.depth}};
    if (damping) j["damping"] = {{"mu0", damping->mu0}};
    j["discretization"] = {{"nx", disc.nx}, {"nz", disc.nz}, {"grading", disc.grading},
                           {"r_phi", disc.r_phi}, {"r_eta", disc.r_eta}};
    if (is_time_mode()) {
        const auto& tm = time_mode_cfg();
        j["mode"] = {{"type", "time"}, {"t_final", tm.t_final}, {"dt", tm.dt},
                     {"gamma_nb", tm.gamma_nb}, {"beta_nb", tm.beta_nb}};
    } else {
        j["mode"] = {{"type", "frequency"}};
    }
    j["stabilization"] = {{"beta", stabilization.beta}, {"gamma", stabilization.gamma}};
    j["outputs"] = {{"gauges", outputs.gauges}, {"energies", outputs.energies},
                    {"errors", outputs.errors}, {"snapshots", outputs.snapshots},
                    {"snapshot_stride", outputs.snapshot_stride}, {"vtk", outputs.vtk}};
    j["debug"] = {{"dump_operator", debug.dump_operator}};
    j["exact_initial_conditions"] = exact_initial_conditions;
    return j.dump(2);
}

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    ScenarioConfig c;
    try {
        c.schema_version = j.value("schema_version", 1);
        if (c.schema_version != 1)
            throw ValidationError("config: unsupported schema_version");
        c.name = j.value("name", "custom");
        const json& g = j.at("geometry");
        c.geometry.domain_length = g.at("domain_length");
        c.geometry.depth_profile = profile_from_json(g.at("depth_profile"));
        if (g.contains("structure_span") && !g["structure_span"].is_null()) {
            c.geometry.structure_span = {{g["structure_span"][0], g["structure_span"][1]}};
        }
        c.geometry.damping_length_inlet = g.value("damping_length_inlet", 0.0);
        c.geometry.damping_length_outlet = g.value("damping_length_outlet", 0.0);
        c.geometry.joint_positions = g.value("joint_positions", std::vector<double>{});
        c.geometry.periodic = g.value("periodic", false);

        const json& p = j.at("physics");
        c.physics.g = p.value("g", 9.81);
        c.physics.rho_w = p.at("rho_w");
        c.physics.rho_b = p.value("rho_b", 0.0);
        c.physics.h_b = p.value("h_b", 0.0);
        for (const auto& s : p.value("rigidity", json::array()))
            c.physics.rigidity.push_back({s.at("x_to"), s.at("D")});
        c.physics.joint_xi = p.value("joint_xi", 0.0);
        c.physics.joint_ref = p.value("joint_rigidity_reference", "left") == "right"
                                  ? PhysicalParams::JointRef::RightSegment
                                  : PhysicalParams::JointRef::LeftSegment;

        if (j.contains("wave")) {
            const json& w = j["wave"];
            c.wave = {w.value("eta0", 0.0), w.value("k", 0.0), w.value("omega", 0.0),
                      w.value("depth", 0.0)};
        }
        if (j.contains("damping") && !j["damping"].is_null())
            c.damping = DampingConfig{j["damping"].value("mu0", 0.0)};

        const json& d = j.at("discretization");
        c.disc = {d.at("nx"), d.at("nz"), d.value("grading", 1.0), d.at("r_phi"),
                  d.at("r_eta")};

        const json& m = j.at("mode");
        if (m.at("type") == "time") {
            c.mode = TimeMode{m.at("t_final"), m.at("dt"), m.value("gamma_nb", 0.5),
                              m.value("beta_nb", 0.25)};
        } else {
            c.mode = FrequencyMode{};
        }
        if (j.contains("stabilization")) {
            c.stabilization.beta = j["stabilization"].value("beta", 0.5);
            c.stabilization.gamma = j["stabilization"].value("gamma", 0.0);
        }
        if (j.contains("outputs")) {
            const json& o = j["outputs"];
            c.outputs = {o.value("gauges", true), o.value("energies", false),
                         o.value("errors", false), o.value("snapshots", false),
                         o.value("snapshot_stride", 1), o.value("vtk", false)};
        }
        if (j.contains("debug"))
            c.debug.dump_operator = j["debug"].value("dump_operator", false);
        c.exact_initial_conditions = j.value("exact_initial_conditions", false);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    return c;
}

uint64_t ScenarioConfig::config_hash() const {
    // FNV-1a over the canonical serialization
    const std::string s = to_json();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

ScenarioConfig build_scenario_periodic_beam(double k_lambda) {
    ScenarioConfig c;
    c.name = "periodic_beam";
    const double L = 2.0 * M_PI, H = 1.0;
    c.geometry.domain_length = L;
    c.geometry.depth_profile = BathymetryProfile::constant(H);
    c.geometry.structure_span = {{0.0, L}};
    c.geometry.periodic = true;

    c.physics.g = 9.81;
    c.physics.rho_w = 1000.0;
    c.physics.rho_b = 100.0;
    c.physics.h_b = 0.01;
    const double omega = dispersion_omega(k_lambda, H, c.physics.g);
    const double D = c.physics.rho_b * c.physics.h_b * omega * omega / std::pow(k_lambda, 4);
    c.physics.rigidity = {{L, D}};

    c.wave = {0.01, k_lambda, omega, H};
    c.disc = {20, 10, 1.0, 4, 4};
    const double T = 2.0 * M_PI / omega;
    c.mode = TimeMode{T, T / 50.0};
    c.outputs.energies = true;
    c.outputs.errors = true;
    c.exact_initial_conditions = true;
    return c;
}

ScenarioConfig build_scenario_finite_beam(double k_lambda) {
    ScenarioConfig c = build_scenario_periodic_beam(k_lambda);
    c.name = "finite_beam";
    const double L = c.geometry.domain_length;
    c.geometry.structure_span = {{L / 4.0, 3.0 * L / 4.0}}; // beam of size pi centered
    return c;
}

ScenarioConfig build_scenario_khabakhpasheva(double xi) {
    ScenarioConfig c;
    c.name = "khabakhpasheva";
    const double L = 12.5, Lf = 25.0, Ld = L, H = 1.1;
    const double Lx = Lf + 2.0 * Ld;
    const double x_bl = Ld + (Lf - L) / 2.0;
    const double x_br = x_bl + L;
    const double beta_loc = 0.2; // stiff segment left of the joint
    const double x_joint = x_bl + (1.0 - beta_loc) * L;

    c.geometry.domain_length = Lx;
    c.geometry.depth_profile = BathymetryProfile::constant(H);
    c.geometry.structure_span = {{x_bl, x_br}};
    c.geometry.joint_positions = {x_joint};
    c.geometry.damping_length_inlet = Ld;
    c.geometry.damping_length_outlet = Ld;

    c.physics.g = 9.81;
    c.physics.rho_w = 1000.0;
    c.physics.h_b = 0.1;                  // draft d0 = 8.1561e-3 m
    c.physics.rho_b = 8.1561e-3 * c.physics.rho_w / c.physics.h_b;
    c.physics.rigidity = {{x_joint, 47100.0}, {Lx, 471.0}};
    c.physics.joint_xi = xi;
    c.physics.joint_ref = PhysicalParams::JointRef::LeftSegment;

    const double lambda = 0.249 * L;
    const double k = 2.0 * M_PI / lambda;
    const double omega = dispersion_omega(k, H, c.physics.g);
    c.wave = {0.01, k, omega, H};
    c.damping = DampingConfig{2.5};
    c.disc = {80, 5, 0.2, 4, 4};
    c.mode = FrequencyMode{};
    return c;
}

ScenarioConfig build_scenario_liu(double omega) {
    ScenarioConfig c;
    c.name = "liu";
    const double L = 300.0, Lf = 1500.0, Ld = 4.0 * L;
    const double Lx = Lf + 2.0 * Ld;
    const double x_bl = Ld + (Lf - L) / 2.0;
    const double x_br = x_bl + L;
    const double Hl = 60.0, Hr = 30.0;

    c.geometry.domain_length = Lx;
    c.geometry.depth_profile = BathymetryProfile::ramp(Hl, Hr, x_bl, x_br);
    c.geometry.structure_span = {{x_bl, x_br}};
    c.geometry.damping_length_inlet = Ld;
    c.geometry.damping_length_outlet = Ld;

    c.physics.g = 9.81;
    c.physics.rho_w = 1000.0;
    c.physics.h_b = 1.0; // draft d0 = 0.4878 m
    c.physics.rho_b = 0.4878 * c.physics.rho_w / c.physics.h_b;
    c.physics.rigidity = {{Lx, 1.0e10}};

    const double k = dispersion_k(omega, Hl, c.physics.g);
    c.wave = {1.0, k, omega, Hl};
    c.damping = DampingConfig{10.0};
    c.disc = {650, 5, 0.15, 2, 2};
    c.mode = FrequencyMode{};
    return c;
}

ScenarioConfig build_scenario(const std::string& name, double parameter) {
    if (name == "periodic_beam") return build_scenario_periodic_beam(parameter);
    if (name == "finite_beam") return build_scenario_finite_beam(parameter);
    if (name == "khabakhpasheva") return build_scenario_khabakhpasheva(parameter);
    if (name == "liu") return build_scenario_liu(parameter);
    throw ValidationError("build_scenario: unknown scenario '" + name + "'");
}

DiscreteModel build_model(const ScenarioConfig& config) {
    config.validate();
    DiscreteModel m;
    MeshBuildInfo info;
    Mesh2D ref = build_structured_mesh(config.geometry, config.disc.nx, config.disc.nz,
                                       config.disc.grading, &info);
    m.mesh = apply_bathymetry(ref, config.geometry.depth_profile);

    m.phi_space = build_fespace(m.mesh, FieldDomain::Volume, config.disc.r_phi);
    m.kappa_space = build_fespace(m.mesh, FieldDomain::FreeSurface, config.disc.r_eta);
    m.eta_space = build_fespace(m.mesh, FieldDomain::Structure, config.disc.r_eta);

    const auto str_ids = m.mesh.structure_facet_ids();
    for (int f : str_ids) {
        const auto& facet = m.mesh.top_facets[f];
        m.D_rho_facet.push_back(config.physics.D_rho_at(0.5 * (facet.x0 + facet.x1)));
    }
    if (m.mesh.structure_span) {
        const double Lb = (*m.mesh.structure_span)[1] - (*m.mesh.structure_span)[0];
        for (const auto& p : m.mesh.joint_interfaces)
            m.joint_k_rho.push_back(config.physics.joint_k_rho(p.x, Lb));
    }

    if (config.damping && config.damping->mu0 > 0) {
        m.damping.mu0 = config.damping->mu0;
        m.damping.inlet_length = config.geometry.damping_length_inlet;
        m.damping.outlet_length = config.geometry.damping_length_outlet;
        m.damping.outlet_start =
            config.geometry.domain_length - config.geometry.damping_length_outlet;
        m.damping_active = m.damping.active();
    }
    if (config.wave.k > 0 && config.wave.omega > 0)
        m.incident.emplace(config.wave, config.physics.g);

    m.layout = {m.phi_space.ndofs, m.kappa_space.ndofs, m.eta_space.ndofs};
    return m;
}

NewmarkState set_initial_conditions(const ScenarioConfig& config,
                                    const DiscreteModel& model) {
    NewmarkState s = NewmarkState::zero(model.layout);
    if (!config.exact_initial_conditions) return s;
    const AiryWave& wave = *model.incident;
    auto fill = [&](const FESpace& space, FieldState& f, bool volume) {
        for (int i = 0; i < space.ndofs; ++i) {
            const double x = space.dof_coords[i][0];
            const double z = space.dof_coords[i][1];
            if (volume) {
                f.x[i] = wave.phi(x, z, 0.0);
                f.xt[i] = wave.phi_t(x, z, 0.0);
                f.xtt[i] = wave.phi_tt(x, z, 0.0);
            } else {
                f.x[i] = wave.eta(x, 0.0);
                f.xt[i] = wave.eta_t(x, 0.0);
                f.xtt[i] = wave.eta_tt(x, 0.0);
            }
        }
    };
    fill(model.phi_space, s.phi, true);
    fill(model.kappa_space, s.kappa, false);
    fill(model.eta_space, s.eta, false);
    return s;
}

double exact_initial_energy(const ScenarioConfig& config) {
    if (!config.exact_initial_conditions || !config.geometry.structure_span) return 0.0;
    const double g = config.physics.g;
    const double d0 = config.physics.d0();
    const double eta0 = config.wave.eta0;
    const double k = config.wave.k;
    const double omega = config.wave.omega;
    const double L = config.geometry.domain_length;
    const auto [a, b] = *config.geometry.structure_span;
    const double D_rho = config.physics.D_rho_at(0.5 * (a + b)) ;

    auto int_sin2 = [&](double x0, double x1) {
        return 0.5 * (x1 - x0) - (std::sin(2 * k * x1) - std::sin(2 * k * x0)) / (4 * k);
    };
    auto int_cos2 = [&](double x0, double x1) {
        return 0.5 * (x1 - x0) + (std::sin(2 * k * x1) - std::sin(2 * k * x0)) / (4 * k);
    };
    const double kin_flow = 0.25 * g * eta0 * eta0 * L;
    const double pot_flow = 0.25 * g * eta0 * eta0 * L;
    const double kin_str = 0.5 * d0 * omega * omega * eta0 * eta0 * int_sin2(a, b);
    const double ela_str = 0.5 * D_rho * std::pow(k, 4) * eta0 * eta0 * int_cos2(a, b);
    return kin_flow + pot_flow + kin_str + ela_str;
}

namespace {

std::vector<double> gauge_positions(const FESpace& space) {
    std::vector<double> x(space.ndofs);
    for (int i = 0; i < space.ndofs; ++i) x[i] = space.dof_coords[i][0];
    return x;
}

} // namespace

RunResult run_scenario(const ScenarioConfig& config) {
    config.validate();
    const DiscreteModel model = build_model(config);
    RunResult result;
    result.layout = model.layout;
    result.config_hash = config.config_hash();
    result.resolved_config = config.to_json();
    result.nx_used = model.mesh.nx;
    result.eta_gauge_x = gauge_positions(model.eta_space);
    result.kappa_gauge_x = gauge_positions(model.kappa_space);
    result.exact_total_energy = exact_initial_energy(config);

    const double beta = config.stabilization.beta;
    const double gamma = config.stabilization.gamma_or_default(config.disc.r_eta);
    const double g = config.physics.g;

    if (!config.is_time_mode()) {
        OperatorSpec<std::complex<double>> spec;
        spec.mode = frequency_mode(config.wave.omega);
        spec.alpha_f = compute_alpha_f_frequency(beta, g, config.wave.omega);
        spec.beta = beta;
        spec.gamma = gamma;
        spec.g = g;
        spec.d0 = config.physics.d0();
        spec.D_rho_facet = model.D_rho_facet;
        spec.joint_k_rho = model.joint_k_rho;
        spec.damping = model.damping_active ? &model.damping : nullptr;
        spec.incident = model.incident ? &*model.incident : nullptr;

        auto sys = assemble_system(model.mesh, model.phi_space, model.kappa_space,
                                   model.eta_space, spec);
        if (config.debug.dump_operator)
            write_matrix_market(sys.A, config.name + "_operator.mtx");
        Factorization<std::complex<double>> lu(sys.A);
        const Eigen::VectorXcd x = lu.solve(sys.rhs_amplitude);
        result.solver_residual = lu.residual(sys.A, x, sys.rhs_amplitude);

        result.phi_c = x.segment(model.layout.off_phi(), model.layout.n_phi);
        result.kappa_c = x.segment(model.layout.off_kappa(), model.layout.n_kappa);
        result.eta_c = x.segment(model.layout.off_eta(), model.layout.n_eta);
        return result;
    }

    // time domain
    const auto& tm = config.time_mode_cfg();
    NewmarkParams np;
    np.gamma_nb = tm.gamma_nb;
    np.beta_nb = tm.beta_nb;
    np.dt = tm.dt;
    np.validate();

    OperatorSpec<double> spec;
    spec.mode = time_mode(np);
    spec.alpha_f = compute_alpha_f_time(beta, g, np.delta_t());
    spec.beta = beta;
    spec.gamma = gamma;
    spec.g = g;
    spec.d0 = config.physics.d0();
    spec.D_rho_facet = model.D_rho_facet;
    spec.joint_k_rho = model.joint_k_rho;
    spec.damping = model.damping_active ? &model.damping : nullptr;
    spec.incident = model.incident ? &*model.incident : nullptr;

    auto sys = assemble_system(model.mesh, model.phi_space, model.kappa_space,
                               model.eta_space, spec);
    if (config.debug.dump_operator)
        write_matrix_market(sys.A, config.name + "_operator.mtx");
    TimeIntegrator integrator(std::move(sys), np, config.wave.omega);

    NewmarkState state = set_initial_conditions(config, model);

    EnergyParams ep;
    ep.g = g;
    ep.d0 = config.physics.d0();
    ep.D_rho_facet = model.D_rho_facet;
    ep.joint_k_rho = model.joint_k_rho;

    const int nsteps = static_cast<int>(std::llround(tm.t_final / tm.dt));
    auto record = [&](const NewmarkState& s) {
        result.times.push_back(s.t);
        if (config.outputs.gauges) {
            result.eta_gauges.push_back(s.eta.x);
            result.kappa_gauges.push_back(s.kappa.x);
        }
        if (config.outputs.energies)
            result.energies.push_back(energy(model.mesh, model.phi_space,
                                             model.kappa_space, model.eta_space, ep,
                                             s.phi.x, s.kappa.x, s.eta.x, s.eta.xt));
        if (config.outputs.errors && config.exact_initial_conditions) {
            const AiryWave& w = *model.incident;
            const double t = s.t;
            auto [e_phi, e_eta] = l2_errors(
                model.mesh, model.phi_space, model.eta_space,
                [&](double x, double z) { return w.phi(x, z, t); },
                [&](double x) { return w.eta(x, t); }, s.phi.x, s.eta.x);
            result.errors.push_back({e_phi, e_eta});
        }
        if (config.outputs.snapshots &&
            (s.step % std::max(1, config.outputs.snapshot_stride) == 0))
            result.snapshots.emplace_back(s.t, s);
    };

    record(state);
    double max_residual = 0.0;
    for (int n = 0; n < nsteps; ++n) {
        integrator.advance(state);
        max_residual = std::max(max_residual, integrator.last_residual());
        record(state);
    }
    result.solver_residual = max_residual;
    result.final_state = state;
    return result;
}

} // namespace vlfs
