#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vlfs/assembly.hpp"
#include "vlfs/mesh.hpp"
#include "vlfs/params.hpp"
#include "vlfs/postprocess.hpp"
#include "vlfs/timeloop.hpp"
#include "vlfs/waves.hpp"

namespace vlfs {

struct Discretization {
    int nx = 20;
    int nz = 10;
    double grading = 1.0; // top/bottom layer height ratio
    int r_phi = 4;
    int r_eta = 4; // also used for the free-surface space
};

struct FrequencyMode {};
struct TimeMode {
    double t_final = 0.0;
    double dt = 0.0;
    double gamma_nb = 0.5;
    double beta_nb = 0.25;
};

struct DampingConfig {
    double mu0 = 0.0;
};

struct OutputRequest {
    bool gauges = true;
    bool energies = false;
    bool errors = false;
    bool snapshots = false;
    int snapshot_stride = 1;
    bool vtk = false;
};

struct DebugOptions {
    bool dump_operator = false;
};

/// Complete declarative description of one experiment.
struct ScenarioConfig {
    int schema_version = 1;
    std::string name = "custom";
    GeometryConfig geometry;
    PhysicalParams physics;
    WaveInput wave;
    std::optional<DampingConfig> damping;
    Discretization disc;
    std::variant<FrequencyMode, TimeMode> mode = FrequencyMode{};
    StabilizationParams stabilization;
    OutputRequest outputs;
    DebugOptions debug;
    /// Periodic traveling-wave start (and exact-solution bookkeeping).
    bool exact_initial_conditions = false;

    bool is_time_mode() const { return std::holds_alternative<TimeMode>(mode); }
    const TimeMode& time_mode_cfg() const { return std::get<TimeMode>(mode); }

    void validate() const;

    std::string to_json() const;
    static ScenarioConfig from_json(const std::string& text);
    uint64_t config_hash() const;
};

// Pre-built experiment configurations.
ScenarioConfig build_scenario_periodic_beam(double k_lambda);
ScenarioConfig build_scenario_finite_beam(double k_lambda = 15.0);
ScenarioConfig build_scenario_khabakhpasheva(double xi);
ScenarioConfig build_scenario_liu(double omega);
/// Dispatch by name: periodic_beam | finite_beam | khabakhpasheva | liu.
ScenarioConfig build_scenario(const std::string& name, double parameter);

struct RunResult {
    FieldLayout layout;
    // frequency mode
    Eigen::VectorXcd phi_c, kappa_c, eta_c;
    // time mode series
    std::vector<double> times;
    std::vector<Eigen::VectorXd> eta_gauges;   // eta at structure dof nodes
    std::vector<Eigen::VectorXd> kappa_gauges; // kappa at free-surface dof nodes
    std::vector<EnergyBreakdown> energies;
    std::vector<std::array<double, 2>> errors; // (e_phi, e_eta) per recorded step
    std::vector<std::pair<double, NewmarkState>> snapshots;
    NewmarkState final_state;

    std::vector<double> eta_gauge_x;
    std::vector<double> kappa_gauge_x;
    double solver_residual = 0.0;
    double exact_total_energy = 0.0; // closed form; 0 when unavailable
    uint64_t config_hash = 0;
    std::string resolved_config;
    int nx_used = 0;
};

/// Assembled discrete setting shared by the drivers and tests.
struct DiscreteModel {
    Mesh2D mesh;
    FESpace phi_space, kappa_space, eta_space;
    std::vector<double> D_rho_facet;
    std::vector<double> joint_k_rho;
    DampingZone damping;
    bool damping_active = false;
    std::optional<AiryWave> incident;
    FieldLayout layout;
};

DiscreteModel build_model(const ScenarioConfig& config);

/// Initial Newmark state: analytic traveling-wave data for exact-start
/// scenarios, zeros otherwise.
NewmarkState set_initial_conditions(const ScenarioConfig& config,
                                    const DiscreteModel& model);

RunResult run_scenario(const ScenarioConfig& config);

/// Closed-form total energy of the traveling-wave initial condition;
/// covers the fully covered top ("infinite" beam) and the centered
/// finite-beam layout.
double exact_initial_energy(const ScenarioConfig& config);

} // namespace vlfs
