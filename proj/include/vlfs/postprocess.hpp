#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vlfs/assembly.hpp"
#include "vlfs/fe.hpp"
#include "vlfs/mesh.hpp"

namespace vlfs {

/// Energy bookkeeping, rho_w-normalized as in the governing forms; multiply
/// by rho_w for Joules per unit width.
struct EnergyBreakdown {
    double kin_flow = 0;  // 1/2 ||grad phi||^2
    double pot_flow = 0;  // g/2 (||kappa||^2 + ||eta||^2)
    double kin_str = 0;   // 1/2 ||d0^(1/2) eta_t||^2
    double ela_str = 0;   // 1/2 ||D_rho^(1/2) eta''||^2
    double joint = 0;     // 1/2 ||k_rho^(1/2) [eta']||^2 on joints
    double total = 0;
};

struct EnergyParams {
    double g = 9.81;
    double d0 = 0.0;
    std::vector<double> D_rho_facet; // per structure facet
    std::vector<double> joint_k_rho; // aligned with mesh joints
};

EnergyBreakdown energy(const Mesh2D& mesh, const FESpace& phi_space,
                       const FESpace& kappa_space, const FESpace& eta_space,
                       const EnergyParams& params, const Eigen::VectorXd& phi,
                       const Eigen::VectorXd& kappa, const Eigen::VectorXd& eta,
                       const Eigen::VectorXd& eta_t);

/// L2 errors of the potential over the fluid domain and of the deflection
/// over the beam, quadrature degree >= 2r+2.
std::pair<double, double>
l2_errors(const Mesh2D& mesh, const FESpace& phi_space, const FESpace& eta_space,
          const std::function<double(double, double)>& phi_exact,
          const std::function<double(double)>& eta_exact, const Eigen::VectorXd& phi,
          const Eigen::VectorXd& eta);

/// Least-squares slope of log(error) against log(h or dt).
double convergence_slope(const std::vector<std::pair<double, double>>& pairs);

/// Pointwise max |eta| over the sampled steps whose time lies in [t_a, t_b].
std::vector<double> envelope(const std::vector<double>& times,
                             const std::vector<Eigen::VectorXd>& gauges, double t_a,
                             double t_b);

/// Interpolates an analytic field at the dof nodes of a space.
Eigen::VectorXd interpolate(const FESpace& space,
                            const std::function<double(double, double)>& f);

} // namespace vlfs
