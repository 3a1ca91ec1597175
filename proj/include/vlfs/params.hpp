#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "vlfs/errors.hpp"

namespace vlfs {

/// Piecewise-constant beam rigidity: D applies for x < x_to of the segment;
/// the last segment covers the rest of the beam.
struct RigiditySegment {
    double x_to = 0.0;
    double D = 0.0; // N m
};

struct PhysicalParams {
    double g = 9.81;       // m/s^2
    double rho_w = 1000.0; // kg/m^3
    double rho_b = 0.0;    // kg/m^3
    double h_b = 0.0;      // m
    std::vector<RigiditySegment> rigidity; // at least one segment when a beam exists
    double joint_xi = 0.0;                 // adimensional rotational stiffness
    /// Which segment's rigidity enters k_rho = xi D_rho / L at a joint.
    enum class JointRef { LeftSegment, RightSegment };
    JointRef joint_ref = JointRef::LeftSegment;

    double d0() const { return rho_b * h_b / rho_w; }

    double D_at(double x) const {
        if (rigidity.empty()) throw ValidationError("physics: no rigidity segments");
        for (std::size_t s = 0; s + 1 < rigidity.size(); ++s)
            if (x < rigidity[s].x_to) return rigidity[s].D;
        return rigidity.back().D;
    }
    double D_rho_at(double x) const { return D_at(x) / rho_w; }

    /// Rotational spring constant (already rho_w-normalized) of a joint at
    /// x_joint for a beam of length L.
    double joint_k_rho(double x_joint, double beam_length) const {
        const double eps = 1e-9 * beam_length;
        const double D = joint_ref == JointRef::LeftSegment ? D_at(x_joint - eps)
                                                            : D_at(x_joint + eps);
        const double k = joint_xi * (D / rho_w) / beam_length;
        if (k < 0) throw ValidationError("physics: joint stiffness must be non-negative");
        return k;
    }

    void validate() const {
        if (g <= 0 || rho_w <= 0) throw ValidationError("physics: g and rho_w must be positive");
        if (rho_b < 0 || h_b < 0) throw ValidationError("physics: rho_b and h_b must be non-negative");
        for (const auto& s : rigidity)
            if (s.D < 0) throw ValidationError("physics: rigidity must be non-negative");
        if (joint_xi < 0) throw ValidationError("physics: joint xi must be non-negative");
    }
};

/// Free-surface stabilization and C/DG penalty parameters.
struct StabilizationParams {
    double beta = 0.5;
    double gamma = 0.0; // 0 = use default 10 r (r+1)

    static double default_gamma(int order) { return 10.0 * order * (order + 1); }
    double gamma_or_default(int order) const {
        return gamma > 0 ? gamma : default_gamma(order);
    }
    void validate() const {
        if (!(beta > 0.0 && beta < 1.0))
            throw ValidationError("stabilization: beta must lie in (0,1)");
        if (gamma < 0) throw ValidationError("stabilization: gamma must be non-negative");
    }
};

/// alpha_f for the time domain: (1-beta) delta_t / (beta g).
double compute_alpha_f_time(double beta, double g, double delta_t);
/// alpha_f^omega for the frequency domain: (-i omega / g) (1-beta)/beta.
std::complex<double> compute_alpha_f_frequency(double beta, double g, double omega);

/// Absorbing layers at the domain ends. mu1 ramps from mu0 at the outer
/// boundaries to zero at the inner zone edges; mu2 = k mu1.
struct DampingZone {
    double mu0 = 0.0;
    double inlet_length = 0.0;  // zone [0, inlet_length]
    double outlet_start = 0.0;  // zone [outlet_start, outlet_start + outlet_length]
    double outlet_length = 0.0;

    bool active() const { return mu0 > 0 && (inlet_length > 0 || outlet_length > 0); }

    double mu1(double x) const {
        if (inlet_length > 0 && x < inlet_length)
            return mu0 * (1.0 - std::sin(0.5 * M_PI * x / inlet_length));
        if (outlet_length > 0 && x > outlet_start)
            return mu0 * (1.0 - std::cos(0.5 * M_PI * (x - outlet_start) / outlet_length));
        return 0.0;
    }
    double mu2(double x, double k) const { return k * mu1(x); }

    void validate() const {
        if (mu0 < 0) throw ValidationError("damping: mu0 must be non-negative");
        if (inlet_length < 0 || outlet_length < 0)
            throw ValidationError("damping: zone lengths must be non-negative");
    }
};

/// Newmark-beta parameters and the derived one-step coefficients.
struct NewmarkParams {
    double gamma_nb = 0.5;
    double beta_nb = 0.25;
    double dt = 0.0;

    double delta_t() const { return gamma_nb / (beta_nb * dt); }
    double delta_tt() const { return 1.0 / (beta_nb * dt * dt); }

    // x_t^{n+1} = delta_t (x^{n+1} - x^n) + w_v x_t^n + w_a x_tt^n
    double velocity_weight_xt() const { return 1.0 - gamma_nb / beta_nb; }
    double velocity_weight_xtt() const { return dt * (1.0 - gamma_nb / (2.0 * beta_nb)); }
    // x_tt^{n+1} = delta_tt (x^{n+1} - x^n) + a_v x_t^n + a_a x_tt^n
    double acceleration_weight_xt() const { return -1.0 / (beta_nb * dt); }
    double acceleration_weight_xtt() const { return 1.0 - 1.0 / (2.0 * beta_nb); }

    void validate() const {
        if (beta_nb <= 0) throw ValidationError("newmark: beta_NB must be positive");
        if (gamma_nb < 0) throw ValidationError("newmark: gamma_NB must be non-negative");
        if (dt <= 0) throw ValidationError("newmark: dt must be positive");
    }
};

} // namespace vlfs
