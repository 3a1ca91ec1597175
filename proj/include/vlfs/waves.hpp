#pragma once

#include <cmath>
#include <complex>

#include "vlfs/errors.hpp"

namespace vlfs {

/// Airy dispersion: omega = sqrt(g k tanh(k H)).
double dispersion_omega(double k, double H, double g);

/// Unique positive root of omega^2 = g k tanh(k H), bracketed bisection to
/// 1e-12 relative.
double dispersion_k(double omega, double H, double g);

/// Incident-wave description at the inlet depth.
struct WaveInput {
    double eta0 = 0.0;  // amplitude (m)
    double k = 0.0;     // wavenumber (1/m)
    double omega = 0.0; // frequency (rad/s)
    double depth = 0.0; // depth at the inlet (m)

    double period() const { return 2.0 * M_PI / omega; }
    double wavelength() const { return 2.0 * M_PI / k; }
    /// Dispersion consistency to 1e-10 relative.
    void validate(double g) const;
};

/// Traveling Airy wave kinematics. Vertical coordinate z is measured from
/// the rest surface (z in [-H, 0]); the hyperbolic profile uses z~ = z + H
/// from the seabed. Time convention: fields rotate as exp(-i omega t), so
/// eta(x,t) = eta0 cos(kx - omega t).
class AiryWave {
public:
    AiryWave(const WaveInput& wave, double g);

    const WaveInput& input() const { return wave_; }

    double eta(double x, double t) const;
    double eta_t(double x, double t) const;
    double eta_tt(double x, double t) const;

    double phi(double x, double z, double t) const;
    double phi_t(double x, double z, double t) const;
    double phi_tt(double x, double z, double t) const;

    /// d(phi)/dz on the top boundary z = 0.
    double phi_z_surface(double x, double t) const;

    // Complex amplitudes under the exp(-i omega t) convention:
    // value(t) = Re[amplitude * exp(-i omega t)].
    std::complex<double> eta_amplitude(double x) const;
    std::complex<double> phi_amplitude(double x, double z) const;
    /// Inlet Neumann datum n.grad(phi) with outward normal -x at x = x_in.
    std::complex<double> inlet_velocity_amplitude(double z, double x_in = 0.0) const;
    /// d(phi)/dz amplitude on the top boundary z = 0.
    std::complex<double> phi_z_surface_amplitude(double x) const;

private:
    WaveInput wave_;
    double cosh_profile(double z) const; // cosh(k(z+H))/sinh(kH)
    double sinh_profile(double z) const; // sinh(k(z+H))/sinh(kH)
};

} // namespace vlfs
