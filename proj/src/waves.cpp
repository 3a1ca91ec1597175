#include "vlfs/waves.hpp"

namespace vlfs {

double dispersion_omega(double k, double H, double g) {
    if (k <= 0 || H <= 0) throw ValidationError("dispersion_omega: k and H must be positive");
    return std::sqrt(g * k * std::tanh(k * H));
}

double dispersion_k(double omega, double H, double g) {
    if (omega <= 0 || H <= 0) throw ValidationError("dispersion_k: omega and H must be positive");
    const double w2 = omega * omega;
    auto f = [&](double k) { return g * k * std::tanh(k * H) - w2; };
    // g k tanh(kH) <= g k, so the root lies at k >= w2/g
    double lo = w2 / g * 0.5;
    double hi = w2 / g;
    while (f(hi) < 0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0)
            lo = mid;
        else
            hi = mid;
        if ((hi - lo) <= 1e-13 * hi) break;
    }
    return 0.5 * (lo + hi);
}

void WaveInput::validate(double g) const {
    if (eta0 < 0) throw ValidationError("wave: amplitude must be non-negative");
    if (k <= 0 || omega <= 0 || depth <= 0)
        throw ValidationError("wave: k, omega and depth must be positive");
    const double w2 = g * k * std::tanh(k * depth);
    if (std::abs(omega * omega - w2) > 1e-10 * w2)
        throw ValidationError("wave: omega^2 = g k tanh(kH) violated beyond 1e-10 relative");
}

AiryWave::AiryWave(const WaveInput& wave, double g) : wave_(wave) {
    wave_.validate(g);
}

double AiryWave::cosh_profile(double z) const {
    // cosh(k(z+H))/sinh(kH), evaluated in ratio form to stay finite for large kH
    const double k = wave_.k, H = wave_.depth;
    const double a = k * (z + H), b = k * H;
    return (std::exp(a - b) + std::exp(-a - b)) / (1.0 - std::exp(-2.0 * b));
}

double AiryWave::sinh_profile(double z) const {
    const double k = wave_.k, H = wave_.depth;
    const double a = k * (z + H), b = k * H;
    return (std::exp(a - b) - std::exp(-a - b)) / (1.0 - std::exp(-2.0 * b));
}

double AiryWave::eta(double x, double t) const {
    return wave_.eta0 * std::cos(wave_.k * x - wave_.omega * t);
}
double AiryWave::eta_t(double x, double t) const {
    return wave_.eta0 * wave_.omega * std::sin(wave_.k * x - wave_.omega * t);
}
double AiryWave::eta_tt(double x, double t) const {
    return -wave_.eta0 * wave_.omega * wave_.omega * std::cos(wave_.k * x - wave_.omega * t);
}

double AiryWave::phi(double x, double z, double t) const {
    const double a = wave_.eta0 * wave_.omega / wave_.k;
    return a * cosh_profile(z) * std::sin(wave_.k * x - wave_.omega * t);
}
double AiryWave::phi_t(double x, double z, double t) const {
    const double a = wave_.eta0 * wave_.omega * wave_.omega / wave_.k;
    return -a * cosh_profile(z) * std::cos(wave_.k * x - wave_.omega * t);
}
double AiryWave::phi_tt(double x, double z, double t) const {
    const double a = wave_.eta0 * std::pow(wave_.omega, 3) / wave_.k;
    return -a * cosh_profile(z) * std::sin(wave_.k * x - wave_.omega * t);
}
double AiryWave::phi_z_surface(double x, double t) const {
    return wave_.eta0 * wave_.omega * std::sin(wave_.k * x - wave_.omega * t);
}

std::complex<double> AiryWave::eta_amplitude(double x) const {
    return wave_.eta0 * std::exp(std::complex<double>(0.0, wave_.k * x));
}
std::complex<double> AiryWave::phi_amplitude(double x, double z) const {
    const std::complex<double> i(0.0, 1.0);
    return -i * (wave_.eta0 * wave_.omega / wave_.k) * cosh_profile(z) *
           std::exp(i * wave_.k * x);
}
std::complex<double> AiryWave::inlet_velocity_amplitude(double z, double x_in) const {
    // n = -x at the inlet: -d(phi)/dx
    const std::complex<double> i(0.0, 1.0);
    return -wave_.eta0 * wave_.omega * cosh_profile(z) * std::exp(i * wave_.k * x_in);
}
std::complex<double> AiryWave::phi_z_surface_amplitude(double x) const {
    const std::complex<double> i(0.0, 1.0);
    return -i * wave_.eta0 * wave_.omega * std::exp(i * wave_.k * x);
}

} // namespace vlfs
