#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCore>

#include "vlfs/fe.hpp"
#include "vlfs/mesh.hpp"
#include "vlfs/params.hpp"
#include "vlfs/waves.hpp"

namespace vlfs {

/// Offsets of the stacked unknown vector [phi; kappa; eta].
struct FieldLayout {
    int n_phi = 0, n_kappa = 0, n_eta = 0;
    int off_phi() const { return 0; }
    int off_kappa() const { return n_phi; }
    int off_eta() const { return n_phi + n_kappa; }
    int total() const { return n_phi + n_kappa + n_eta; }
};

/// Factors replacing the first/second time derivatives in the one-step or
/// harmonic operator: (delta_t, delta_tt) in the time domain,
/// (-i omega, -omega^2) in the frequency domain.
template <class Scalar>
struct ModeCoefficients {
    Scalar dt{};
    Scalar dtt{};
};

inline ModeCoefficients<double> time_mode(const NewmarkParams& p) {
    return {p.delta_t(), p.delta_tt()};
}
inline ModeCoefficients<std::complex<double>> frequency_mode(double omega) {
    return {std::complex<double>(0.0, -omega), std::complex<double>(-omega * omega, 0.0)};
}

/// Term toggles; production assembly keeps everything on. Used by tests to
/// isolate blocks (kernel dimensions, penalty scaling, oracle comparisons).
struct AssemblyOptions {
    bool laplacian = true;
    bool free_surface = true;       // kinematic + stabilized dynamic rows on the free surface
    bool structure_coupling = true; // kinematic + mass/coupling rows on the beam
    bool bending = true;
    bool cdg_consistency = true;
    bool cdg_penalty = true;
    bool joints = true;
    bool damping = true;
};

/// Everything the assembler needs besides mesh and spaces.
template <class Scalar>
struct OperatorSpec {
    ModeCoefficients<Scalar> mode;
    Scalar alpha_f{};
    double beta = 0.5;
    double gamma = 0.0;
    double g = 9.81;
    double d0 = 0.0;
    std::vector<double> D_rho_facet;  // per structure facet, rho_w-normalized
    std::vector<double> joint_k_rho;  // aligned with mesh.joint_interfaces
    const DampingZone* damping = nullptr;
    const AiryWave* incident = nullptr; // inlet forcing and damping targets
};

template <class Scalar>
struct AssembledSystem {
    FieldLayout layout;
    Eigen::SparseMatrix<Scalar> A;
    /// Complex data amplitudes b~ under exp(-i omega t); the frequency-domain
    /// right-hand side directly, or Re[b~ exp(-i omega t)] per time step.
    Eigen::VectorXcd rhs_amplitude;
    /// Time mode only: rhs += M_dt * H1 + M_dtt * H2 (Newmark history maps).
    Eigen::SparseMatrix<double> M_dt;
    Eigen::SparseMatrix<double> M_dtt;
};

template <class Scalar>
AssembledSystem<Scalar> assemble_system(const Mesh2D& mesh, const FESpace& phi,
                                        const FESpace& kappa, const FESpace& eta,
                                        const OperatorSpec<Scalar>& spec,
                                        const AssemblyOptions& options = {});

enum class Field { Phi, Kappa, Eta };

/// Copies one field-pair block out of the stacked sparse operator.
template <class Scalar>
Eigen::SparseMatrix<Scalar> extract_block(const Eigen::SparseMatrix<Scalar>& A,
                                          const FieldLayout& layout, Field row,
                                          Field col);

/// Standalone fluid Laplacian block (symmetric positive semi-definite,
/// constants in the kernel before coupling).
Eigen::SparseMatrix<double> assemble_fluid_laplacian(const Mesh2D& mesh,
                                                     const FESpace& phi);

} // namespace vlfs
