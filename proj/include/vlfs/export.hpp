#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vlfs/fe.hpp"
#include "vlfs/mesh.hpp"

namespace vlfs {

/// Lossless decimal formatting (17 significant digits).
std::string format17(double v);

/// CSV writer: header row naming columns (with units in the names), one row
/// per record, values at 17 significant digits.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void close();

private:
    std::string path_;
    std::vector<std::string> lines_;
    std::size_t ncols_ = 0;
    bool closed_ = false;
};

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

/// Parses a CSV written by write_csv (used by round-trip tests and tools).
std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_csv(const std::string& path);

/// Legacy ASCII VTK of the solution on the dof lattice (cells subdivided
/// r x r so high-order nodal values are carried exactly). Frequency-mode
/// fields expand into _re/_im/_abs triplets.
void write_solution_vtk(const std::string& path, const Mesh2D& mesh,
                        const FESpace& phi_space, const FESpace& kappa_space,
                        const FESpace& eta_space, const Eigen::VectorXd& phi,
                        const Eigen::VectorXd& kappa, const Eigen::VectorXd& eta);

void write_solution_vtk_complex(const std::string& path, const Mesh2D& mesh,
                                const FESpace& phi_space, const FESpace& kappa_space,
                                const FESpace& eta_space, const Eigen::VectorXcd& phi,
                                const Eigen::VectorXcd& kappa,
                                const Eigen::VectorXcd& eta);

/// MatrixMarket coordinate-format dump (debug flag; oracle comparisons).
void write_matrix_market(const Eigen::SparseMatrix<double>& A, const std::string& path);
void write_matrix_market(const Eigen::SparseMatrix<std::complex<double>>& A,
                         const std::string& path);

} // namespace vlfs
