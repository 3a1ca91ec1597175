#include "vlfs/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace vlfs {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {}

void CsvWriter::header(const std::vector<std::string>& columns) {
    std::ostringstream line;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) line << ",";
        line << columns[i];
    }
    lines_.push_back(line.str());
    ncols_ = columns.size();
}

void CsvWriter::row(const std::vector<double>& values) {
    if (ncols_ && values.size() != ncols_)
        throw DimensionError("csv: row width does not match header");
    std::ostringstream line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line << ",";
        line << format17(values[i]);
    }
    lines_.push_back(line.str());
}

void CsvWriter::close() {
    if (closed_) return;
    std::ofstream os(path_);
    if (!os) throw Error("csv: cannot open " + path_);
    for (const auto& l : lines_) os << l << "\n";
    closed_ = true;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    CsvWriter w(path);
    w.header(columns);
    for (const auto& r : rows) w.row(r);
    w.close();
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("csv: cannot open " + path);
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (first) {
            while (std::getline(ss, cell, ',')) columns.push_back(cell);
            first = false;
        } else {
            std::vector<double> row;
            while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
            rows.push_back(std::move(row));
        }
    }
    return {columns, rows};
}

namespace {

/// Dof-lattice geometry: points = volume dof coords, quads = r x r
/// subdivision of each cell.
struct LatticeGrid {
    std::vector<std::array<double, 2>> points;
    std::vector<std::array<int, 4>> quads;
    std::vector<int> top_point_of_dof; // -1 marker unused
};

LatticeGrid lattice_grid(const Mesh2D& mesh, const FESpace& phi_space) {
    LatticeGrid g;
    g.points = phi_space.dof_coords;
    const int r = phi_space.order;
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        const auto& dofs = phi_space.cell_dofs[c];
        for (int b = 0; b < r; ++b)
            for (int a = 0; a < r; ++a) {
                g.quads.push_back({dofs[a + (r + 1) * b], dofs[a + 1 + (r + 1) * b],
                                   dofs[a + 1 + (r + 1) * (b + 1)],
                                   dofs[a + (r + 1) * (b + 1)]});
            }
    }
    return g;
}

void write_vtk_prologue(std::ofstream& os, const LatticeGrid& g) {
    os << "# vtk DataFile Version 3.0\n";
    os << "hydroelastic solution\n";
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << g.points.size() << " double\n";
    os.precision(17);
    for (const auto& p : g.points) os << p[0] << " " << p[1] << " 0\n";
    os << "CELLS " << g.quads.size() << " " << 5 * g.quads.size() << "\n";
    for (const auto& q : g.quads)
        os << "4 " << q[0] << " " << q[1] << " " << q[2] << " " << q[3] << "\n";
    os << "CELL_TYPES " << g.quads.size() << "\n";
    for (std::size_t i = 0; i < g.quads.size(); ++i) os << "9\n";
    os << "POINT_DATA " << g.points.size() << "\n";
}

void write_scalar_array(std::ofstream& os, const std::string& name,
                        const std::vector<double>& values) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) os << v << "\n";
}

/// Surface field scattered onto the volume dof lattice: values on the top
/// boundary points, zero elsewhere. Needs matching surface/volume orders;
/// with mixed orders the surface values are interpolated at the volume's
/// top-edge nodes.
std::vector<double> surface_on_lattice(const Mesh2D& mesh, const FESpace& phi_space,
                                       const FESpace& srf_space,
                                       const Eigen::VectorXd& coeff) {
    std::vector<double> out(phi_space.ndofs, 0.0);
    if (srf_space.ndofs == 0) return out;
    const int rv = phi_space.order;
    const Lagrange1D basis(srf_space.order);
    std::vector<double> N(basis.size());
    for (std::size_t e = 0; e < srf_space.cell_dofs.size(); ++e) {
        const int facet_id = srf_space.facet_of_element[e];
        const auto& facet = mesh.top_facets[facet_id];
        const auto& vdofs = phi_space.cell_dofs[facet.cell];
        const Lagrange1D vol_basis(rv);
        for (int a = 0; a <= rv; ++a) {
            const double xi = vol_basis.nodes()[a];
            basis.eval(xi, N);
            double v = 0;
            for (int i = 0; i < basis.size(); ++i)
                v += coeff[srf_space.cell_dofs[e][i]] * N[i];
            out[vdofs[a + (rv + 1) * rv]] = v;
        }
    }
    return out;
}

} // namespace

void write_solution_vtk(const std::string& path, const Mesh2D& mesh,
                        const FESpace& phi_space, const FESpace& kappa_space,
                        const FESpace& eta_space, const Eigen::VectorXd& phi,
                        const Eigen::VectorXd& kappa, const Eigen::VectorXd& eta) {
    std::ofstream os(path);
    if (!os) throw Error("vtk: cannot open " + path);
    const auto grid = lattice_grid(mesh, phi_space);
    write_vtk_prologue(os, grid);
    std::vector<double> phi_values(phi.data(), phi.data() + phi.size());
    write_scalar_array(os, "phi", phi_values);
    auto surface = surface_on_lattice(mesh, phi_space, eta_space, eta);
    const auto kap = surface_on_lattice(mesh, phi_space, kappa_space, kappa);
    for (std::size_t i = 0; i < surface.size(); ++i) surface[i] += kap[i];
    write_scalar_array(os, "eta", surface);
}

void write_solution_vtk_complex(const std::string& path, const Mesh2D& mesh,
                                const FESpace& phi_space, const FESpace& kappa_space,
                                const FESpace& eta_space, const Eigen::VectorXcd& phi,
                                const Eigen::VectorXcd& kappa,
                                const Eigen::VectorXcd& eta) {
    std::ofstream os(path);
    if (!os) throw Error("vtk: cannot open " + path);
    const auto grid = lattice_grid(mesh, phi_space);
    write_vtk_prologue(os, grid);

    auto parts = [&](const Eigen::VectorXcd& v, const FESpace* srf) {
        std::vector<std::vector<double>> out(3);
        const Eigen::VectorXd re = v.real(), im = v.imag();
        if (!srf) {
            out[0].assign(re.data(), re.data() + re.size());
            out[1].assign(im.data(), im.data() + im.size());
        } else {
            out[0] = surface_on_lattice(mesh, phi_space, *srf, re);
            out[1] = surface_on_lattice(mesh, phi_space, *srf, im);
        }
        out[2].resize(out[0].size());
        for (std::size_t i = 0; i < out[0].size(); ++i)
            out[2][i] = std::hypot(out[0][i], out[1][i]);
        return out;
    };

    const auto phi_parts = parts(phi, nullptr);
    write_scalar_array(os, "phi_re", phi_parts[0]);
    write_scalar_array(os, "phi_im", phi_parts[1]);
    write_scalar_array(os, "phi_abs", phi_parts[2]);

    auto eta_parts = parts(eta, &eta_space);
    const auto kap_parts = parts(kappa, &kappa_space);
    for (int p = 0; p < 3; ++p)
        for (std::size_t i = 0; i < eta_parts[p].size(); ++i)
            eta_parts[p][i] += kap_parts[p][i];
    write_scalar_array(os, "eta_re", eta_parts[0]);
    write_scalar_array(os, "eta_im", eta_parts[1]);
    write_scalar_array(os, "eta_abs", eta_parts[2]);
}

namespace {

template <class Scalar>
void write_mm(const Eigen::SparseMatrix<Scalar>& A, const std::string& path,
              bool complex_field) {
    std::ofstream os(path);
    if (!os) throw Error("matrix-market: cannot open " + path);
    os << "%%MatrixMarket matrix coordinate "
       << (complex_field ? "complex" : "real") << " general\n";
    os << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
    os.precision(17);
    for (int k = 0; k < A.outerSize(); ++k)
        for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(A, k); it; ++it) {
            if constexpr (std::is_same_v<Scalar, double>)
                os << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
            else
                os << it.row() + 1 << " " << it.col() + 1 << " " << it.value().real()
                   << " " << it.value().imag() << "\n";
        }
}

} // namespace

void write_matrix_market(const Eigen::SparseMatrix<double>& A, const std::string& path) {
    write_mm(A, path, false);
}
void write_matrix_market(const Eigen::SparseMatrix<std::complex<double>>& A,
                         const std::string& path) {
    write_mm(A, path, true);
}

} // namespace vlfs
