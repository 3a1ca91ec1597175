#include "vlfs/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vlfs {

namespace {

constexpr double kAlignTol = 1e-7; // relative grid-alignment tolerance

bool on_grid(double x, double Lx, int n) {
    const double t = x * static_cast<double>(n) / Lx;
    return std::abs(t - std::round(t)) <= kAlignTol * std::max(1.0, std::abs(t));
}

int grid_index(double x, double Lx, int n) {
    return static_cast<int>(std::round(x * static_cast<double>(n) / Lx));
}

} // namespace

double BathymetryProfile::depth_at(double x) const {
    if (kind == Kind::Constant) return depth;
    if (x <= ramp_from) return depth_left;
    if (x >= ramp_to) return depth_right;
    return depth_left - (x - ramp_from) / (ramp_to - ramp_from) * (depth_left - depth_right);
}

void BathymetryProfile::validate(double domain_length) const {
    if (kind == Kind::Constant) {
        if (depth <= 0) throw ValidationError("bathymetry: depth must be positive");
        return;
    }
    if (depth_left <= 0 || depth_right <= 0)
        throw ValidationError("bathymetry: depths must be positive");
    if (!(ramp_from < ramp_to))
        throw ValidationError("bathymetry: ramp interval must be non-degenerate");
    if (ramp_from < 0 || ramp_to > domain_length)
        throw ValidationError("bathymetry: ramp interval outside domain");
}

void GeometryConfig::validate() const {
    if (domain_length <= 0) throw ValidationError("geometry: domain_length must be positive");
    depth_profile.validate(domain_length);
    if (damping_length_inlet < 0 || damping_length_outlet < 0)
        throw ValidationError("geometry: damping lengths must be non-negative");
    if (structure_span) {
        const auto [a, b] = *structure_span;
        if (!(0 <= a && a < b && b <= domain_length))
            throw ValidationError("geometry: structure span must satisfy 0 <= x_bl < x_br <= Lx");
        double prev = a;
        for (double j : joint_positions) {
            if (!(j > prev && j < b))
                throw ValidationError("geometry: joints must be strictly increasing and interior to the span");
            prev = j;
        }
    } else if (!joint_positions.empty()) {
        throw ValidationError("geometry: joints require a structure span");
    }
}

std::array<std::array<double, 2>, 4> Mesh2D::cell_corners(int c) const {
    const auto& q = cells[c];
    return {nodes[q[0]], nodes[q[1]], nodes[q[2]], nodes[q[3]]};
}

std::vector<int> Mesh2D::structure_facet_ids() const {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(top_facets.size()); ++i)
        if (top_facets[i].tag == FacetTag::Structure) ids.push_back(i);
    return ids;
}

std::vector<int> Mesh2D::free_surface_facet_ids() const {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(top_facets.size()); ++i)
        if (top_facets[i].tag == FacetTag::FreeSurface) ids.push_back(i);
    return ids;
}

int Mesh2D::count_facets(FacetTag tag) const {
    switch (tag) {
    case FacetTag::Bottom: return static_cast<int>(bottom_facets.size());
    case FacetTag::Inlet: return static_cast<int>(inlet_facets.size());
    case FacetTag::Outlet: return static_cast<int>(outlet_facets.size());
    default: break;
    }
    int n = 0;
    for (const auto& f : top_facets)
        if (f.tag == tag) ++n;
    return n;
}

namespace {

/// Smallest n >= nx putting all breakpoints on the grid.
int snap_nx(const GeometryConfig& geom, int nx) {
    std::vector<double> breakpoints;
    if (geom.structure_span) {
        breakpoints.push_back((*geom.structure_span)[0]);
        breakpoints.push_back((*geom.structure_span)[1]);
    }
    for (double j : geom.joint_positions) breakpoints.push_back(j);
    if (breakpoints.empty()) return nx;

    const double Lx = geom.domain_length;
    const int limit = 32 * nx;
    for (int n = nx; n <= limit; ++n) {
        bool ok = true;
        for (double b : breakpoints)
            if (!on_grid(b, Lx, n)) { ok = false; break; }
        if (ok) return n;
    }
    std::ostringstream msg;
    msg << "mesh: structure endpoints/joints not representable on a grid with nx in ["
        << nx << ", " << limit << "]";
    throw MisalignmentError(msg.str());
}

std::vector<double> grading_levels(int nz, double ratio) {
    std::vector<double> z(nz + 1);
    if (nz == 1 || std::abs(ratio - 1.0) < 1e-14) {
        for (int j = 0; j <= nz; ++j) z[j] = -1.0 + static_cast<double>(j) / nz;
        z[nz] = 0.0;
        return z;
    }
    // heights h0*q^j bottom to top, q^(nz-1) = ratio, sum = 1
    const double q = std::pow(ratio, 1.0 / (nz - 1));
    const double h0 = (1.0 - q) / (1.0 - std::pow(q, nz));
    z[0] = -1.0;
    double h = h0;
    for (int j = 0; j < nz; ++j) {
        z[j + 1] = z[j] + h;
        h *= q;
    }
    z[nz] = 0.0;
    return z;
}

void check_jacobians(const Mesh2D& mesh) {
    // Bilinear map; check det at the four corners (extremes for bilinear).
    static const double pts[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        const auto corners = mesh.cell_corners(static_cast<int>(c));
        for (const auto& p : pts) {
            const double xi = p[0], ze = p[1];
            // dN/dxi, dN/dzeta of the Q1 basis
            const double dxi[4] = {-(1 - ze) / 4, (1 - ze) / 4, (1 + ze) / 4, -(1 + ze) / 4};
            const double dze[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
            double j00 = 0, j01 = 0, j10 = 0, j11 = 0;
            for (int a = 0; a < 4; ++a) {
                j00 += dxi[a] * corners[a][0];
                j01 += dze[a] * corners[a][0];
                j10 += dxi[a] * corners[a][1];
                j11 += dze[a] * corners[a][1];
            }
            if (j00 * j11 - j01 * j10 <= 0)
                throw ValidationError("mesh: non-positive cell Jacobian");
        }
    }
}

} // namespace

Mesh2D build_structured_mesh(const GeometryConfig& geom, int nx, int nz,
                             double grading_ratio, MeshBuildInfo* info) {
    geom.validate();
    if (nx < 1 || nz < 1) throw ValidationError("mesh: nx and nz must be >= 1");
    if (grading_ratio <= 0) throw ValidationError("mesh: grading ratio must be positive");

    const int n = snap_nx(geom, nx);
    if (info) {
        info->nx_requested = nx;
        info->nx_used = n;
    }

    Mesh2D mesh;
    mesh.nx = n;
    mesh.nz = nz;
    mesh.domain_length = geom.domain_length;
    mesh.periodic = geom.periodic;

    const double Lx = geom.domain_length;
    mesh.x_lines.resize(n + 1);
    for (int i = 0; i <= n; ++i) mesh.x_lines[i] = Lx * static_cast<double>(i) / n;
    mesh.z_levels_ref = grading_levels(nz, grading_ratio);

    mesh.nodes_ref.reserve((n + 1) * (nz + 1));
    for (int j = 0; j <= nz; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.nodes_ref.push_back({mesh.x_lines[i], mesh.z_levels_ref[j]});
    mesh.nodes = mesh.nodes_ref;
    mesh.is_reference = true;

    mesh.cells.reserve(static_cast<std::size_t>(n) * nz);
    for (int j = 0; j < nz; ++j)
        for (int i = 0; i < n; ++i)
            mesh.cells.push_back({mesh.node_id(i, j), mesh.node_id(i + 1, j),
                                  mesh.node_id(i + 1, j + 1), mesh.node_id(i, j + 1)});

    // Snap span and joints onto exact grid values.
    if (geom.structure_span) {
        const int i0 = grid_index((*geom.structure_span)[0], Lx, n);
        const int i1 = grid_index((*geom.structure_span)[1], Lx, n);
        mesh.structure_span = {{mesh.x_lines[i0], mesh.x_lines[i1]}};
        for (double j : geom.joint_positions)
            mesh.joint_positions.push_back(mesh.x_lines[grid_index(j, Lx, n)]);
    }

    int span_i0 = -1, span_i1 = -1;
    if (mesh.structure_span) {
        span_i0 = grid_index((*mesh.structure_span)[0], Lx, n);
        span_i1 = grid_index((*mesh.structure_span)[1], Lx, n);
    }

    for (int i = 0; i < n; ++i) {
        TopFacet f;
        f.cell = (nz - 1) * n + i;
        f.x0 = mesh.x_lines[i];
        f.x1 = mesh.x_lines[i + 1];
        f.tag = (span_i0 <= i && i < span_i1) ? FacetTag::Structure : FacetTag::FreeSurface;
        mesh.top_facets.push_back(f);
    }
    for (int i = 0; i < n; ++i)
        mesh.bottom_facets.push_back({i, mesh.x_lines[i], mesh.x_lines[i + 1]});

    if (geom.periodic) {
        for (int j = 0; j <= nz; ++j)
            mesh.periodic_node_pairs.push_back({mesh.node_id(0, j), mesh.node_id(n, j)});
    } else {
        for (int j = 0; j < nz; ++j) {
            mesh.inlet_facets.push_back({j * n + 0, 0.0});
            mesh.outlet_facets.push_back({j * n + (n - 1), Lx});
        }
    }

    auto [lam_str, lam_j] = extract_interfaces(mesh);
    mesh.structure_interfaces = std::move(lam_str);
    mesh.joint_interfaces = std::move(lam_j);

    check_jacobians(mesh);
    return mesh;
}

Mesh2D apply_bathymetry(const Mesh2D& mesh, const BathymetryProfile& profile) {
    if (!mesh.is_reference)
        throw ValidationError("apply_bathymetry: mesh must be at reference depth 1");
    profile.validate(mesh.domain_length);

    Mesh2D out = mesh;
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        const double x = out.nodes_ref[i][0];
        const double zh = out.nodes_ref[i][1];
        const double H = profile.depth_at(x);
        if (H <= 0) throw ValidationError("apply_bathymetry: non-positive mapped depth");
        out.nodes[i] = {x, zh * H};
    }
    out.is_reference = false;
    check_jacobians(out);
    return out;
}

std::pair<std::vector<InterfacePoint>, std::vector<InterfacePoint>>
extract_interfaces(const Mesh2D& mesh) {
    std::vector<InterfacePoint> lam_str, lam_j;
    const auto str_ids = mesh.structure_facet_ids();
    const double tol = 1e-9 * mesh.domain_length;

    auto is_joint = [&](double x) {
        for (double j : mesh.joint_positions)
            if (std::abs(x - j) <= tol) return true;
        return false;
    };

    std::vector<double> matched_joints;
    auto classify = [&](double x, int left, int right) {
        InterfacePoint p{x, left, right};
        if (is_joint(x)) {
            lam_j.push_back(p);
            matched_joints.push_back(x);
        } else {
            lam_str.push_back(p);
        }
    };

    for (std::size_t k = 0; k + 1 < str_ids.size(); ++k) {
        const auto& fl = mesh.top_facets[str_ids[k]];
        const auto& fr = mesh.top_facets[str_ids[k + 1]];
        if (std::abs(fl.x1 - fr.x0) > tol) continue; // disjoint runs cannot happen for one span
        classify(fl.x1, static_cast<int>(k), static_cast<int>(k + 1));
    }
    // Periodic wrap: beam covering the whole top closes on itself.
    if (mesh.periodic && !str_ids.empty() &&
        str_ids.size() == mesh.top_facets.size()) {
        classify(mesh.top_facets[str_ids.back()].x1,
                 static_cast<int>(str_ids.size() - 1), 0);
    }

    for (double j : mesh.joint_positions) {
        bool found = false;
        for (double m : matched_joints)
            if (std::abs(m - j) <= tol) { found = true; break; }
        if (!found)
            throw TopologyError("extract_interfaces: joint not shared by two structure facets");
    }
    return {lam_str, lam_j};
}

void write_mesh_vtk(const Mesh2D& mesh, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("write_mesh_vtk: cannot open " + path);
    os << "# vtk DataFile Version 3.0\n";
    os << "structured fluid mesh\n";
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.nodes.size() << " double\n";
    os.precision(17);
    for (const auto& p : mesh.nodes) os << p[0] << " " << p[1] << " 0\n";

    const std::size_t nquads = mesh.cells.size();
    const std::size_t nlines = mesh.top_facets.size();
    os << "CELLS " << (nquads + nlines) << " " << (5 * nquads + 3 * nlines) << "\n";
    for (const auto& q : mesh.cells)
        os << "4 " << q[0] << " " << q[1] << " " << q[2] << " " << q[3] << "\n";
    for (const auto& f : mesh.top_facets) {
        // top edge nodes of the adjacent cell
        const auto& q = mesh.cells[f.cell];
        os << "2 " << q[3] << " " << q[2] << "\n";
    }
    os << "CELL_TYPES " << (nquads + nlines) << "\n";
    for (std::size_t i = 0; i < nquads; ++i) os << "9\n";
    for (std::size_t i = 0; i < nlines; ++i) os << "3\n";
    os << "CELL_DATA " << (nquads + nlines) << "\n";
    os << "SCALARS top_tag int 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < nquads; ++i) os << "-1\n";
    for (const auto& f : mesh.top_facets)
        os << (f.tag == FacetTag::Structure ? 1 : 0) << "\n";
}

} // namespace vlfs
