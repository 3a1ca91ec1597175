#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "vlfs/errors.hpp"

namespace vlfs {

enum class FacetTag { Bottom, Inlet, Outlet, FreeSurface, Structure };

/// Water depth as a function of x. The ramp variant is H_l left of the
/// ramp interval, H_r right of it, and linear in between.
struct BathymetryProfile {
    enum class Kind { Constant, Ramp };
    Kind kind = Kind::Constant;
    double depth = 1.0;      // Constant
    double depth_left = 1.0; // Ramp
    double depth_right = 1.0;
    double ramp_from = 0.0;
    double ramp_to = 0.0;

    static BathymetryProfile constant(double H) {
        BathymetryProfile p;
        p.kind = Kind::Constant;
        p.depth = H;
        return p;
    }
    static BathymetryProfile ramp(double Hl, double Hr, double from, double to) {
        BathymetryProfile p;
        p.kind = Kind::Ramp;
        p.depth_left = Hl;
        p.depth_right = Hr;
        p.ramp_from = from;
        p.ramp_to = to;
        return p;
    }

    double depth_at(double x) const;
    /// Depth seen by the incident wave at the inlet boundary.
    double inlet_depth() const {
        return kind == Kind::Constant ? depth : depth_left;
    }
    void validate(double domain_length) const;
};

/// Declarative description of the fluid rectangle and its tagged parts.
struct GeometryConfig {
    double domain_length = 1.0; // Lx
    BathymetryProfile depth_profile;
    /// Beam footprint [x_bl, x_br] on the top boundary; absent = all free surface.
    std::optional<std::array<double, 2>> structure_span;
    double damping_length_inlet = 0.0;
    double damping_length_outlet = 0.0;
    /// Joint x-coordinates, strictly increasing, strictly inside the span.
    std::vector<double> joint_positions;
    bool periodic = false;

    void validate() const;
};

struct TopFacet {
    int cell = -1; // adjacent top-row cell
    double x0 = 0, x1 = 0;
    FacetTag tag = FacetTag::FreeSurface;
    double length() const { return x1 - x0; }
};

struct SideFacet {
    int cell = -1;
    double x = 0; // boundary x-coordinate
};

struct BottomFacet {
    int cell = -1;
    double x0 = 0, x1 = 0;
};

/// Point between two adjacent structure facets. Normals are +x from the
/// left facet and -x from the right one, so [q.n] = q_left - q_right.
struct InterfacePoint {
    double x = 0;
    int left_facet = -1;  // index into structure facet id list
    int right_facet = -1;
};

struct Mesh2D {
    int nx = 0, nz = 0;
    double domain_length = 0;
    bool periodic = false;
    std::vector<double> x_lines;      // nx+1 grid abscissae
    std::vector<double> z_levels_ref; // nz+1 reference levels in [-1, 0]

    /// Node (x,z) after bathymetry mapping; row-major, id = iz*(nx+1)+ix.
    std::vector<std::array<double, 2>> nodes;
    /// Reference-depth coordinates (z in [-1,0]).
    std::vector<std::array<double, 2>> nodes_ref;
    bool is_reference = true;

    /// Quads, CCW corners (i,j),(i+1,j),(i+1,j+1),(i,j+1); cell id = j*nx+i.
    std::vector<std::array<int, 4>> cells;

    std::vector<TopFacet> top_facets; // nx facets left to right
    std::vector<SideFacet> inlet_facets;
    std::vector<SideFacet> outlet_facets;
    std::vector<BottomFacet> bottom_facets;
    std::vector<std::array<int, 2>> periodic_node_pairs; // (left, right)

    std::optional<std::array<double, 2>> structure_span; // snapped to grid
    std::vector<double> joint_positions;                 // snapped to grid

    std::vector<InterfacePoint> structure_interfaces; // Lambda_str
    std::vector<InterfacePoint> joint_interfaces;     // Lambda_j

    int node_id(int ix, int iz) const { return iz * (nx + 1) + ix; }
    std::array<std::array<double, 2>, 4> cell_corners(int c) const;
    std::vector<int> structure_facet_ids() const;
    std::vector<int> free_surface_facet_ids() const;
    int count_facets(FacetTag tag) const;
};

struct MeshBuildInfo {
    int nx_requested = 0;
    int nx_used = 0;
};

/// Builds the tagged structured mesh at reference depth 1 (z in [-1,0]).
/// Vertical layer heights follow a geometric progression with
/// grading_ratio = h_top / h_bottom (1 = uniform). nx is snapped upward to
/// the smallest count that puts the structure endpoints and joints on grid
/// lines; a MisalignmentError is thrown if no such count exists within 32*nx.
Mesh2D build_structured_mesh(const GeometryConfig& geom, int nx, int nz,
                             double grading_ratio = 1.0,
                             MeshBuildInfo* info = nullptr);

/// Maps node (x, z_hat) to (x, z_hat * H(x)); identity on the top boundary.
Mesh2D apply_bathymetry(const Mesh2D& mesh, const BathymetryProfile& profile);

/// Recomputes (Lambda_str, Lambda_j) from the facet tags and joints.
std::pair<std::vector<InterfacePoint>, std::vector<InterfacePoint>>
extract_interfaces(const Mesh2D& mesh);

/// Legacy ASCII VTK dump (unstructured grid + tagged boundary lines).
void write_mesh_vtk(const Mesh2D& mesh, const std::string& path);

} // namespace vlfs
