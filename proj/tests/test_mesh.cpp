#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "vlfs/mesh.hpp"

using namespace vlfs;

namespace {

GeometryConfig basic_geom(double L, double H) {
    GeometryConfig g;
    g.domain_length = L;
    g.depth_profile = BathymetryProfile::constant(H);
    return g;
}

} // namespace

TEST_CASE("periodic full-beam mesh: 200 cells, all top facets structure") {
    GeometryConfig g = basic_geom(2 * M_PI, 1.0);
    g.structure_span = {{0.0, 2 * M_PI}};
    g.periodic = true;
    auto mesh = build_structured_mesh(g, 20, 10, 1.0);
    CHECK(mesh.cells.size() == 200);
    CHECK(mesh.count_facets(FacetTag::Structure) == 20);
    CHECK(mesh.count_facets(FacetTag::FreeSurface) == 0);
    CHECK(mesh.inlet_facets.empty());
    CHECK(mesh.outlet_facets.empty());
}

TEST_CASE("single cell mesh: 4 boundary facets, top free surface") {
    auto mesh = build_structured_mesh(basic_geom(1.0, 1.0), 1, 1, 1.0);
    CHECK(mesh.cells.size() == 1);
    const int nfacets = mesh.count_facets(FacetTag::Bottom) +
                        mesh.count_facets(FacetTag::Inlet) +
                        mesh.count_facets(FacetTag::Outlet) +
                        static_cast<int>(mesh.top_facets.size());
    CHECK(nfacets == 4);
    CHECK(mesh.top_facets[0].tag == FacetTag::FreeSurface);
}

TEST_CASE("khabakhpasheva-style span and joint land on the grid") {
    // 40 beam facets between 6.25 and 18.75 at nx=80 over Lx=25; the joint at
    // 16.25 must coincide with a vertex
    GeometryConfig g = basic_geom(25.0, 1.1);
    g.structure_span = {{6.25, 18.75}};
    g.joint_positions = {6.25 + 0.8 * 12.5};
    MeshBuildInfo info;
    auto mesh = build_structured_mesh(g, 80, 5, 0.2, &info);
    CHECK(info.nx_used == 80);
    bool joint_on_vertex = false;
    for (double x : mesh.x_lines)
        if (x == 16.25) joint_on_vertex = true;
    CHECK(joint_on_vertex);
    CHECK(mesh.count_facets(FacetTag::Structure) == 40);
    CHECK(mesh.joint_interfaces.size() == 1);
    CHECK(mesh.structure_interfaces.size() == 38); // 39 interior points, one is the joint
}

TEST_CASE("nx snaps upward until breakpoints align") {
    GeometryConfig g = basic_geom(25.0, 1.0);
    g.structure_span = {{6.25, 18.75}};
    g.joint_positions = {16.25};
    MeshBuildInfo info;
    // 16.25/25*n integral requires n % 20 == 0; from 10 the first hit is 20
    auto mesh = build_structured_mesh(g, 10, 2, 1.0, &info);
    CHECK(info.nx_used == 20);
    CHECK(mesh.nx == 20);
}

TEST_CASE("misalignment error when no grid fits") {
    GeometryConfig g = basic_geom(1.0, 1.0);
    g.structure_span = {{0.0, 1.0 / M_PI}}; // irrational fraction of the domain
    CHECK_THROWS_AS(build_structured_mesh(g, 2, 2, 1.0), MisalignmentError);
}

TEST_CASE("invalid dimensions rejected") {
    CHECK_THROWS_AS(build_structured_mesh(basic_geom(1.0, 1.0), 0, 1), ValidationError);
    CHECK_THROWS_AS(build_structured_mesh(basic_geom(1.0, 1.0), 1, 1, -0.5),
                    ValidationError);
    CHECK_THROWS_AS(build_structured_mesh(basic_geom(-1.0, 1.0), 1, 1), ValidationError);
}

TEST_CASE("tag partition: fs + structure = nx") {
    for (double a : {0.0, 0.25, 0.5}) {
        GeometryConfig g = basic_geom(1.0, 1.0);
        if (a > 0) g.structure_span = {{a, 0.75}};
        auto mesh = build_structured_mesh(g, 8, 2);
        CHECK(mesh.count_facets(FacetTag::FreeSurface) +
                  mesh.count_facets(FacetTag::Structure) ==
              mesh.nx);
    }
}

TEST_CASE("constant bathymetry moves the bottom to -H") {
    auto ref = build_structured_mesh(basic_geom(10.0, 1.0), 4, 3);
    auto mesh = apply_bathymetry(ref, BathymetryProfile::constant(60.0));
    for (int i = 0; i <= mesh.nx; ++i) {
        CHECK(mesh.nodes[mesh.node_id(i, 0)][1] == doctest::Approx(-60.0));
        CHECK(mesh.nodes[mesh.node_id(i, mesh.nz)][1] == 0.0);
    }
}

TEST_CASE("ramp bathymetry: Liu profile midpoint depth 45") {
    const double Hl = 60, Hr = 30;
    BathymetryProfile p = BathymetryProfile::ramp(Hl, Hr, 100.0, 200.0);
    CHECK(p.depth_at(150.0) == doctest::Approx(45.0));
    CHECK(p.depth_at(50.0) == doctest::Approx(60.0));
    CHECK(p.depth_at(250.0) == doctest::Approx(30.0));

    GeometryConfig g = basic_geom(300.0, 1.0);
    g.structure_span = {{100.0, 200.0}};
    auto ref = build_structured_mesh(g, 30, 3);
    auto mesh = apply_bathymetry(ref, p);
    // bottom node at the ramp midpoint
    for (int i = 0; i <= mesh.nx; ++i)
        if (mesh.x_lines[i] == 150.0)
            CHECK(mesh.nodes[mesh.node_id(i, 0)][1] == doctest::Approx(-45.0));
}

TEST_CASE("degenerate ramp equals the constant map exactly") {
    auto ref = build_structured_mesh(basic_geom(100.0, 1.0), 10, 4, 0.3);
    auto a = apply_bathymetry(ref, BathymetryProfile::constant(60.0));
    auto b = apply_bathymetry(ref, BathymetryProfile::ramp(60.0, 60.0, 20.0, 80.0));
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        CHECK(a.nodes[i][0] == b.nodes[i][0]);
        CHECK(a.nodes[i][1] == b.nodes[i][1]);
    }
}

TEST_CASE("bathymetry is identity on top and monotone per column") {
    GeometryConfig g = basic_geom(300.0, 1.0);
    g.structure_span = {{100.0, 200.0}};
    auto ref = build_structured_mesh(g, 30, 5, 0.2);
    auto mesh = apply_bathymetry(ref, BathymetryProfile::ramp(60, 30, 100, 200));
    for (int i = 0; i <= mesh.nx; ++i) {
        CHECK(mesh.nodes[mesh.node_id(i, mesh.nz)][1] == 0.0);
        for (int j = 0; j < mesh.nz; ++j)
            CHECK(mesh.nodes[mesh.node_id(i, j)][1] <
                  mesh.nodes[mesh.node_id(i, j + 1)][1]);
    }
}

TEST_CASE("grading ratio 1 gives equal layer heights") {
    auto mesh = build_structured_mesh(basic_geom(1.0, 1.0), 1, 7, 1.0);
    const double h0 = mesh.z_levels_ref[1] - mesh.z_levels_ref[0];
    for (int j = 0; j < 7; ++j)
        CHECK(std::abs((mesh.z_levels_ref[j + 1] - mesh.z_levels_ref[j]) - h0) < 1e-15);
}

TEST_CASE("grading ratio 0.2 gives a geometric progression, thin at the top") {
    auto mesh = build_structured_mesh(basic_geom(1.0, 1.0), 1, 5, 0.2);
    std::vector<double> h;
    for (int j = 0; j < 5; ++j) h.push_back(mesh.z_levels_ref[j + 1] - mesh.z_levels_ref[j]);
    CHECK(h.back() / h.front() == doctest::Approx(0.2).epsilon(1e-12));
    const double q = h[1] / h[0];
    for (int j = 1; j < 5; ++j) CHECK(h[j] / h[j - 1] == doctest::Approx(q).epsilon(1e-12));
    CHECK(h.back() < h.front());
    CHECK(mesh.z_levels_ref.front() == -1.0);
    CHECK(mesh.z_levels_ref.back() == 0.0);
}

TEST_CASE("periodic pairing covers exactly the side boundary nodes") {
    GeometryConfig g = basic_geom(2 * M_PI, 1.0);
    g.periodic = true;
    auto mesh = build_structured_mesh(g, 6, 4);
    CHECK(mesh.periodic_node_pairs.size() == 5); // nz+1 rows
    std::set<int> left, right;
    for (auto [l, r] : mesh.periodic_node_pairs) {
        CHECK(mesh.nodes[l][0] == 0.0);
        CHECK(mesh.nodes[r][0] == doctest::Approx(2 * M_PI));
        CHECK(mesh.nodes[l][1] == mesh.nodes[r][1]);
        left.insert(l);
        right.insert(r);
    }
    CHECK(left.size() == 5);
    CHECK(right.size() == 5);
}

TEST_CASE("interface extraction counts") {
    // 20 structure facets in a line, no joints -> 19 interior points
    GeometryConfig g = basic_geom(40.0, 1.0);
    g.structure_span = {{10.0, 30.0}};
    auto mesh = build_structured_mesh(g, 40, 2);
    auto [lam_str, lam_j] = extract_interfaces(mesh);
    CHECK(lam_str.size() == 19);
    CHECK(lam_j.size() == 0);

    // two facets with a joint at the shared vertex
    GeometryConfig g2 = basic_geom(4.0, 1.0);
    g2.structure_span = {{1.0, 3.0}};
    g2.joint_positions = {2.0};
    auto mesh2 = build_structured_mesh(g2, 4, 1);
    auto [s2, j2] = extract_interfaces(mesh2);
    CHECK(s2.size() == 0);
    CHECK(j2.size() == 1);
    CHECK(j2[0].x == doctest::Approx(2.0));

    // no structure span: both lists empty
    auto mesh3 = build_structured_mesh(basic_geom(1.0, 1.0), 4, 1);
    auto [s3, j3] = extract_interfaces(mesh3);
    CHECK(s3.empty());
    CHECK(j3.empty());

    // periodic full-top beam: the wrap point is an interface too
    GeometryConfig g4 = basic_geom(2 * M_PI, 1.0);
    g4.structure_span = {{0.0, 2 * M_PI}};
    g4.periodic = true;
    auto mesh4 = build_structured_mesh(g4, 20, 2);
    auto [s4, j4] = extract_interfaces(mesh4);
    CHECK(s4.size() == 20);
    CHECK(j4.empty());
}

TEST_CASE("interface normals and neighbors are recorded") {
    GeometryConfig g = basic_geom(4.0, 1.0);
    g.structure_span = {{0.0, 4.0}};
    auto mesh = build_structured_mesh(g, 4, 1);
    auto [lam_str, lam_j] = extract_interfaces(mesh);
    REQUIRE(lam_str.size() == 3);
    for (std::size_t i = 0; i < lam_str.size(); ++i) {
        CHECK(lam_str[i].left_facet == static_cast<int>(i));
        CHECK(lam_str[i].right_facet == static_cast<int>(i) + 1);
        CHECK(lam_str[i].x == doctest::Approx(1.0 + i));
    }
}

TEST_CASE("mesh vtk dump writes a parsable file") {
    auto mesh = build_structured_mesh(basic_geom(1.0, 1.0), 2, 2);
    const std::string path = "mesh_dump_test.vtk";
    write_mesh_vtk(mesh, path);
    std::ifstream is(path);
    REQUIRE(is.good());
    std::string line;
    std::getline(is, line);
    CHECK(line == "# vtk DataFile Version 3.0");
    std::remove(path.c_str());
}
