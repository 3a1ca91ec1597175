#include "vlfs/fe.hpp"

#include <algorithm>
#include <cmath>

namespace vlfs {

Lagrange1D::Lagrange1D(int order) : order_(order) {
    if (order < 1) throw ValidationError("Lagrange1D: order must be >= 1");
    nodes_.resize(order + 1);
    for (int i = 0; i <= order; ++i)
        nodes_[i] = -1.0 + 2.0 * static_cast<double>(i) / order;
}

void Lagrange1D::eval(double xi, std::span<double> values) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double v = 1.0;
        for (int j = 0; j < n; ++j)
            if (j != i) v *= (xi - nodes_[j]) / (nodes_[i] - nodes_[j]);
        values[i] = v;
    }
}

void Lagrange1D::eval_derivative(double xi, std::span<double> derivs) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            if (k == i) continue;
            double prod = 1.0 / (nodes_[i] - nodes_[k]);
            for (int j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                prod *= (xi - nodes_[j]) / (nodes_[i] - nodes_[j]);
            }
            sum += prod;
        }
        derivs[i] = sum;
    }
}

void Lagrange1D::eval_second_derivative(double xi, std::span<double> derivs) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            if (k == i) continue;
            for (int l = 0; l < n; ++l) {
                if (l == i || l == k) continue;
                double prod = 1.0 / ((nodes_[i] - nodes_[k]) * (nodes_[i] - nodes_[l]));
                for (int j = 0; j < n; ++j) {
                    if (j == i || j == k || j == l) continue;
                    prod *= (xi - nodes_[j]) / (nodes_[i] - nodes_[j]);
                }
                sum += prod;
            }
        }
        derivs[i] = sum;
    }
}

ReferenceElement::ReferenceElement(int dim, int order)
    : dim_(dim), order_(order), basis_(order) {
    if (dim != 1 && dim != 2)
        throw ValidationError("ReferenceElement: dimension must be 1 or 2");
}

void ReferenceElement::shape(double xi, double zeta, std::span<double> values) const {
    const int n1 = order_ + 1;
    std::vector<double> nx(n1), nz(n1);
    basis_.eval(xi, nx);
    if (dim_ == 1) {
        std::copy(nx.begin(), nx.end(), values.begin());
        return;
    }
    basis_.eval(zeta, nz);
    for (int b = 0; b < n1; ++b)
        for (int a = 0; a < n1; ++a)
            values[a + n1 * b] = nx[a] * nz[b];
}

void ReferenceElement::shape_gradient(double xi, double zeta,
                                      std::span<std::array<double, 2>> grads) const {
    const int n1 = order_ + 1;
    std::vector<double> nx(n1), nz(n1), dx(n1), dz(n1);
    basis_.eval(xi, nx);
    basis_.eval_derivative(xi, dx);
    if (dim_ == 1) {
        for (int a = 0; a < n1; ++a) grads[a] = {dx[a], 0.0};
        return;
    }
    basis_.eval(zeta, nz);
    basis_.eval_derivative(zeta, dz);
    for (int b = 0; b < n1; ++b)
        for (int a = 0; a < n1; ++a)
            grads[a + n1 * b] = {dx[a] * nz[b], nx[a] * dz[b]};
}

ReferenceElement lagrange_reference_element(int dim, int order) {
    return ReferenceElement(dim, order);
}

void gauss_legendre_1d(int npts, std::vector<double>& points,
                       std::vector<double>& weights) {
    if (npts < 1) throw ValidationError("gauss_legendre_1d: npts must be >= 1");
    points.assign(npts, 0.0);
    weights.assign(npts, 0.0);
    const int m = (npts + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < npts; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = npts * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        points[i] = -x;
        points[npts - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[npts - 1 - i] = w;
    }
    if (npts % 2 == 1) points[npts / 2] = 0.0;
}

QuadratureRule gauss_quadrature(int dim, int npts_per_axis) {
    if (dim != 1 && dim != 2)
        throw ValidationError("gauss_quadrature: dimension must be 1 or 2");
    std::vector<double> x, w;
    gauss_legendre_1d(npts_per_axis, x, w);
    QuadratureRule rule;
    rule.dim = dim;
    if (dim == 1) {
        for (int i = 0; i < npts_per_axis; ++i) {
            rule.points.push_back({x[i], 0.0});
            rule.weights.push_back(w[i]);
        }
    } else {
        for (int b = 0; b < npts_per_axis; ++b)
            for (int a = 0; a < npts_per_axis; ++a) {
                rule.points.push_back({x[a], x[b]});
                rule.weights.push_back(w[a] * w[b]);
            }
    }
    return rule;
}

namespace {

/// Builds the volume lattice space: dofs on the (r*nx[+1]) x (r*nz+1) grid.
FESpace build_volume_space(const Mesh2D& mesh, int r) {
    FESpace sp;
    sp.domain = FieldDomain::Volume;
    sp.order = r;
    const int nx = mesh.nx, nz = mesh.nz;
    const int NX = mesh.periodic ? r * nx : r * nx + 1;
    const int NZ = r * nz + 1;
    sp.ndofs = NX * NZ;
    sp.cell_dofs.resize(static_cast<std::size_t>(nx) * nz);
    sp.dof_coords.assign(sp.ndofs, {0.0, 0.0});

    const Lagrange1D basis(r);
    const auto& ref_nodes = basis.nodes();

    for (int j = 0; j < nz; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int c = j * nx + i;
            auto& dofs = sp.cell_dofs[c];
            dofs.resize((r + 1) * (r + 1));
            const auto corners = mesh.cell_corners(c);
            for (int b = 0; b <= r; ++b) {
                for (int a = 0; a <= r; ++a) {
                    int ix = r * i + a;
                    if (mesh.periodic) ix %= r * nx;
                    const int iz = r * j + b;
                    const int dof = iz * NX + ix;
                    dofs[a + (r + 1) * b] = dof;
                    // bilinear geometry map of the reference lattice point
                    const double xi = ref_nodes[a], ze = ref_nodes[b];
                    const double q1[4] = {(1 - xi) * (1 - ze) / 4, (1 + xi) * (1 - ze) / 4,
                                          (1 + xi) * (1 + ze) / 4, (1 - xi) * (1 + ze) / 4};
                    double px = 0, pz = 0;
                    for (int k = 0; k < 4; ++k) {
                        px += q1[k] * corners[k][0];
                        pz += q1[k] * corners[k][1];
                    }
                    // periodic dofs keep the x=0 side coordinate
                    if (!(mesh.periodic && r * i + a == r * nx))
                        sp.dof_coords[dof] = {px, pz};
                }
            }
        }
    }
    return sp;
}

/// Surface space on the facets carrying `tag`, with endpoint dofs shared
/// between contiguous facets and across a periodic wrap.
FESpace build_surface_space(const Mesh2D& mesh, FieldDomain domain, int r) {
    const FacetTag tag =
        domain == FieldDomain::Structure ? FacetTag::Structure : FacetTag::FreeSurface;
    if (domain == FieldDomain::Structure && r < 2)
        throw ValidationError("build_fespace: structure trace requires order >= 2");

    FESpace sp;
    sp.domain = domain;
    sp.order = r;
    sp.element_of_facet.assign(mesh.top_facets.size(), -1);

    std::vector<int> facets;
    for (int i = 0; i < static_cast<int>(mesh.top_facets.size()); ++i)
        if (mesh.top_facets[i].tag == tag) facets.push_back(i);

    const double tol = 1e-9 * std::max(mesh.domain_length, 1.0);
    const bool wraps = mesh.periodic && !facets.empty() &&
                       facets.front() == 0 &&
                       facets.back() == static_cast<int>(mesh.top_facets.size()) - 1;

    int next = 0;
    for (std::size_t e = 0; e < facets.size(); ++e) {
        const int f = facets[e];
        sp.facet_of_element.push_back(f);
        sp.element_of_facet[f] = static_cast<int>(e);
        auto& dofs = sp.cell_dofs.emplace_back(r + 1);
        const bool continues_prev =
            e > 0 && std::abs(mesh.top_facets[facets[e - 1]].x1 - mesh.top_facets[f].x0) <= tol;
        for (int a = 0; a <= r; ++a) {
            if (a == 0 && continues_prev) {
                dofs[0] = sp.cell_dofs[e - 1][r];
            } else {
                dofs[a] = next++;
            }
        }
    }
    // periodic wrap: the top runs through x=0 = x=Lx; if both end facets carry
    // the tag the last endpoint dof is the first facet's first dof
    if (wraps && facets.size() >= 1) {
        auto& last = sp.cell_dofs.back();
        if (facets.size() == mesh.top_facets.size() ||
        // two runs meeting across the boundary: last facet ends at Lx, first begins at 0
            (std::abs(mesh.top_facets[facets.back()].x1 - mesh.domain_length) <= tol &&
             std::abs(mesh.top_facets[facets.front()].x0 - 0.0) <= tol)) {
            const int merged = last[r];
            last[r] = sp.cell_dofs.front()[0];
            // renumber: dof `merged` was the last allocated
            if (merged == next - 1) --next;
        }
    }
    sp.ndofs = next;

    // dof coordinates (wrapped dofs keep the x of their first assignment)
    sp.dof_coords.assign(sp.ndofs, {0.0, 0.0});
    std::vector<char> seen(sp.ndofs, 0);
    const Lagrange1D basis(r);
    for (std::size_t e = 0; e < facets.size(); ++e) {
        const auto& f = mesh.top_facets[facets[e]];
        for (int a = 0; a <= r; ++a) {
            const int dof = sp.cell_dofs[e][a];
            if (seen[dof]) continue;
            seen[dof] = 1;
            const double x = f.x0 + 0.5 * (basis.nodes()[a] + 1.0) * (f.x1 - f.x0);
            sp.dof_coords[dof] = {x, 0.0};
        }
    }
    return sp;
}

} // namespace

FESpace build_fespace(const Mesh2D& mesh, FieldDomain domain, int order) {
    if (order < 1) throw ValidationError("build_fespace: order must be >= 1");
    if (domain == FieldDomain::Volume) return build_volume_space(mesh, order);
    return build_surface_space(mesh, domain, order);
}

TraceMap trace_injection(const Mesh2D& mesh, const FESpace& volume,
                         const FESpace& surface) {
    if (volume.domain != FieldDomain::Volume || surface.domain == FieldDomain::Volume)
        throw ValidationError("trace_injection: expects (volume, surface) spaces");
    if (surface.order < volume.order)
        throw ValidationError(
            "trace_injection: surface order below the volume trace is incompatible");

    TraceMap map;
    if (surface.order != volume.order) {
        map.identified = false; // mixed orders couple through quadrature
        return map;
    }

    map.identified = true;
    map.surface_to_volume.assign(surface.ndofs, -1);
    const int r = volume.order;
    for (std::size_t e = 0; e < surface.cell_dofs.size(); ++e) {
        const int facet = surface.facet_of_element[e];
        const int cell = mesh.top_facets[facet].cell;
        const auto& vdofs = volume.cell_dofs[cell];
        for (int a = 0; a <= r; ++a) {
            // top edge of the volume cell: b = r
            map.surface_to_volume[surface.cell_dofs[e][a]] = vdofs[a + (r + 1) * r];
        }
    }
    return map;
}

} // namespace vlfs
