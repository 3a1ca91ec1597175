#pragma once

#include <array>
#include <span>
#include <vector>

#include "vlfs/errors.hpp"
#include "vlfs/mesh.hpp"

namespace vlfs {

/// Equispaced Lagrange basis on [-1,1] with analytic derivatives up to
/// second order (the 1/h chain-rule factors are applied by the callers).
class Lagrange1D {
public:
    explicit Lagrange1D(int order);

    int order() const { return order_; }
    int size() const { return order_ + 1; }
    const std::vector<double>& nodes() const { return nodes_; }

    void eval(double xi, std::span<double> values) const;
    void eval_derivative(double xi, std::span<double> derivs) const;
    void eval_second_derivative(double xi, std::span<double> derivs) const;

private:
    int order_;
    std::vector<double> nodes_;
};

/// Tensor-product Lagrange reference element in d = 1 or 2.
///
/// 2D local numbering is lexicographic: dof = a + (r+1)*b where a indexes
/// the xi direction and b the zeta direction.
class ReferenceElement {
public:
    ReferenceElement(int dim, int order);

    int dim() const { return dim_; }
    int order() const { return order_; }
    int ndofs() const { return dim_ == 1 ? order_ + 1 : (order_ + 1) * (order_ + 1); }
    const Lagrange1D& basis1d() const { return basis_; }

    /// 2D shape values at (xi, zeta).
    void shape(double xi, double zeta, std::span<double> values) const;
    /// 2D reference gradients (d/dxi, d/dzeta).
    void shape_gradient(double xi, double zeta,
                        std::span<std::array<double, 2>> grads) const;

private:
    int dim_;
    int order_;
    Lagrange1D basis_;
};

ReferenceElement lagrange_reference_element(int dim, int order);

/// Tensor-product Gauss-Legendre rule; exact for per-axis degree 2n-1.
struct QuadratureRule {
    int dim = 1;
    std::vector<std::array<double, 2>> points; // (xi, zeta); zeta unused for d=1
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// 1D Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration
/// on the Legendre recurrence.
void gauss_legendre_1d(int npts, std::vector<double>& points,
                       std::vector<double>& weights);

QuadratureRule gauss_quadrature(int dim, int npts_per_axis);

enum class FieldDomain { Volume, FreeSurface, Structure };

/// Conforming Lagrange space on the structured mesh.
///
/// Volume spaces use a global (r*nx[+1]) x (r*nz+1) lattice with periodic
/// collapse in x. Surface spaces live on the tagged top facets, one 1D
/// element per facet, with shared endpoint dofs merged (including across a
/// periodic wrap).
struct FESpace {
    FieldDomain domain = FieldDomain::Volume;
    int order = 1;
    int ndofs = 0;
    /// Global dofs per cell (volume) or per surface element.
    std::vector<std::vector<int>> cell_dofs;
    /// Surface spaces: top-facet index of each surface element.
    std::vector<int> facet_of_element;
    /// Surface spaces: surface element index per top facet (-1 when absent).
    std::vector<int> element_of_facet;
    /// Physical coordinates of each dof node (periodic dofs take the x=0 side).
    std::vector<std::array<double, 2>> dof_coords;

    int ndofs_per_cell() const {
        return domain == FieldDomain::Volume ? (order + 1) * (order + 1) : order + 1;
    }
};

FESpace build_fespace(const Mesh2D& mesh, FieldDomain domain, int order);

/// Volume-boundary-to-surface dof relation on the top boundary.
struct TraceMap {
    /// True when orders match and dofs are identified one-to-one.
    bool identified = false;
    /// identified: surface dof -> volume dof.
    std::vector<int> surface_to_volume;
};

/// For equal orders returns the dof bijection on the shared facets; for
/// surface order > volume order the spaces are compatible but couple only
/// through integrals. Surface order below the volume trace is rejected.
TraceMap trace_injection(const Mesh2D& mesh, const FESpace& volume,
                         const FESpace& surface);

} // namespace vlfs
