#include "vlfs/postprocess.hpp"

#include <cmath>

namespace vlfs {

namespace {

struct Jac2 {
    double j00, j01, j10, j11, det;
};

Jac2 jac(const std::array<std::array<double, 2>, 4>& c, double xi, double ze) {
    const double dxi[4] = {-(1 - ze) / 4, (1 - ze) / 4, (1 + ze) / 4, -(1 + ze) / 4};
    const double dze[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
    Jac2 J{0, 0, 0, 0, 0};
    for (int a = 0; a < 4; ++a) {
        J.j00 += dxi[a] * c[a][0];
        J.j01 += dze[a] * c[a][0];
        J.j10 += dxi[a] * c[a][1];
        J.j11 += dze[a] * c[a][1];
    }
    J.det = J.j00 * J.j11 - J.j01 * J.j10;
    return J;
}

std::array<double, 2> map_point(const std::array<std::array<double, 2>, 4>& c,
                                double xi, double ze) {
    const double q[4] = {(1 - xi) * (1 - ze) / 4, (1 + xi) * (1 - ze) / 4,
                         (1 + xi) * (1 + ze) / 4, (1 - xi) * (1 + ze) / 4};
    double x = 0, z = 0;
    for (int a = 0; a < 4; ++a) {
        x += q[a] * c[a][0];
        z += q[a] * c[a][1];
    }
    return {x, z};
}

} // namespace

EnergyBreakdown energy(const Mesh2D& mesh, const FESpace& phi_space,
                       const FESpace& kappa_space, const FESpace& eta_space,
                       const EnergyParams& params, const Eigen::VectorXd& phi,
                       const Eigen::VectorXd& kappa, const Eigen::VectorXd& eta,
                       const Eigen::VectorXd& eta_t) {
    EnergyBreakdown e;
    const int r = phi_space.order;
    const ReferenceElement elem(2, r);
    const int nd = elem.ndofs();
    const auto quad = gauss_quadrature(2, r + 2);
    std::vector<std::vector<std::array<double, 2>>> refgrad(quad.size());
    for (std::size_t q = 0; q < quad.size(); ++q) {
        refgrad[q].resize(nd);
        elem.shape_gradient(quad.points[q][0], quad.points[q][1], refgrad[q]);
    }
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        const auto corners = mesh.cell_corners(static_cast<int>(c));
        const auto& dofs = phi_space.cell_dofs[c];
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const auto J = jac(corners, quad.points[q][0], quad.points[q][1]);
            double gx = 0, gz = 0;
            for (int i = 0; i < nd; ++i) {
                const double rx = refgrad[q][i][0], rz = refgrad[q][i][1];
                const double px = (J.j11 * rx - J.j10 * rz) / J.det;
                const double pz = (-J.j01 * rx + J.j00 * rz) / J.det;
                gx += phi[dofs[i]] * px;
                gz += phi[dofs[i]] * pz;
            }
            e.kin_flow += 0.5 * quad.weights[q] * J.det * (gx * gx + gz * gz);
        }
    }

    auto surface_accumulate = [&](const FESpace& space, const Eigen::VectorXd& coeff,
                                  const Eigen::VectorXd* coeff_t, bool structural) {
        if (space.ndofs == 0) return;
        const Lagrange1D basis(space.order);
        const int ns = basis.size();
        const auto quad1 = gauss_quadrature(1, space.order + 2);
        std::vector<double> N(ns), D2(ns);
        for (std::size_t e1 = 0; e1 < space.cell_dofs.size(); ++e1) {
            const auto& facet = mesh.top_facets[space.facet_of_element[e1]];
            const double h = facet.length();
            double Dr = 0.0;
            if (structural && !params.D_rho_facet.empty()) {
                // structure elements enumerate the structure facets in order
                Dr = params.D_rho_facet[e1];
            }
            for (std::size_t q = 0; q < quad1.size(); ++q) {
                const double xi = quad1.points[q][0];
                const double w = quad1.weights[q] * 0.5 * h;
                basis.eval(xi, N);
                double v = 0, vt = 0;
                for (int i = 0; i < ns; ++i) {
                    v += coeff[space.cell_dofs[e1][i]] * N[i];
                    if (coeff_t) vt += (*coeff_t)[space.cell_dofs[e1][i]] * N[i];
                }
                e.pot_flow += 0.5 * params.g * w * v * v;
                if (structural) {
                    if (coeff_t) e.kin_str += 0.5 * params.d0 * w * vt * vt;
                    basis.eval_second_derivative(xi, D2);
                    double d2 = 0;
                    const double chain = 4.0 / (h * h);
                    for (int i = 0; i < ns; ++i)
                        d2 += coeff[space.cell_dofs[e1][i]] * D2[i] * chain;
                    e.ela_str += 0.5 * Dr * w * d2 * d2;
                }
            }
        }
    };
    surface_accumulate(kappa_space, kappa, nullptr, false);
    surface_accumulate(eta_space, eta, &eta_t, true);

    // joint springs
    if (!mesh.joint_interfaces.empty() && eta_space.ndofs > 0) {
        const Lagrange1D basis(eta_space.order);
        const int ns = basis.size();
        std::vector<double> d1l(ns), d1r(ns);
        basis.eval_derivative(1.0, d1l);
        basis.eval_derivative(-1.0, d1r);
        const auto str_ids = mesh.structure_facet_ids();
        for (std::size_t m = 0; m < mesh.joint_interfaces.size(); ++m) {
            const auto& p = mesh.joint_interfaces[m];
            const int fl = str_ids[p.left_facet], fr = str_ids[p.right_facet];
            const int el = eta_space.element_of_facet[fl];
            const int er = eta_space.element_of_facet[fr];
            const double hl = mesh.top_facets[fl].length();
            const double hr = mesh.top_facets[fr].length();
            double jl = 0, jr = 0;
            for (int i = 0; i < ns; ++i) {
                jl += eta[eta_space.cell_dofs[el][i]] * d1l[i] * (2.0 / hl);
                jr += eta[eta_space.cell_dofs[er][i]] * d1r[i] * (2.0 / hr);
            }
            const double jump = jl - jr;
            const double k_rho = params.joint_k_rho.empty() ? 0.0 : params.joint_k_rho[m];
            e.joint += 0.5 * k_rho * jump * jump;
        }
    }

    e.total = e.kin_flow + e.pot_flow + e.kin_str + e.ela_str + e.joint;
    return e;
}

std::pair<double, double>
l2_errors(const Mesh2D& mesh, const FESpace& phi_space, const FESpace& eta_space,
          const std::function<double(double, double)>& phi_exact,
          const std::function<double(double)>& eta_exact, const Eigen::VectorXd& phi,
          const Eigen::VectorXd& eta) {
    const int r = phi_space.order;
    const ReferenceElement elem(2, r);
    const int nd = elem.ndofs();
    const auto quad = gauss_quadrature(2, r + 2);
    std::vector<std::vector<double>> values(quad.size());
    for (std::size_t q = 0; q < quad.size(); ++q) {
        values[q].resize(nd);
        elem.shape(quad.points[q][0], quad.points[q][1], values[q]);
    }
    double err_phi2 = 0.0;
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        const auto corners = mesh.cell_corners(static_cast<int>(c));
        const auto& dofs = phi_space.cell_dofs[c];
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const auto J = jac(corners, quad.points[q][0], quad.points[q][1]);
            const auto p = map_point(corners, quad.points[q][0], quad.points[q][1]);
            double v = 0;
            for (int i = 0; i < nd; ++i) v += phi[dofs[i]] * values[q][i];
            const double d = v - phi_exact(p[0], p[1]);
            err_phi2 += quad.weights[q] * J.det * d * d;
        }
    }

    double err_eta2 = 0.0;
    if (eta_space.ndofs > 0) {
        const Lagrange1D basis(eta_space.order);
        const int ns = basis.size();
        const auto quad1 = gauss_quadrature(1, eta_space.order + 2);
        std::vector<double> N(ns);
        for (std::size_t e = 0; e < eta_space.cell_dofs.size(); ++e) {
            const auto& facet = mesh.top_facets[eta_space.facet_of_element[e]];
            const double h = facet.length();
            for (std::size_t q = 0; q < quad1.size(); ++q) {
                const double xi = quad1.points[q][0];
                const double x = facet.x0 + 0.5 * (xi + 1.0) * h;
                basis.eval(xi, N);
                double v = 0;
                for (int i = 0; i < ns; ++i) v += eta[eta_space.cell_dofs[e][i]] * N[i];
                const double d = v - eta_exact(x);
                err_eta2 += quad1.weights[q] * 0.5 * h * d * d;
            }
        }
    }
    return {std::sqrt(err_phi2), std::sqrt(err_eta2)};
}

double convergence_slope(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2)
        throw ValidationError("convergence_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [h, err] : pairs) {
        if (h <= 0 || err < 0)
            throw ValidationError("convergence_slope: non-positive input");
        const double lx = std::log(h);
        const double ly = err > 0 ? std::log(err) : std::log(1e-300);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(pairs.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

std::vector<double> envelope(const std::vector<double>& times,
                             const std::vector<Eigen::VectorXd>& gauges, double t_a,
                             double t_b) {
    if (times.size() != gauges.size())
        throw DimensionError("envelope: times/gauges size mismatch");
    std::vector<double> env;
    bool any = false;
    for (std::size_t s = 0; s < times.size(); ++s) {
        if (times[s] < t_a || times[s] > t_b) continue;
        if (!any) {
            env.assign(gauges[s].size(), 0.0);
            any = true;
        }
        for (int i = 0; i < gauges[s].size(); ++i)
            env[i] = std::max(env[i], std::abs(gauges[s][i]));
    }
    if (!any) throw ValidationError("envelope: empty window");
    return env;
}

Eigen::VectorXd interpolate(const FESpace& space,
                            const std::function<double(double, double)>& f) {
    Eigen::VectorXd v(space.ndofs);
    for (int i = 0; i < space.ndofs; ++i)
        v[i] = f(space.dof_coords[i][0], space.dof_coords[i][1]);
    return v;
}

} // namespace vlfs
