#include "vlfs/assembly.hpp"

#include <Eigen/Dense>

namespace vlfs {

double compute_alpha_f_time(double beta, double g, double delta_t) {
    if (!(beta > 0.0 && beta < 1.0))
        throw ValidationError("alpha_f: beta must lie in (0,1)");
    if (delta_t <= 0) throw ValidationError("alpha_f: delta_t must be positive");
    return (1.0 - beta) * delta_t / (beta * g);
}

std::complex<double> compute_alpha_f_frequency(double beta, double g, double omega) {
    if (!(beta > 0.0 && beta < 1.0))
        throw ValidationError("alpha_f: beta must lie in (0,1)");
    if (omega <= 0) throw ValidationError("alpha_f: omega must be positive");
    return std::complex<double>(0.0, -omega / g) * ((1.0 - beta) / beta);
}

namespace {

using cxd = std::complex<double>;

struct Jacobian {
    double j[2][2];  // d(x,z)/d(xi,zeta)
    double det;
    // inverse transpose applied to a reference gradient
    std::array<double, 2> push_gradient(const std::array<double, 2>& g) const {
        const double inv[2][2] = {{j[1][1] / det, -j[1][0] / det},
                                  {-j[0][1] / det, j[0][0] / det}};
        return {inv[0][0] * g[0] + inv[0][1] * g[1],
                inv[1][0] * g[0] + inv[1][1] * g[1]};
    }
};

Jacobian bilinear_jacobian(const std::array<std::array<double, 2>, 4>& c, double xi,
                           double ze) {
    const double dxi[4] = {-(1 - ze) / 4, (1 - ze) / 4, (1 + ze) / 4, -(1 + ze) / 4};
    const double dze[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
    Jacobian J{};
    for (int a = 0; a < 4; ++a) {
        J.j[0][0] += dxi[a] * c[a][0];
        J.j[0][1] += dze[a] * c[a][0];
        J.j[1][0] += dxi[a] * c[a][1];
        J.j[1][1] += dze[a] * c[a][1];
    }
    J.det = J.j[0][0] * J.j[1][1] - J.j[0][1] * J.j[1][0];
    return J;
}

/// Per-quadrature-point tables of the volume basis on the top edge
/// (zeta = +1) and of a 1D surface basis.
struct TopFacetTables {
    QuadratureRule quad; // 1D
    std::vector<std::vector<double>> vol_values;                 // [q][i]
    std::vector<std::vector<std::array<double, 2>>> vol_refgrad; // [q][i]
    std::vector<std::vector<double>> srf_values;                 // [q][i]
    std::vector<std::vector<double>> srf_d1;                     // [q][i] d/dxi
    std::vector<std::vector<double>> srf_d2;                     // [q][i] d2/dxi2
};

TopFacetTables make_top_tables(const ReferenceElement& vol, const Lagrange1D& srf,
                               int npts) {
    TopFacetTables t;
    t.quad = gauss_quadrature(1, npts);
    const int nv = vol.ndofs();
    const int ns = srf.size();
    for (std::size_t q = 0; q < t.quad.size(); ++q) {
        const double xi = t.quad.points[q][0];
        auto& vv = t.vol_values.emplace_back(nv);
        auto& vg = t.vol_refgrad.emplace_back(nv);
        vol.shape(xi, 1.0, vv);
        vol.shape_gradient(xi, 1.0, vg);
        auto& sv = t.srf_values.emplace_back(ns);
        auto& s1 = t.srf_d1.emplace_back(ns);
        auto& s2 = t.srf_d2.emplace_back(ns);
        srf.eval(xi, sv);
        srf.eval_derivative(xi, s1);
        srf.eval_second_derivative(xi, s2);
    }
    return t;
}

template <class Scalar>
class SystemAssembler {
public:
    SystemAssembler(const Mesh2D& mesh, const FESpace& phi, const FESpace& kappa,
                    const FESpace& eta, const OperatorSpec<Scalar>& spec,
                    const AssemblyOptions& opt)
        : mesh_(mesh), phi_(phi), kappa_(kappa), eta_(eta), spec_(spec), opt_(opt),
          vol_elem_(2, phi.order),
          srf_elem_(std::max(kappa.ndofs > 0 ? kappa.order : 2,
                             eta.ndofs > 0 ? eta.order : 2)) {
        if (kappa.ndofs > 0 && eta.ndofs > 0 && kappa.order != eta.order)
            throw ValidationError("assembly: kappa and eta spaces must share one order");
        layout_.n_phi = phi.ndofs;
        layout_.n_kappa = kappa.ndofs;
        layout_.n_eta = eta.ndofs;
    }

    AssembledSystem<Scalar> run() {
        AssembledSystem<Scalar> out;
        out.layout = layout_;
        rhs_ = Eigen::VectorXcd::Zero(layout_.total());

        if (opt_.laplacian) assemble_laplacian();
        assemble_top_boundary();
        assemble_interfaces();
        assemble_inlet();

        out.A.resize(layout_.total(), layout_.total());
        out.A.setFromTriplets(trip_.begin(), trip_.end());
        out.rhs_amplitude = rhs_;
        out.M_dt.resize(layout_.total(), layout_.total());
        out.M_dt.setFromTriplets(trip_dt_.begin(), trip_dt_.end());
        out.M_dtt.resize(layout_.total(), layout_.total());
        out.M_dtt.setFromTriplets(trip_dtt_.begin(), trip_dtt_.end());
        return out;
    }

private:
    const Mesh2D& mesh_;
    const FESpace& phi_;
    const FESpace& kappa_;
    const FESpace& eta_;
    const OperatorSpec<Scalar>& spec_;
    const AssemblyOptions& opt_;
    ReferenceElement vol_elem_;
    Lagrange1D srf_elem_; // shared order for kappa/eta (validated by scenarios)
    FieldLayout layout_;

    std::vector<Eigen::Triplet<Scalar>> trip_;
    std::vector<Eigen::Triplet<double>> trip_dt_, trip_dtt_;
    Eigen::VectorXcd rhs_;

    void add(int row, int col, Scalar v) { trip_.emplace_back(row, col, v); }
    void add_dt(int row, int col, double v) { trip_dt_.emplace_back(row, col, v); }
    void add_dtt(int row, int col, double v) { trip_dtt_.emplace_back(row, col, v); }

    static double real_part(Scalar v) {
        if constexpr (std::is_same_v<Scalar, double>)
            return v;
        else
            return v.real();
    }

    void assemble_laplacian() {
        const int nd = vol_elem_.ndofs();
        const auto quad = gauss_quadrature(2, phi_.order + 1);
        // reference tables
        std::vector<std::vector<std::array<double, 2>>> refgrad(quad.size());
        for (std::size_t q = 0; q < quad.size(); ++q) {
            refgrad[q].resize(nd);
            vol_elem_.shape_gradient(quad.points[q][0], quad.points[q][1], refgrad[q]);
        }
        std::vector<double> ke(static_cast<std::size_t>(nd) * nd);
        std::vector<std::array<double, 2>> grads(nd);
        for (std::size_t c = 0; c < mesh_.cells.size(); ++c) {
            std::fill(ke.begin(), ke.end(), 0.0);
            const auto corners = mesh_.cell_corners(static_cast<int>(c));
            for (std::size_t q = 0; q < quad.size(); ++q) {
                const auto J =
                    bilinear_jacobian(corners, quad.points[q][0], quad.points[q][1]);
                const double w = quad.weights[q] * J.det;
                for (int i = 0; i < nd; ++i) grads[i] = J.push_gradient(refgrad[q][i]);
                for (int i = 0; i < nd; ++i)
                    for (int j = 0; j < nd; ++j)
                        ke[i * nd + j] +=
                            w * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
            }
            const auto& dofs = phi_.cell_dofs[c];
            for (int i = 0; i < nd; ++i)
                for (int j = 0; j < nd; ++j)
                    add(dofs[i], dofs[j], Scalar(ke[i * nd + j]));
        }
    }

    void assemble_top_boundary() {
        const int srf_order = srf_elem_.order();
        const int npts = std::max(phi_.order, srf_order) + 2;
        const auto tables = make_top_tables(vol_elem_, srf_elem_, npts);
        const int nv = vol_elem_.ndofs();
        const int ns = srf_elem_.size();

        const Scalar dt = spec_.mode.dt;
        const Scalar dtt = spec_.mode.dtt;
        const Scalar af = spec_.alpha_f;
        const double beta = spec_.beta;
        const double g = spec_.g;
        const bool damping_on =
            opt_.damping && spec_.damping != nullptr && spec_.damping->active();

        std::vector<int> str_facet_pos(mesh_.top_facets.size(), -1);
        {
            const auto ids = mesh_.structure_facet_ids();
            for (std::size_t k = 0; k < ids.size(); ++k) str_facet_pos[ids[k]] = (int)k;
        }

        for (std::size_t f = 0; f < mesh_.top_facets.size(); ++f) {
            const auto& facet = mesh_.top_facets[f];
            const bool is_str = facet.tag == FacetTag::Structure;
            if (is_str && !opt_.structure_coupling && !opt_.bending) continue;
            if (!is_str && !opt_.free_surface && !damping_on) continue;

            const FESpace& srf_space = is_str ? eta_ : kappa_;
            if (srf_space.element_of_facet.empty()) continue;
            const int elem = srf_space.element_of_facet[f];
            if (elem < 0) continue;
            const auto& sdofs = srf_space.cell_dofs[elem];
            const auto& vdofs = phi_.cell_dofs[facet.cell];
            const int soff = is_str ? layout_.off_eta() : layout_.off_kappa();
            const double h = facet.length();
            const auto corners = mesh_.cell_corners(facet.cell);

            // local blocks
            Eigen::MatrixXd m_vv = Eigen::MatrixXd::Zero(nv, nv); // trace x trace
            Eigen::MatrixXd m_vs = Eigen::MatrixXd::Zero(nv, ns); // rows w, cols surface
            Eigen::MatrixXd m_sv = Eigen::MatrixXd::Zero(ns, nv);
            Eigen::MatrixXd m_ss = Eigen::MatrixXd::Zero(ns, ns);
            Eigen::MatrixXd bend = Eigen::MatrixXd::Zero(ns, ns);
            Eigen::MatrixXd mu2_vs = Eigen::MatrixXd::Zero(nv, ns);
            Eigen::MatrixXd mu1_dz_v = Eigen::MatrixXd::Zero(nv, nv); // rows w, cols phi
            Eigen::MatrixXd mu1_dz_s = Eigen::MatrixXd::Zero(ns, nv); // rows v, cols phi
            Eigen::VectorXcd rhs_v = Eigen::VectorXcd::Zero(nv);
            Eigen::VectorXcd rhs_s = Eigen::VectorXcd::Zero(ns);

            for (std::size_t q = 0; q < tables.quad.size(); ++q) {
                const double xi = tables.quad.points[q][0];
                const double x = facet.x0 + 0.5 * (xi + 1.0) * h;
                const double w = tables.quad.weights[q] * 0.5 * h;
                const auto& Nv = tables.vol_values[q];
                const auto& Ns = tables.srf_values[q];

                for (int i = 0; i < nv; ++i)
                    for (int j = 0; j < nv; ++j) m_vv(i, j) += w * Nv[i] * Nv[j];
                for (int i = 0; i < nv; ++i)
                    for (int j = 0; j < ns; ++j) m_vs(i, j) += w * Nv[i] * Ns[j];
                for (int i = 0; i < ns; ++i)
                    for (int j = 0; j < nv; ++j) m_sv(i, j) += w * Ns[i] * Nv[j];
                for (int i = 0; i < ns; ++i)
                    for (int j = 0; j < ns; ++j) m_ss(i, j) += w * Ns[i] * Ns[j];

                if (is_str && opt_.bending) {
                    const double d2f = 4.0 / (h * h); // chain rule of the affine map
                    const auto& S2 = tables.srf_d2[q];
                    const double Dr = spec_.D_rho_facet[str_facet_pos[f]];
                    for (int i = 0; i < ns; ++i)
                        for (int j = 0; j < ns; ++j)
                            bend(i, j) += w * Dr * (S2[i] * d2f) * (S2[j] * d2f);
                }

                if (!is_str && damping_on) {
                    const double mu1 = spec_.damping->mu1(x);
                    if (mu1 > 0.0) {
                        const double k_wave =
                            spec_.incident ? spec_.incident->input().k : 0.0;
                        const double mu2 = spec_.damping->mu2(x, k_wave);
                        const auto J = bilinear_jacobian(corners, xi, 1.0);
                        for (int j = 0; j < nv; ++j) {
                            const auto gj = J.push_gradient(tables.vol_refgrad[q][j]);
                            for (int i = 0; i < nv; ++i)
                                mu1_dz_v(i, j) += w * mu1 * gj[1] * Nv[i];
                            for (int i = 0; i < ns; ++i)
                                mu1_dz_s(i, j) += w * mu1 * gj[1] * Ns[i];
                        }
                        for (int i = 0; i < nv; ++i)
                            for (int j = 0; j < ns; ++j)
                                mu2_vs(i, j) += w * mu2 * Nv[i] * Ns[j];

                        // relaxation targets: incident wave inside the inlet zone,
                        // zero inside the outlet zone
                        cxd eta_star = 0.0, phi_z_star = 0.0;
                        const bool inlet_zone = spec_.damping->inlet_length > 0 &&
                                                x < spec_.damping->inlet_length;
                        if (inlet_zone && spec_.incident) {
                            eta_star = spec_.incident->eta_amplitude(x);
                            phi_z_star = spec_.incident->phi_z_surface_amplitude(x);
                        }
                        const cxd af_c = to_complex(af);
                        for (int i = 0; i < nv; ++i) {
                            rhs_v(i) += w * (-mu2 * eta_star * Nv[i] +
                                             beta * mu1 * phi_z_star * af_c * Nv[i]);
                        }
                        for (int i = 0; i < ns; ++i)
                            rhs_s(i) += w * beta * mu1 * phi_z_star * Ns[i];
                    }
                }
            }

            // scatter
            if (is_str) {
                if (opt_.structure_coupling) {
                    const Scalar mass = dtt * Scalar(spec_.d0) + Scalar(g);
                    for (int i = 0; i < nv; ++i)
                        for (int j = 0; j < ns; ++j)
                            add(vdofs[i], soff + sdofs[j], -dt * Scalar(m_vs(i, j)));
                    for (int i = 0; i < ns; ++i)
                        for (int j = 0; j < nv; ++j)
                            add(soff + sdofs[i], vdofs[j], dt * Scalar(m_sv(i, j)));
                    for (int i = 0; i < ns; ++i)
                        for (int j = 0; j < ns; ++j)
                            add(soff + sdofs[i], soff + sdofs[j], mass * Scalar(m_ss(i, j)));
                    // history maps
                    for (int i = 0; i < nv; ++i)
                        for (int j = 0; j < ns; ++j)
                            add_dt(vdofs[i], soff + sdofs[j], -m_vs(i, j));
                    for (int i = 0; i < ns; ++i)
                        for (int j = 0; j < nv; ++j)
                            add_dt(soff + sdofs[i], vdofs[j], m_sv(i, j));
                    for (int i = 0; i < ns; ++i)
                        for (int j = 0; j < ns; ++j)
                            add_dtt(soff + sdofs[i], soff + sdofs[j],
                                    spec_.d0 * m_ss(i, j));
                }
                if (opt_.bending)
                    for (int i = 0; i < ns; ++i)
                        for (int j = 0; j < ns; ++j)
                            add(soff + sdofs[i], soff + sdofs[j], Scalar(bend(i, j)));
            } else {
                if (opt_.free_surface) {
                    for (int i = 0; i < nv; ++i)
                        for (int j = 0; j < ns; ++j) {
                            // -dt (kappa, w) + beta g alpha_f (kappa, w)
                            add(vdofs[i], soff + sdofs[j],
                                (-dt + Scalar(beta * g) * af) * Scalar(m_vs(i, j)));
                            add_dt(vdofs[i], soff + sdofs[j], -m_vs(i, j));
                        }
                    for (int i = 0; i < nv; ++i)
                        for (int j = 0; j < nv; ++j) {
                            // beta dt alpha_f (phi, w)
                            add(vdofs[i], vdofs[j],
                                Scalar(beta) * dt * af * Scalar(m_vv(i, j)));
                            add_dt(vdofs[i], vdofs[j],
                                   beta * real_part(af) * m_vv(i, j));
                        }
                    for (int i = 0; i < ns; ++i)
                        for (int j = 0; j < nv; ++j) {
                            // beta dt (phi, v)
                            add(soff + sdofs[i], vdofs[j],
                                Scalar(beta) * dt * Scalar(m_sv(i, j)));
                            add_dt(soff + sdofs[i], vdofs[j], beta * m_sv(i, j));
                        }
                    for (int i = 0; i < ns; ++i)
                        for (int j = 0; j < ns; ++j)
                            add(soff + sdofs[i], soff + sdofs[j],
                                Scalar(beta * g) * Scalar(m_ss(i, j)));
                }
                if (damping_on) {
                    for (int i = 0; i < nv; ++i)
                        for (int j = 0; j < ns; ++j)
                            add(vdofs[i], soff + sdofs[j], Scalar(-mu2_vs(i, j)));
                    for (int i = 0; i < nv; ++i)
                        for (int j = 0; j < nv; ++j)
                            add(vdofs[i], vdofs[j],
                                Scalar(beta) * af * Scalar(mu1_dz_v(i, j)));
                    for (int i = 0; i < ns; ++i)
                        for (int j = 0; j < nv; ++j)
                            add(soff + sdofs[i], vdofs[j],
                                Scalar(beta) * Scalar(mu1_dz_s(i, j)));
                    for (int i = 0; i < nv; ++i) rhs_(vdofs[i]) += rhs_v(i);
                    for (int i = 0; i < ns; ++i) rhs_(soff + sdofs[i]) += rhs_s(i);
                }
            }
        }
    }

    static cxd to_complex(Scalar v) {
        if constexpr (std::is_same_v<Scalar, double>)
            return cxd(v, 0.0);
        else
            return v;
    }

    struct PointTrace {
        // value of [grad . n] and <D_rho Delta> functionals on the two
        // adjacent elements' dofs
        std::vector<int> dofs;
        std::vector<double> jump;   // [u'] with n = +x left, -x right
        std::vector<double> jump_D; // [D_rho u']
        std::vector<double> avg_D;  // <D_rho u''>
    };

    PointTrace interface_trace(const InterfacePoint& p) {
        const auto str_ids = mesh_.structure_facet_ids();
        const int fl = str_ids[p.left_facet];
        const int fr = str_ids[p.right_facet];
        const int el = eta_.element_of_facet[fl];
        const int er = eta_.element_of_facet[fr];
        const double hl = mesh_.top_facets[fl].length();
        const double hr = mesh_.top_facets[fr].length();
        const double Dl = spec_.D_rho_facet[p.left_facet];
        const double Dr = spec_.D_rho_facet[p.right_facet];
        const int ns = srf_elem_.size();

        std::vector<double> d1l(ns), d2l(ns), d1r(ns), d2r(ns);
        srf_elem_.eval_derivative(1.0, d1l);
        srf_elem_.eval_second_derivative(1.0, d2l);
        srf_elem_.eval_derivative(-1.0, d1r);
        srf_elem_.eval_second_derivative(-1.0, d2r);

        PointTrace t;
        t.dofs.reserve(2 * ns);
        t.jump.reserve(2 * ns);
        for (int i = 0; i < ns; ++i) {
            t.dofs.push_back(layout_.off_eta() + eta_.cell_dofs[el][i]);
            t.jump.push_back((2.0 / hl) * d1l[i]);
            t.jump_D.push_back(Dl * (2.0 / hl) * d1l[i]);
            t.avg_D.push_back(0.5 * Dl * (4.0 / (hl * hl)) * d2l[i]);
        }
        for (int i = 0; i < ns; ++i) {
            t.dofs.push_back(layout_.off_eta() + eta_.cell_dofs[er][i]);
            t.jump.push_back(-(2.0 / hr) * d1r[i]);
            t.jump_D.push_back(-Dr * (2.0 / hr) * d1r[i]);
            t.avg_D.push_back(0.5 * Dr * (4.0 / (hr * hr)) * d2r[i]);
        }
        return t;
    }

    void assemble_interfaces() {
        if (eta_.ndofs == 0) return;
        const auto str_ids = mesh_.structure_facet_ids();

        if (opt_.cdg_consistency || opt_.cdg_penalty) {
            for (const auto& p : mesh_.structure_interfaces) {
                const auto t = interface_trace(p);
                const double hl = mesh_.top_facets[str_ids[p.left_facet]].length();
                const double hr = mesh_.top_facets[str_ids[p.right_facet]].length();
                const double hbar = 0.5 * (hl + hr);
                const std::size_t n = t.dofs.size();
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        double v = 0.0;
                        if (opt_.cdg_consistency)
                            v += -t.jump[i] * t.avg_D[j] - t.avg_D[i] * t.jump[j];
                        if (opt_.cdg_penalty)
                            v += (spec_.gamma / hbar) * t.jump[i] * t.jump_D[j];
                        if (v != 0.0) add(t.dofs[i], t.dofs[j], Scalar(v));
                    }
                }
            }
        }
        if (opt_.joints) {
            for (std::size_t m = 0; m < mesh_.joint_interfaces.size(); ++m) {
                const auto t = interface_trace(mesh_.joint_interfaces[m]);
                const double k_rho = spec_.joint_k_rho.empty() ? 0.0 : spec_.joint_k_rho[m];
                if (k_rho < 0) throw ValidationError("joints: k_rho must be non-negative");
                if (k_rho == 0.0) continue;
                const std::size_t n = t.dofs.size();
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        add(t.dofs[i], t.dofs[j], Scalar(k_rho * t.jump[i] * t.jump[j]));
            }
        }
    }

    void assemble_inlet() {
        if (mesh_.inlet_facets.empty() || spec_.incident == nullptr) return;
        if (spec_.incident->input().eta0 == 0.0) return;
        const int nv = vol_elem_.ndofs();
        const auto quad = gauss_quadrature(1, phi_.order + 3);
        std::vector<double> Nv(nv);
        for (const auto& facet : mesh_.inlet_facets) {
            const auto corners = mesh_.cell_corners(facet.cell);
            const double z0 = corners[0][1];
            const double z1 = corners[3][1];
            const auto& vdofs = phi_.cell_dofs[facet.cell];
            for (std::size_t q = 0; q < quad.size(); ++q) {
                const double ze = quad.points[q][0];
                const double z = z0 + 0.5 * (ze + 1.0) * (z1 - z0);
                const double w = quad.weights[q] * 0.5 * (z1 - z0);
                vol_elem_.shape(-1.0, ze, Nv);
                const cxd uin = spec_.incident->inlet_velocity_amplitude(z, facet.x);
                for (int i = 0; i < nv; ++i) rhs_(vdofs[i]) += w * uin * Nv[i];
            }
        }
        // outlet: u_out = 0 (rigid wall) unless a damping zone absorbs the wave
    }
};

} // namespace

template <class Scalar>
AssembledSystem<Scalar> assemble_system(const Mesh2D& mesh, const FESpace& phi,
                                        const FESpace& kappa, const FESpace& eta,
                                        const OperatorSpec<Scalar>& spec,
                                        const AssemblyOptions& options) {
    if (spec.damping != nullptr && spec.damping->active() && mesh.structure_span) {
        const auto [a, b] = *mesh.structure_span;
        const bool inlet_overlap =
            spec.damping->inlet_length > 0 && spec.damping->inlet_length > a;
        const bool outlet_overlap =
            spec.damping->outlet_length > 0 && spec.damping->outlet_start < b;
        if (inlet_overlap || outlet_overlap)
            throw ValidationError("assembly: damping zones overlap the structure span");
    }
    const auto n_str = mesh.structure_facet_ids().size();
    if (eta.ndofs > 0 && spec.D_rho_facet.size() != n_str)
        throw ValidationError("assembly: D_rho_facet must match the structure facet count");
    if (!mesh.joint_interfaces.empty() &&
        !spec.joint_k_rho.empty() &&
        spec.joint_k_rho.size() != mesh.joint_interfaces.size())
        throw ValidationError("assembly: joint_k_rho must match the joint count");

    SystemAssembler<Scalar> assembler(mesh, phi, kappa, eta, spec, options);
    return assembler.run();
}

template AssembledSystem<double> assemble_system(const Mesh2D&, const FESpace&,
                                                 const FESpace&, const FESpace&,
                                                 const OperatorSpec<double>&,
                                                 const AssemblyOptions&);
template AssembledSystem<std::complex<double>> assemble_system(
    const Mesh2D&, const FESpace&, const FESpace&, const FESpace&,
    const OperatorSpec<std::complex<double>>&, const AssemblyOptions&);

template <class Scalar>
Eigen::SparseMatrix<Scalar> extract_block(const Eigen::SparseMatrix<Scalar>& A,
                                          const FieldLayout& layout, Field row,
                                          Field col) {
    auto range = [&](Field f) -> std::pair<int, int> {
        switch (f) {
        case Field::Phi: return {layout.off_phi(), layout.n_phi};
        case Field::Kappa: return {layout.off_kappa(), layout.n_kappa};
        default: return {layout.off_eta(), layout.n_eta};
        }
    };
    const auto [r0, nr] = range(row);
    const auto [c0, nc] = range(col);
    std::vector<Eigen::Triplet<Scalar>> trip;
    for (int k = 0; k < A.outerSize(); ++k) {
        for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(A, k); it; ++it) {
            if (it.row() >= r0 && it.row() < r0 + nr && it.col() >= c0 &&
                it.col() < c0 + nc)
                trip.emplace_back(it.row() - r0, it.col() - c0, it.value());
        }
    }
    Eigen::SparseMatrix<Scalar> B(nr, nc);
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

template Eigen::SparseMatrix<double> extract_block(const Eigen::SparseMatrix<double>&,
                                                   const FieldLayout&, Field, Field);
template Eigen::SparseMatrix<std::complex<double>> extract_block(
    const Eigen::SparseMatrix<std::complex<double>>&, const FieldLayout&, Field, Field);

Eigen::SparseMatrix<double> assemble_fluid_laplacian(const Mesh2D& mesh,
                                                     const FESpace& phi) {
    FESpace none_k, none_e;
    none_k.domain = FieldDomain::FreeSurface;
    none_e.domain = FieldDomain::Structure;
    none_e.order = none_k.order = 2;
    OperatorSpec<double> spec;
    spec.mode = {0.0, 0.0};
    AssemblyOptions opt;
    opt.free_surface = opt.structure_coupling = opt.bending = false;
    opt.cdg_consistency = opt.cdg_penalty = opt.joints = opt.damping = false;
    const auto sys = assemble_system(mesh, phi, none_k, none_e, spec, opt);
    return extract_block(sys.A, sys.layout, Field::Phi, Field::Phi);
}

} // namespace vlfs
