#include "vlfs/timeloop.hpp"

namespace vlfs {

Eigen::VectorXd newmark_history1(const FieldState& s, const NewmarkParams& p) {
    // x_t^{n+1} = delta_t (x^{n+1}-x^n) + w_v x_t^n + w_a x_tt^n
    //           = delta_t x^{n+1} - H1
    return p.delta_t() * s.x - p.velocity_weight_xt() * s.xt -
           p.velocity_weight_xtt() * s.xtt;
}

Eigen::VectorXd newmark_history2(const FieldState& s, const NewmarkParams& p) {
    return p.delta_tt() * s.x - p.acceleration_weight_xt() * s.xt -
           p.acceleration_weight_xtt() * s.xtt;
}

TimeIntegrator::TimeIntegrator(AssembledSystem<double> system, NewmarkParams params,
                               double forcing_omega)
    : system_(std::move(system)), params_(params), forcing_omega_(forcing_omega),
      lu_(system_.A) {
    params_.validate();
}

Eigen::VectorXd TimeIntegrator::stack_history1(const NewmarkState& s) const {
    Eigen::VectorXd h(system_.layout.total());
    h.segment(system_.layout.off_phi(), system_.layout.n_phi) =
        newmark_history1(s.phi, params_);
    h.segment(system_.layout.off_kappa(), system_.layout.n_kappa) =
        newmark_history1(s.kappa, params_);
    h.segment(system_.layout.off_eta(), system_.layout.n_eta) =
        newmark_history1(s.eta, params_);
    return h;
}

Eigen::VectorXd TimeIntegrator::stack_history2(const NewmarkState& s) const {
    Eigen::VectorXd h(system_.layout.total());
    h.segment(system_.layout.off_phi(), system_.layout.n_phi) =
        newmark_history2(s.phi, params_);
    h.segment(system_.layout.off_kappa(), system_.layout.n_kappa) =
        newmark_history2(s.kappa, params_);
    h.segment(system_.layout.off_eta(), system_.layout.n_eta) =
        newmark_history2(s.eta, params_);
    return h;
}

Eigen::VectorXd TimeIntegrator::step_rhs(const NewmarkState& state, double t_next) const {
    Eigen::VectorXd rhs;
    if (system_.rhs_amplitude.size() > 0 && system_.rhs_amplitude.norm() > 0.0) {
        const std::complex<double> rot =
            std::exp(std::complex<double>(0.0, -forcing_omega_ * t_next));
        rhs = (system_.rhs_amplitude * rot).real();
    } else {
        rhs = Eigen::VectorXd::Zero(system_.layout.total());
    }
    rhs.noalias() += system_.M_dt * stack_history1(state);
    rhs.noalias() += system_.M_dtt * stack_history2(state);
    return rhs;
}

void TimeIntegrator::advance(NewmarkState& state) const {
    const double dt = params_.dt;
    const double t_next = state.t + dt;
    const Eigen::VectorXd rhs = step_rhs(state, t_next);
    const Eigen::VectorXd x = lu_.solve(rhs);
    last_residual_ = lu_.residual(system_.A, x, rhs);

    const auto& L = system_.layout;
    auto update_field = [&](FieldState& f, int off, int n) {
        if (n == 0) return;
        const Eigen::VectorXd xnew = x.segment(off, n);
        // acceleration from the inverted Newmark relation, then velocity from
        // the defining update so both scheme identities hold exactly
        const Eigen::VectorXd xtt_new = params_.delta_tt() * (xnew - f.x) +
                                        params_.acceleration_weight_xt() * f.xt +
                                        params_.acceleration_weight_xtt() * f.xtt;
        const Eigen::VectorXd xt_new =
            f.xt + dt * ((1.0 - params_.gamma_nb) * f.xtt + params_.gamma_nb * xtt_new);
        f.x = xnew;
        f.xt = xt_new;
        f.xtt = xtt_new;
    };
    update_field(state.phi, L.off_phi(), L.n_phi);
    update_field(state.kappa, L.off_kappa(), L.n_kappa);
    update_field(state.eta, L.off_eta(), L.n_eta);
    state.t = t_next;
    state.step += 1;
}

} // namespace vlfs
