#pragma once

#include <Eigen/Dense>

#include "vlfs/assembly.hpp"
#include "vlfs/params.hpp"
#include "vlfs/solver.hpp"

namespace vlfs {

/// One field's Newmark history: value and its first two time derivatives.
struct FieldState {
    Eigen::VectorXd x, xt, xtt;

    static FieldState zero(int n) {
        FieldState s;
        s.x = Eigen::VectorXd::Zero(n);
        s.xt = Eigen::VectorXd::Zero(n);
        s.xtt = Eigen::VectorXd::Zero(n);
        return s;
    }
};

struct NewmarkState {
    FieldState phi, kappa, eta;
    double t = 0.0;
    int step = 0;

    static NewmarkState zero(const FieldLayout& layout) {
        NewmarkState s;
        s.phi = FieldState::zero(layout.n_phi);
        s.kappa = FieldState::zero(layout.n_kappa);
        s.eta = FieldState::zero(layout.n_eta);
        return s;
    }
};

/// Newmark-beta integrator over the monolithic one-step operator. The
/// operator is factorized once (constant dt) and reused across steps.
class TimeIntegrator {
public:
    TimeIntegrator(AssembledSystem<double> system, NewmarkParams params,
                   double forcing_omega);

    const FieldLayout& layout() const { return system_.layout; }
    const NewmarkParams& params() const { return params_; }
    const AssembledSystem<double>& system() const { return system_; }

    /// Right-hand side of the step ending at time t_next, given the state at
    /// the previous step (external data + Newmark history terms).
    Eigen::VectorXd step_rhs(const NewmarkState& state, double t_next) const;

    /// Advances the state from t to t + dt, updating value and derivative
    /// vectors via the Newmark formulas.
    void advance(NewmarkState& state) const;

    /// Relative residual of the last solve.
    double last_residual() const { return last_residual_; }

private:
    AssembledSystem<double> system_;
    NewmarkParams params_;
    double forcing_omega_;
    Factorization<double> lu_;
    mutable double last_residual_ = 0.0;

    Eigen::VectorXd stack_history1(const NewmarkState& s) const;
    Eigen::VectorXd stack_history2(const NewmarkState& s) const;
};

/// H1-combination per field: x_t^{n+1} = delta_t x^{n+1} - H1(x^n, x_t^n, x_tt^n).
Eigen::VectorXd newmark_history1(const FieldState& s, const NewmarkParams& p);
/// H2-combination per field: x_tt^{n+1} = delta_tt x^{n+1} - H2(...).
Eigen::VectorXd newmark_history2(const FieldState& s, const NewmarkParams& p);

} // namespace vlfs
