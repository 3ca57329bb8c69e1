#ifndef FEWPS_FORCES_HPP
#define FEWPS_FORCES_HPP

#include <variant>
#include <vector>

#include "fewps/beta.hpp"
#include "fewps/phase.hpp"

namespace fewps {

/// F_i = -gamma p_i
struct LinearFriction {
    double gamma = 1.0;
};

/// F_i = -G'(H) p_i / m_i with polynomial G(H) = sum g_coeffs[k] H^k.
struct CanonicalDissipative {
    std::vector<double> g_coeffs; // coefficients of G, ascending powers
};

using BaseForce = std::variant<LinearFriction, CanonicalDissipative>;

const char* force_name(const BaseForce& f);
void validate(const BaseForce& f);

/// Gradients of the constraint function f = beta(H) P - Omega:
/// P_i = df/dp_i, Q_i = df/dq_i.
struct ConstraintGradients {
    std::vector<double> P;
    std::vector<double> Q;
};

/// Non-potential base force F^(n)(s).
std::vector<double> base_force(const SystemModel& model, const BaseForce& force,
                               const PhaseState& s);

/// Total force -dH/dq + F^(n).
std::vector<double> total_force(const SystemModel& model, const BaseForce& force,
                                const PhaseState& s);

/// Power of the non-potential force: P = sum_i F^(n)_i dH/dp_i.
double power(const SystemModel& model, const BaseForce& force, const PhaseState& s);

/// Momentum divergence of the non-potential force: Omega = sum_i dF^(n)_i/dp_i.
double omega(const SystemModel& model, const BaseForce& force, const PhaseState& s);

/// Constraint function f = beta(H) * power - omega; 0 on the hypersurface.
double constraint_value(const SystemModel& model, const BaseForce& force,
                        const BetaFamily& family, const PhaseState& s);

/// Analytic phase-space gradients of the constraint function.
ConstraintGradients constraint_gradients(const SystemModel& model, const BaseForce& force,
                                         const BetaFamily& family, const PhaseState& s);

/// Degeneracy threshold for P.P given the total-force magnitude.
inline double degeneracy_threshold(double total_force_sq) {
    return 1e-12 * (1.0 + total_force_sq);
}

/// lambda = -(P.F + Q.K)/(P.P); throws SingularityError when P.P is degenerate.
double lagrange_multiplier(const SystemModel& model, const BaseForce& force,
                           const BetaFamily& family, const PhaseState& s);

/// Projected total force F^new = F + lambda P; keeps f constant along the flow.
std::vector<double> project_force(const SystemModel& model, const BaseForce& force,
                                  const BetaFamily& family, const PhaseState& s);

/// Exact tangency identity P.F^new + Q.K (zero to roundoff for every state).
double tangency_residual(const SystemModel& model, const BaseForce& force,
                         const BetaFamily& family, const PhaseState& s);

/// Omega[F^new] - beta(H) * Power[F^new] for the projected system, where the
/// projected non-potential force is F^new + dH/dq, its power is analytic and
/// its momentum divergence is computed by central differences of the projected
/// field.  This is the closure quantity the verify command reports; it
/// vanishes identically only for potential-free models (see README notes).
double closure_residual(const SystemModel& model, const BaseForce& force,
                        const BetaFamily& family, const PhaseState& s,
                        double fd_step_scale = 1e-6);

/// Power of the projected system's non-potential force,
/// (F^new + dH/dq) . dH/dp = dH/dt along the projected flow.
double projected_power(const SystemModel& model, const BaseForce& force,
                       const BetaFamily& family, const PhaseState& s);

/// Momentum divergence of the projected non-potential force, by central
/// differences of the projected field.
double projected_omega_fd(const SystemModel& model, const BaseForce& force,
                          const BetaFamily& family, const PhaseState& s,
                          double fd_step_scale = 1e-6);

} // namespace fewps

#endif
