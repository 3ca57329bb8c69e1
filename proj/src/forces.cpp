#include "fewps/forces.hpp"

#include <cmath>
#include <string>

namespace fewps {
namespace {

// Horner evaluation of the `deriv`-th derivative of sum c[k] x^k.
double poly_eval(const std::vector<double>& c, double x, int deriv) {
    double v = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= deriv; --k) {
        double fac = 1.0;
        for (int j = 0; j < deriv; ++j) fac *= (k - j);
        v = v * x + fac * c[k];
    }
    return v;
}

struct CanDissDerivs {
    double g1, g2, g3; // G', G'', G'''
};

CanDissDerivs candiss_derivs(const CanonicalDissipative& cd, double H) {
    return {poly_eval(cd.g_coeffs, H, 1), poly_eval(cd.g_coeffs, H, 2),
            poly_eval(cd.g_coeffs, H, 3)};
}

std::string state_brief(const PhaseState& s) {
    return "t=" + std::to_string(s.t) + ", dof=" + std::to_string(s.q.size());
}

} // namespace

const char* force_name(const BaseForce& f) {
    return std::holds_alternative<LinearFriction>(f) ? "linear_friction"
                                                     : "canonical_dissipative";
}

void validate(const BaseForce& f) {
    if (const auto* cd = std::get_if<CanonicalDissipative>(&f)) {
        if (cd->g_coeffs.size() < 2)
            throw ContractViolation("canonical_dissipative: G polynomial needs degree >= 1");
    }
}

std::vector<double> base_force(const SystemModel& model, const BaseForce& force,
                               const PhaseState& s) {
    model.check_state(s);
    const auto& m = model.component_masses();
    std::vector<double> F(s.p.size());
    if (const auto* lf = std::get_if<LinearFriction>(&force)) {
        for (std::size_t i = 0; i < F.size(); ++i) F[i] = -lf->gamma * s.p[i];
    } else {
        const auto& cd = std::get<CanonicalDissipative>(force);
        const double g1 = poly_eval(cd.g_coeffs, model.hamiltonian(s), 1);
        for (std::size_t i = 0; i < F.size(); ++i) F[i] = -g1 * s.p[i] / m[i];
    }
    return F;
}

std::vector<double> total_force(const SystemModel& model, const BaseForce& force,
                                const PhaseState& s) {
    auto F = base_force(model, force, s);
    const auto gq = model.grad_q(s);
    for (std::size_t i = 0; i < F.size(); ++i) F[i] -= gq[i];
    return F;
}

double power(const SystemModel& model, const BaseForce& force, const PhaseState& s) {
    const auto F = base_force(model, force, s);
    const auto K = model.grad_p(s);
    double pw = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) pw += F[i] * K[i];
    return pw;
}

double omega(const SystemModel& model, const BaseForce& force, const PhaseState& s) {
    model.check_state(s);
    const auto& m = model.component_masses();
    if (const auto* lf = std::get_if<LinearFriction>(&force))
        return -lf->gamma * model.dof();
    const auto& cd = std::get<CanonicalDissipative>(force);
    const auto d = candiss_derivs(cd, model.hamiltonian(s));
    double k2 = 0.0, s1 = 0.0; // |K|^2 and sum 1/m
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        const double Ki = s.p[i] / m[i];
        k2 += Ki * Ki;
        s1 += 1.0 / m[i];
    }
    return -d.g2 * k2 - d.g1 * s1;
}

double constraint_value(const SystemModel& model, const BaseForce& force,
                        const BetaFamily& family, const PhaseState& s) {
    const double H = model.hamiltonian(s);
    return beta(family, H) * power(model, force, s) - omega(model, force, s);
}

ConstraintGradients constraint_gradients(const SystemModel& model, const BaseForce& force,
                                         const BetaFamily& family, const PhaseState& s) {
    const double H = model.hamiltonian(s);
    const double b = beta(family, H);
    const double bp = dbeta_dH(family, H);
    const auto K = model.grad_p(s);
    const auto gq = model.grad_q(s);
    const auto F = base_force(model, force, s);
    const auto& m = model.component_masses();
    const std::size_t n = s.p.size();

    double pw = 0.0;
    for (std::size_t i = 0; i < n; ++i) pw += F[i] * K[i];

    ConstraintGradients g;
    g.P.assign(n, 0.0);
    g.Q.assign(n, 0.0);

    // beta'(H) dH/ds * power  (both gradients)
    for (std::size_t i = 0; i < n; ++i) {
        g.P[i] = bp * K[i] * pw;
        g.Q[i] = bp * gq[i] * pw;
    }
    // beta * F_j d2H/dp_i dp_j  (diagonal kinetic Hessian); d2H/dq dp = 0
    for (std::size_t i = 0; i < n; ++i) g.P[i] += b * F[i] / m[i];

    if (const auto* lf = std::get_if<LinearFriction>(&force)) {
        // dF_j/dp_i = -gamma delta_ij; q-Jacobian and second contractions vanish
        for (std::size_t i = 0; i < n; ++i) g.P[i] += b * (-lf->gamma) * K[i];
    } else {
        const auto& cd = std::get<CanonicalDissipative>(force);
        const auto d = candiss_derivs(cd, H);
        double k2 = 0.0, s1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            k2 += K[i] * K[i];
            s1 += 1.0 / m[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            // beta * sum_j dF_j/dp_i K_j, with dF_j/dp_i = -G'' K_i K_j - G' delta_ij/m_i
            g.P[i] += b * (-d.g2 * K[i] * k2 - d.g1 * K[i] / m[i]);
            // -d/dp_i (div_p F) with div_p F = -G'' |K|^2 - G' S1
            g.P[i] += d.g3 * K[i] * k2 + 2.0 * d.g2 * K[i] / m[i] + d.g2 * K[i] * s1;
            // beta * sum_j dF_j/dq_i K_j, with dF_j/dq_i = -G'' (dH/dq_i) K_j
            g.Q[i] += b * (-d.g2 * gq[i] * k2);
            // -d/dq_i (div_p F)
            g.Q[i] += d.g3 * gq[i] * k2 + d.g2 * gq[i] * s1;
        }
    }
    return g;
}

double lagrange_multiplier(const SystemModel& model, const BaseForce& force,
                           const BetaFamily& family, const PhaseState& s) {
    const auto g = constraint_gradients(model, force, family, s);
    const auto F = total_force(model, force, s);
    const auto K = model.grad_p(s);
    double pp = 0.0, pf = 0.0, qk = 0.0, ff = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        pp += g.P[i] * g.P[i];
        pf += g.P[i] * F[i];
        qk += g.Q[i] * K[i];
        ff += F[i] * F[i];
    }
    if (pp <= degeneracy_threshold(ff))
        throw SingularityError("degenerate constraint gradient (P.P = " + std::to_string(pp) +
                               ") at state " + state_brief(s));
    return -(pf + qk) / pp;
}

std::vector<double> project_force(const SystemModel& model, const BaseForce& force,
                                  const BetaFamily& family, const PhaseState& s) {
    const auto g = constraint_gradients(model, force, family, s);
    auto F = total_force(model, force, s);
    const auto K = model.grad_p(s);
    double pp = 0.0, pf = 0.0, qk = 0.0, ff = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        pp += g.P[i] * g.P[i];
        pf += g.P[i] * F[i];
        qk += g.Q[i] * K[i];
        ff += F[i] * F[i];
    }
    if (pp <= degeneracy_threshold(ff))
        throw SingularityError("degenerate constraint gradient (P.P = " + std::to_string(pp) +
                               ") at state " + state_brief(s));
    const double lam = -(pf + qk) / pp;
    for (std::size_t i = 0; i < F.size(); ++i) F[i] += lam * g.P[i];
    return F;
}

double tangency_residual(const SystemModel& model, const BaseForce& force,
                         const BetaFamily& family, const PhaseState& s) {
    const auto g = constraint_gradients(model, force, family, s);
    const auto Fn = project_force(model, force, family, s);
    const auto K = model.grad_p(s);
    double r = 0.0;
    for (std::size_t i = 0; i < Fn.size(); ++i) r += g.P[i] * Fn[i] + g.Q[i] * K[i];
    return r;
}

double projected_power(const SystemModel& model, const BaseForce& force,
                       const BetaFamily& family, const PhaseState& s) {
    const auto Fn = project_force(model, force, family, s);
    const auto gq = model.grad_q(s);
    const auto K = model.grad_p(s);
    double pw = 0.0;
    for (std::size_t i = 0; i < Fn.size(); ++i) pw += (Fn[i] + gq[i]) * K[i];
    return pw;
}

double projected_omega_fd(const SystemModel& model, const BaseForce& force,
                          const BetaFamily& family, const PhaseState& s,
                          double fd_step_scale) {
    PhaseState w = s;
    double div = 0.0;
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        const double h = fd_step_scale * (1.0 + std::abs(s.p[i]));
        w.p[i] = s.p[i] + h;
        const double fp = project_force(model, force, family, w)[i];
        w.p[i] = s.p[i] - h;
        const double fm = project_force(model, force, family, w)[i];
        w.p[i] = s.p[i];
        div += (fp - fm) / (2.0 * h);
    }
    // the -dH/dq part of F^new has no momentum dependence, so this equals the
    // divergence of the projected non-potential force
    return div;
}

double closure_residual(const SystemModel& model, const BaseForce& force,
                        const BetaFamily& family, const PhaseState& s,
                        double fd_step_scale) {
    const double H = model.hamiltonian(s);
    const double b = beta(family, H);
    const double om = projected_omega_fd(model, force, family, s, fd_step_scale);
    const double pw = projected_power(model, force, family, s);
    return om - b * pw;
}

} // namespace fewps
