#include "fewps/phase.hpp"

#include <cmath>

namespace fewps {

const char* potential_name(const PotentialSpec& pot) {
    if (std::holds_alternative<HarmonicPotential>(pot)) return "harmonic";
    if (std::holds_alternative<QuarticPotential>(pot)) return "quartic";
    return "free";
}

SystemModel::SystemModel(int n_particles, int dim, std::vector<double> masses,
                         PotentialSpec potential,
                         std::map<std::string, double> extra_params)
    : n_particles_(n_particles),
      dim_(dim),
      masses_(std::move(masses)),
      potential_(potential),
      extra_params_(std::move(extra_params)) {
    if (n_particles_ < 1 || dim_ < 1)
        throw ContractViolation("SystemModel: need N >= 1 and d >= 1");
    if (static_cast<int>(masses_.size()) != n_particles_)
        throw ContractViolation("SystemModel: masses length must equal N");
    for (double m : masses_)
        if (!(m > 0.0) || !std::isfinite(m))
            throw ContractViolation("SystemModel: masses must be positive and finite");
    mass_c_.reserve(dof());
    for (int i = 0; i < n_particles_; ++i)
        for (int k = 0; k < dim_; ++k) mass_c_.push_back(masses_[i]);
    equal_masses_ = true;
    for (double m : masses_)
        if (m != masses_[0]) { equal_masses_ = false; break; }

    params_ = extra_params_;
    if (const auto* h = std::get_if<HarmonicPotential>(&potential_)) {
        if (!(h->omega > 0.0)) throw ContractViolation("SystemModel: omega must be positive");
        params_["omega"] = h->omega;
    } else if (const auto* qp = std::get_if<QuarticPotential>(&potential_)) {
        if (qp->b < 0.0) throw ContractViolation("SystemModel: quartic b must be >= 0");
        if (qp->a < 0.0)
            throw ContractViolation("SystemModel: quartic a must be >= 0 (no double wells)");
        if (qp->b == 0.0 && qp->a == 0.0)
            throw ContractViolation("SystemModel: quartic needs b > 0 or a > 0");
        params_["a"] = qp->a;
        params_["b"] = qp->b;
    } else if (const auto* fr = std::get_if<FreePotential>(&potential_)) {
        if (!(fr->volume > 0.0)) throw ContractViolation("SystemModel: volume must be positive");
    }
}

void SystemModel::check_state(const PhaseState& s) const {
    const std::size_t m = static_cast<std::size_t>(dof());
    if (s.q.size() != m || s.p.size() != m)
        throw ContractViolation("state dimension mismatch: expected N*d = " +
                                std::to_string(m) + ", got q=" + std::to_string(s.q.size()) +
                                " p=" + std::to_string(s.p.size()));
    for (double v : s.q)
        if (!std::isfinite(v)) throw ContractViolation("non-finite position component");
    for (double v : s.p)
        if (!std::isfinite(v)) throw ContractViolation("non-finite momentum component");
}

double SystemModel::kinetic(const PhaseState& s) const {
    double k = 0.0;
    for (std::size_t i = 0; i < s.p.size(); ++i) k += s.p[i] * s.p[i] / (2.0 * mass_c_[i]);
    return k;
}

double SystemModel::potential_energy(const PhaseState& s) const {
    if (const auto* h = std::get_if<HarmonicPotential>(&potential_)) {
        double u = 0.0;
        for (std::size_t i = 0; i < s.q.size(); ++i)
            u += 0.5 * mass_c_[i] * h->omega * h->omega * s.q[i] * s.q[i];
        return u;
    }
    if (const auto* qp = std::get_if<QuarticPotential>(&potential_)) {
        double u = 0.0;
        for (double x : s.q) {
            const double x2 = x * x;
            u += qp->a * x2 + qp->b * x2 * x2;
        }
        return u;
    }
    return 0.0;
}

double SystemModel::hamiltonian(const PhaseState& s) const {
    check_state(s);
    return kinetic(s) + potential_energy(s);
}

std::vector<double> SystemModel::grad_q(const PhaseState& s) const {
    check_state(s);
    std::vector<double> g(s.q.size(), 0.0);
    if (const auto* h = std::get_if<HarmonicPotential>(&potential_)) {
        for (std::size_t i = 0; i < s.q.size(); ++i)
            g[i] = mass_c_[i] * h->omega * h->omega * s.q[i];
    } else if (const auto* qp = std::get_if<QuarticPotential>(&potential_)) {
        for (std::size_t i = 0; i < s.q.size(); ++i)
            g[i] = 2.0 * qp->a * s.q[i] + 4.0 * qp->b * s.q[i] * s.q[i] * s.q[i];
    }
    return g;
}

std::vector<double> SystemModel::grad_p(const PhaseState& s) const {
    check_state(s);
    std::vector<double> g(s.p.size());
    for (std::size_t i = 0; i < s.p.size(); ++i) g[i] = s.p[i] / mass_c_[i];
    return g;
}

double SystemModel::param_derivative(const PhaseState& s, const std::string& name) const {
    check_state(s);
    if (params_.find(name) == params_.end())
        throw LookupError("unknown parameter '" + name + "'");
    if (const auto* h = std::get_if<HarmonicPotential>(&potential_)) {
        if (name == "omega") {
            double d = 0.0;
            for (std::size_t i = 0; i < s.q.size(); ++i)
                d += mass_c_[i] * h->omega * s.q[i] * s.q[i];
            return d;
        }
    } else if (std::holds_alternative<QuarticPotential>(potential_)) {
        if (name == "a") {
            double d = 0.0;
            for (double x : s.q) d += x * x;
            return d;
        }
        if (name == "b") {
            double d = 0.0;
            for (double x : s.q) d += x * x * x * x;
            return d;
        }
    }
    return 0.0; // labels that do not enter H
}

} // namespace fewps
