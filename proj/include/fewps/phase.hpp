#ifndef FEWPS_PHASE_HPP
#define FEWPS_PHASE_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fewps/errors.hpp"

namespace fewps {

/// Point (q, p) of 2*N*d-dimensional phase space at time t.
struct PhaseState {
    std::vector<double> q;
    std::vector<double> p;
    double t = 0.0;
};

struct HarmonicPotential {
    double omega = 1.0; // angular frequency, shared by all degrees of freedom
};

struct QuarticPotential {
    double a = 0.0; // quadratic coefficient
    double b = 0.0; // quartic coefficient, b >= 0 for a confining well
};

struct FreePotential {
    // Configuration volume used only by phase-space integrals (Z, S); the
    // dynamics of a free system is volume-independent.
    double volume = 1.0;
};

using PotentialSpec = std::variant<HarmonicPotential, QuarticPotential, FreePotential>;

const char* potential_name(const PotentialSpec& pot);

/// N-particle separable Hamiltonian H = sum p^2/2m + U(q, x) with analytic
/// gradients and parameter derivatives.  Immutable after construction.
class SystemModel {
public:
    SystemModel(int n_particles, int dim, std::vector<double> masses,
                PotentialSpec potential,
                std::map<std::string, double> extra_params = {});

    int n_particles() const { return n_particles_; }
    int dim() const { return dim_; }
    int dof() const { return n_particles_ * dim_; }
    const PotentialSpec& potential() const { return potential_; }
    const std::vector<double>& masses() const { return masses_; }
    /// per-component mass, length N*d
    const std::vector<double>& component_masses() const { return mass_c_; }
    bool equal_masses() const { return equal_masses_; }

    /// All named parameters: potential parameters plus any extra labels
    /// (e.g. a bath temperature that does not enter H).
    const std::map<std::string, double>& params() const { return params_; }
    const std::map<std::string, double>& extra_params() const { return extra_params_; }

    double kinetic(const PhaseState& s) const;
    double potential_energy(const PhaseState& s) const;
    double hamiltonian(const PhaseState& s) const;

    /// dU/dq (the potential part; dH/dq for separable H)
    std::vector<double> grad_q(const PhaseState& s) const;
    /// dH/dp = p/m componentwise
    std::vector<double> grad_p(const PhaseState& s) const;

    /// Analytic dH/dx_k for a named parameter; 0 for labels absent from H.
    double param_derivative(const PhaseState& s, const std::string& name) const;

    /// Throws ContractViolation on dimension mismatch or non-finite entries.
    void check_state(const PhaseState& s) const;

private:
    int n_particles_;
    int dim_;
    std::vector<double> masses_;
    std::vector<double> mass_c_;
    bool equal_masses_;
    PotentialSpec potential_;
    std::map<std::string, double> params_;
    std::map<std::string, double> extra_params_;
};

} // namespace fewps

#endif
