#ifndef FEWPS_BETA_HPP
#define FEWPS_BETA_HPP

#include <variant>

#include "fewps/errors.hpp"

namespace fewps {

// Coefficient families for the constraint Omega = beta(H) * P.  Each family
// supplies beta, its H-derivative and the antiderivative B with dB/dH = beta;
// the stationary shape is exp(-B(H)) up to normalization.

struct ConstantBeta {
    double beta0 = 1.0;
};

struct LinearBeta {
    double beta1 = 1.0;
    double beta2 = 0.0;
};

/// beta = 2(H-E)/((H-E)^2 + (Gamma/2)^2); density is the resonance shape
/// 1/((H-E)^2 + (Gamma/2)^2).
struct BreitWignerBeta {
    double resonance_energy = 0.0; // E
    double width = 1.0;            // Gamma > 0
};

/// beta = beta0 / (1 + a exp(-beta0 (H - mu))); density 1/(exp(beta0(H-mu)) + a).
/// a = +1 Fermi-like, a = -1 Bose-like (domain H > mu), a = 0 canonical.
struct FermiBoseBeta {
    double beta0 = 1.0;
    double mu = 0.0;
    double a = 0.0;
};

using BetaFamily = std::variant<ConstantBeta, LinearBeta, BreitWignerBeta, FermiBoseBeta>;

const char* family_name(const BetaFamily& f);

/// Throws DomainError for H outside the family domain
/// (FermiBose with a = -1 requires H > mu).
void check_domain(const BetaFamily& f, double H);

double beta(const BetaFamily& f, double H);
double dbeta_dH(const BetaFamily& f, double H);
/// B(H) with dB/dH = beta; integration constants fixed to zero.
double antiderivative_B(const BetaFamily& f, double H);
/// exp(-B(H)), evaluated through the family's closed form where one exists;
/// values below exp(-700) flush to zero.
double unnormalized_density(const BetaFamily& f, double H);

/// Nonlinear Liouville coefficient C(rho) = -beta0 (rho - a rho^2) of the
/// Fermi-Bose family; satisfies C(rho(H)) = -beta(H) rho(H) for the
/// unnormalized density.
double c_of_rho(const FermiBoseBeta& f, double rho);

/// Validates family parameters (widths positive, |a| <= 1, ...).
void validate(const BetaFamily& f);

} // namespace fewps

#endif
