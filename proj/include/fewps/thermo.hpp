#ifndef FEWPS_THERMO_HPP
#define FEWPS_THERMO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fewps/distribution.hpp"

namespace fewps {

/// U = <H> over the window, by the density-of-states reduction.
double internal_energy(const DensityModel& dm);

/// X_k = <-dH/dx_k>.  Harmonic omega uses the exact identity
/// dPhi/domega = -(N d / omega) Phi; quartic coefficients use a central
/// difference of the phase volume in the coefficient; labels absent from H
/// give 0; unknown names throw.
double thermodynamic_force(const DensityModel& dm, const std::string& k);

/// Entropy.  Constant-beta families use the Gibbs form -<ln rho>; other
/// families integrate the defining relation for S_N(rho) with the supplied
/// temperature (default 1/beta0 where the family has one).  Breit-Wigner
/// windows must lie on one side of the resonance energy.
double entropy(const DensityModel& dm, std::optional<double> temperature = std::nullopt);

/// delta Q = int H (rho' - rho) between two nearby parameter points
/// (midpoint H; second-order accurate).
double heat_increment(const DensityModel& dm, const DensityModel& dm_next);

struct ThermoPoint {
    std::map<std::string, double> x; // swept parameter values
    double U = 0.0;
    double S = 0.0;
    double Z = 0.0;
    double T = 0.0;
    std::map<std::string, double> X; // thermodynamic force per swept parameter
};

struct LawResiduals {
    std::vector<double> first_law; // per sweep segment
    std::vector<std::string> params;
    std::vector<std::vector<double>> maxwell_asymmetry; // |dX_k/dx_l - dX_l/dx_k|
};

/// Applies named sweep parameters to a model/family pair.  Recognized names:
/// "T" (constant-beta temperature), "omega", "a", "b", "beta0", "mu",
/// "a_stat", "beta1", "beta2", "resonance_energy", "width".
std::pair<SystemModel, BetaFamily> apply_sweep_params(
    const SystemModel& base, const BetaFamily& family,
    const std::map<std::string, double>& x);

/// Sweep driver: binds a base model/family and evaluates thermodynamic points
/// at given parameter values.
class ThermoSweep {
public:
    ThermoSweep(SystemModel base_model, BetaFamily base_family,
                std::optional<EnergyWindow> window = std::nullopt,
                std::optional<double> temperature = std::nullopt);

    ThermoPoint at(const std::map<std::string, double>& x) const;
    /// Points along the straight path from -> to in all listed parameters.
    std::vector<ThermoPoint> run(const std::vector<std::string>& params,
                                 const std::vector<double>& from,
                                 const std::vector<double>& to, int steps) const;

    DensityModel density_model_at(const std::map<std::string, double>& x) const;

private:
    SystemModel base_model_;
    BetaFamily base_family_;
    std::optional<EnergyWindow> window_;
    std::optional<double> temperature_;
};

/// Per-segment residuals |dU - (T dS - sum_k X_k dx_k)| with midpoint T, X.
/// Needs >= 3 points.  The Maxwell asymmetry matrix is filled when a sweep
/// driver is supplied (cross-derivatives need off-path evaluations); it is a
/// reported diagnostic, never asserted.
LawResiduals first_law_residual(const std::vector<ThermoPoint>& sweep);
LawResiduals first_law_residual(const std::vector<ThermoPoint>& sweep,
                                const ThermoSweep& driver);

} // namespace fewps

#endif
