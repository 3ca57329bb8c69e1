#ifndef FEWPS_DOS_HPP
#define FEWPS_DOS_HPP

#include <vector>

#include "fewps/phase.hpp"

namespace fewps {

/// Density of states g(E) of a separable model, reducing phase-space integrals
/// to one-dimensional energy integrals.
///
/// Kinetic, harmonic and free degrees of freedom combine exactly into a
/// power-law part K E^(A-1)/Gamma(A); each quartic position degree of freedom
/// adds one numeric convolution, tabulated on a sqrt-spaced grid over
/// [0, e_max].
class DensityOfStates {
public:
    static DensityOfStates build(const SystemModel& model, double e_max);

    bool analytic() const { return quartic_dofs_ == 0; }
    /// leading exponent: g ~ E^(nu-1) near 0
    double exponent() const { return nu_; }
    double e_max() const { return e_max_; }

    double g(double E) const;
    /// Phi(E) = integral of g from 0 to E (phase volume below energy E)
    double phase_volume(double E) const;

private:
    double lnK_ = 0.0;  // log coefficient of the power-law part
    double A_ = 0.0;    // power-law exponent sum
    double nu_ = 0.0;   // total exponent including quartic dofs
    int quartic_dofs_ = 0;
    double e_max_ = 0.0;
    // tabulated reduced values h(E) = g(E) E^(1-nu) on u = sqrt(E) grid
    std::vector<double> u_grid_;
    std::vector<double> h_vals_;
    std::vector<double> phi_vals_; // Phi at grid points

    double interp_h(double E) const;
};

} // namespace fewps

#endif
