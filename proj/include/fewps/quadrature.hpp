#ifndef FEWPS_QUADRATURE_HPP
#define FEWPS_QUADRATURE_HPP

#include <cmath>
#include <functional>

#include "fewps/errors.hpp"

namespace fewps {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // estimate
};

/// Adaptive Gauss-Kronrod (G7,K15) on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, double abs_tol = 1e-13,
                     int max_depth = 48);

/// Integral over [a, +inf) via t -> a + t/(1-t).  Throws DivergenceError when
/// the transformed integrand fails a tail-decay check.
QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            double rel_tol = 1e-10, double abs_tol = 1e-13);

/// Nodes/weights of the 64-point Gauss-Legendre rule on [-1, 1].
const double* gauss64_nodes();
const double* gauss64_weights();

} // namespace fewps

#endif
