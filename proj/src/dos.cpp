#include "fewps/dos.hpp"

#include <cmath>

#include "fewps/quadrature.hpp"

namespace fewps {
namespace {

constexpr int kGridSize = 1537;
constexpr double kPi = 3.14159265358979323846;

// half-width of {x : a x^2 + b x^4 <= e}, b > 0
double quartic_qmax(double a, double b, double e) {
    if (e <= 0.0) return 0.0;
    return std::sqrt((-a + std::sqrt(a * a + 4.0 * b * e)) / (2.0 * b));
}

// d/de of the measure 2*qmax(e)
double quartic_weight(double a, double b, double e) {
    const double r = std::sqrt(a * a + 4.0 * b * e);
    const double qm = quartic_qmax(a, b, e);
    if (qm == 0.0) return 0.0;
    // qmax' = (1/(2 qmax)) * d/de[(-a+r)/(2b)] = 1/(2 qmax r)
    return 2.0 / (2.0 * qm * r);
}

} // namespace

DensityOfStates DensityOfStates::build(const SystemModel& model, double e_max) {
    if (!(e_max > 0.0)) throw ContractViolation("DensityOfStates: e_max must be > 0");
    DensityOfStates d;
    d.e_max_ = e_max;

    const auto& mc = model.component_masses();
    const int M = model.dof();
    // momentum dofs: each contributes alpha = 1/2, k = sqrt(2 pi m)
    d.A_ = 0.5 * M;
    for (int i = 0; i < M; ++i) d.lnK_ += 0.5 * std::log(2.0 * kPi * mc[i]);

    double quart_a = 0.0, quart_b = 0.0;
    if (const auto* h = std::get_if<HarmonicPotential>(&model.potential())) {
        for (int i = 0; i < M; ++i)
            d.lnK_ += 0.5 * std::log(2.0 * kPi / mc[i]) - std::log(h->omega);
        d.A_ += 0.5 * M;
    } else if (const auto* fr = std::get_if<FreePotential>(&model.potential())) {
        d.lnK_ += std::log(fr->volume);
    } else {
        const auto& qp = std::get<QuarticPotential>(model.potential());
        if (qp.b == 0.0) {
            // pure quadratic well a q^2: measure 2 sqrt(e/a), alpha = 1/2
            d.lnK_ += M * (0.5 * std::log(kPi / qp.a));
            d.A_ += 0.5 * M;
        } else if (qp.a == 0.0) {
            // pure quartic well b q^4: measure 2 (e/b)^(1/4), alpha = 1/4
            d.lnK_ += M * (std::lgamma(0.25) + std::log(0.5) - 0.25 * std::log(qp.b));
            d.A_ += 0.25 * M;
        } else {
            d.quartic_dofs_ = M;
            quart_a = qp.a;
            quart_b = qp.b;
        }
    }
    d.nu_ = d.A_ + 0.5 * d.quartic_dofs_;
    if (d.quartic_dofs_ == 0) return d;

    // Build h_k(E) = g_k(E) E^(1 - nu_k) level by level; h is smooth and O(1).
    d.u_grid_.resize(kGridSize);
    const double umax = std::sqrt(e_max);
    for (int i = 0; i < kGridSize; ++i)
        d.u_grid_[i] = umax * static_cast<double>(i) / (kGridSize - 1);

    std::vector<double> h_prev(kGridSize, std::exp(d.lnK_ - std::lgamma(d.A_)));
    double nu_prev = d.A_;
    const double* gl_x = gauss64_nodes();
    const double* gl_w = gauss64_weights();

    for (int level = 1; level <= d.quartic_dofs_; ++level) {
        const double nu_cur = nu_prev + 0.5;
        std::vector<double> h_cur(kGridSize, 0.0);
        auto interp_prev = [&](double E) {
            const double u = std::sqrt(E);
            const double du = d.u_grid_[1];
            const double pos = u / du;
            int idx = static_cast<int>(pos);
            if (idx >= kGridSize - 1) idx = kGridSize - 2;
            const double w = pos - idx;
            return h_prev[idx] * (1.0 - w) + h_prev[idx + 1] * w;
        };
        for (int i = 1; i < kGridSize; ++i) {
            const double E = d.u_grid_[i] * d.u_grid_[i];
            // g_k(E) = int_0^E g_{k-1}(E-u) w(u) du, u = E sin^2(theta).
            // Integrand in reduced form:
            //   h_{k-1}(E cos^2) (E cos^2)^(nu_prev - 1) w(E sin^2) E sin(2 theta)
            // divided by E^(nu_cur - 1) at the end.
            double acc = 0.0;
            for (int j = 0; j < 64; ++j) {
                const double theta = 0.25 * kPi * (gl_x[j] + 1.0);
                const double st = std::sin(theta), ct = std::cos(theta);
                const double uu = E * st * st;
                const double vv = E * ct * ct;
                const double w_q = quartic_weight(quart_a, quart_b, uu);
                const double gk1 = interp_prev(vv) * std::pow(vv, nu_prev - 1.0);
                acc += gl_w[j] * gk1 * w_q * E * 2.0 * st * ct;
            }
            acc *= 0.25 * kPi;
            h_cur[i] = acc * std::pow(E, 1.0 - nu_cur);
        }
        // E -> 0 limit by quadratic extrapolation in u
        h_cur[0] = std::max(0.0, 2.0 * h_cur[1] - h_cur[2]);
        h_prev = std::move(h_cur);
        nu_prev = nu_cur;
    }
    d.h_vals_ = std::move(h_prev);

    // cumulative phase volume on the grid: Phi(u^2) with dE = 2 u du
    d.phi_vals_.assign(kGridSize, 0.0);
    for (int i = 1; i < kGridSize; ++i) {
        const double u0 = d.u_grid_[i - 1], u1 = d.u_grid_[i];
        // Simpson in u on [u0, u1] of g(u^2) * 2u; integrand ~ u^(2 nu - 1)
        auto f = [&](double u) {
            const double E = u * u;
            if (E <= 0.0) return 0.0;
            return d.interp_h(E) * std::pow(E, d.nu_ - 1.0) * 2.0 * u;
        };
        const double um = 0.5 * (u0 + u1);
        d.phi_vals_[i] =
            d.phi_vals_[i - 1] + (u1 - u0) / 6.0 * (f(u0) + 4.0 * f(um) + f(u1));
    }
    return d;
}

double DensityOfStates::interp_h(double E) const {
    const double u = std::sqrt(E);
    const double du = u_grid_[1];
    const double pos = u / du;
    int idx = static_cast<int>(pos);
    if (idx >= kGridSize - 1) idx = kGridSize - 2;
    const double w = pos - idx;
    return h_vals_[idx] * (1.0 - w) + h_vals_[idx + 1] * w;
}

double DensityOfStates::g(double E) const {
    if (E <= 0.0) return 0.0;
    if (analytic())
        return std::exp(lnK_ + (A_ - 1.0) * std::log(E) - std::lgamma(A_));
    if (E > e_max_)
        throw ContractViolation("DensityOfStates: evaluation above tabulated range");
    return interp_h(E) * std::pow(E, nu_ - 1.0);
}

double DensityOfStates::phase_volume(double E) const {
    if (E <= 0.0) return 0.0;
    if (analytic())
        return std::exp(lnK_ + A_ * std::log(E) - std::lgamma(A_ + 1.0));
    if (E > e_max_)
        throw ContractViolation("DensityOfStates: evaluation above tabulated range");
    const double u = std::sqrt(E);
    const double du = u_grid_[1];
    const double pos = u / du;
    int idx = static_cast<int>(pos);
    if (idx >= kGridSize - 1) idx = kGridSize - 2;
    const double w = pos - idx;
    return phi_vals_[idx] * (1.0 - w) + phi_vals_[idx + 1] * w;
}

} // namespace fewps
