#include "fewps/beta.hpp"

#include <cmath>
#include <string>

namespace fewps {

const char* family_name(const BetaFamily& f) {
    if (std::holds_alternative<ConstantBeta>(f)) return "constant";
    if (std::holds_alternative<LinearBeta>(f)) return "linear";
    if (std::holds_alternative<BreitWignerBeta>(f)) return "breit_wigner";
    return "fermi_bose";
}

void validate(const BetaFamily& f) {
    if (const auto* bw = std::get_if<BreitWignerBeta>(&f)) {
        if (!(bw->width > 0.0)) throw ContractViolation("breit_wigner: width must be > 0");
    } else if (const auto* fb = std::get_if<FermiBoseBeta>(&f)) {
        if (!(fb->beta0 > 0.0)) throw ContractViolation("fermi_bose: beta0 must be > 0");
        if (fb->a < -1.0) throw ContractViolation("fermi_bose: a must be >= -1");
    }
}

void check_domain(const BetaFamily& f, double H) {
    if (const auto* fb = std::get_if<FermiBoseBeta>(&f)) {
        if (fb->a < 0.0) {
            // need exp(beta0(H-mu)) + a > 0
            const double h_min = fb->mu + std::log(-fb->a) / fb->beta0;
            if (H <= h_min)
                throw DomainError("fermi_bose with a = " + std::to_string(fb->a) +
                                  ": H = " + std::to_string(H) +
                                  " at or below domain edge " + std::to_string(h_min));
        }
    }
}

double beta(const BetaFamily& f, double H) {
    check_domain(f, H);
    if (const auto* c = std::get_if<ConstantBeta>(&f)) return c->beta0;
    if (const auto* l = std::get_if<LinearBeta>(&f)) return l->beta1 + l->beta2 * H;
    if (const auto* bw = std::get_if<BreitWignerBeta>(&f)) {
        const double u = H - bw->resonance_energy;
        const double c2 = 0.25 * bw->width * bw->width;
        return 2.0 * u / (u * u + c2);
    }
    const auto& fb = std::get<FermiBoseBeta>(f);
    if (fb.a == 0.0) return fb.beta0;
    const double x = fb.beta0 * (H - fb.mu);
    if (x < -700.0) return fb.beta0 * std::exp(x) / fb.a; // a > 0 here (domain checked)
    return fb.beta0 / (1.0 + fb.a * std::exp(-x));
}

double dbeta_dH(const BetaFamily& f, double H) {
    check_domain(f, H);
    if (std::holds_alternative<ConstantBeta>(f)) return 0.0;
    if (const auto* l = std::get_if<LinearBeta>(&f)) return l->beta2;
    if (const auto* bw = std::get_if<BreitWignerBeta>(&f)) {
        const double u = H - bw->resonance_energy;
        const double c2 = 0.25 * bw->width * bw->width;
        const double den = u * u + c2;
        return 2.0 * (c2 - u * u) / (den * den);
    }
    const auto& fb = std::get<FermiBoseBeta>(f);
    if (fb.a == 0.0) return 0.0;
    const double x = fb.beta0 * (H - fb.mu);
    if (x < -700.0) return fb.beta0 * fb.beta0 * std::exp(x) / fb.a;
    if (x > 700.0) return 0.0;
    const double e = std::exp(-x);
    const double den = 1.0 + fb.a * e;
    return fb.a * fb.beta0 * fb.beta0 * e / (den * den);
}

double antiderivative_B(const BetaFamily& f, double H) {
    check_domain(f, H);
    if (const auto* c = std::get_if<ConstantBeta>(&f)) return c->beta0 * H;
    if (const auto* l = std::get_if<LinearBeta>(&f))
        return l->beta1 * H + 0.5 * l->beta2 * H * H;
    if (const auto* bw = std::get_if<BreitWignerBeta>(&f)) {
        const double u = H - bw->resonance_energy;
        return std::log(u * u + 0.25 * bw->width * bw->width);
    }
    const auto& fb = std::get<FermiBoseBeta>(f);
    const double x = fb.beta0 * (H - fb.mu);
    if (fb.a == 0.0) return x;
    if (x > 0.0) return x + std::log1p(fb.a * std::exp(-x)); // ln(e^x + a), stable
    return std::log(fb.a + std::exp(x));
}

double unnormalized_density(const BetaFamily& f, double H) {
    check_domain(f, H);
    if (const auto* bw = std::get_if<BreitWignerBeta>(&f)) {
        const double u = H - bw->resonance_energy;
        const double v = 1.0 / (u * u + 0.25 * bw->width * bw->width);
        return (v < 1e-304) ? 0.0 : v;
    }
    if (const auto* fb = std::get_if<FermiBoseBeta>(&f)) {
        if (fb->a != 0.0) {
            const double x = fb->beta0 * (H - fb->mu);
            if (x > 700.0) return 0.0;
            return 1.0 / (std::exp(x) + fb->a);
        }
    }
    const double B = antiderivative_B(f, H);
    return (B > 700.0) ? 0.0 : std::exp(-B);
}

double c_of_rho(const FermiBoseBeta& f, double rho) {
    if (rho < 0.0) throw ContractViolation("c_of_rho: rho must be >= 0");
    return -f.beta0 * (rho - f.a * rho * rho);
}

} // namespace fewps
