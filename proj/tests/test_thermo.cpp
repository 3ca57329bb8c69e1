#include <doctest.h>

#include <cmath>

#include "fewps/quadrature.hpp"
#include "fewps/rng.hpp"
#include "fewps/thermo.hpp"

using namespace fewps;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_CASE("internal energy closed forms") {
    const double kT = 0.8, w = 1.3;
    // harmonic: U = Nd kT
    for (int N : {1, 3}) {
        SystemModel m(N, 2, std::vector<double>(N, 1.0), HarmonicPotential{w});
        const DensityModel dm = DensityModel::build(m, ConstantBeta{1.0 / kT});
        CHECK(internal_energy(dm) == doctest::Approx(N * 2 * kT).epsilon(1e-6));
    }
    // free particles in a box: U = (Nd/2) kT
    SystemModel mf(2, 3, {1.0, 2.0}, FreePotential{4.0});
    const DensityModel dmf = DensityModel::build(mf, ConstantBeta{1.0 / kT});
    CHECK(internal_energy(dmf) == doctest::Approx(0.5 * 6 * kT).epsilon(1e-6));
    // delta-narrow window pins U at the window center
    SystemModel m1(1, 1, {1.0}, HarmonicPotential{1.0});
    const DensityModel dmn =
        DensityModel::build(m1, ConstantBeta{1.25}, EnergyWindow{1.9999, 2.0001});
    CHECK(internal_energy(dmn) == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("thermodynamic force") {
    const double kT = 0.8, w = 1.3;
    SystemModel m(2, 3, {1.0, 1.0}, HarmonicPotential{w}, {{"label", 3.0}});
    const DensityModel dm = DensityModel::build(m, ConstantBeta{1.0 / kT});
    CHECK(thermodynamic_force(dm, "omega") ==
          doctest::Approx(-6.0 * kT / w).epsilon(1e-6));
    CHECK(thermodynamic_force(dm, "label") == 0.0);
    CHECK_THROWS_AS(thermodynamic_force(dm, "zzz"), LookupError);

    // quartic X_b against the canonical free-energy derivative oracle
    // X_b = (1/beta) d ln Z / db with Z factorized per degree of freedom
    const double beta0 = 1.25, a = 0.5, b = 0.3, mass = 1.0;
    SystemModel mq(1, 2, {mass}, QuarticPotential{a, b});
    const DensityModel dmq = DensityModel::build(mq, ConstantBeta{beta0});
    auto lnq = [&](double bb) {
        const auto r = integrate(
            [&](double q) { return std::exp(-beta0 * (a * q * q + bb * q * q * q * q)); },
            -30.0, 30.0, 1e-12, 1e-14);
        return std::log(r.value);
    };
    const double h = 1e-4;
    const double oracle = (2.0 / beta0) * (lnq(b + h) - lnq(b - h)) / (2.0 * h);
    const double got = thermodynamic_force(dmq, "b");
    CHECK(got == doctest::Approx(oracle).epsilon(2e-3));
}

TEST_CASE("entropy closed forms and identities") {
    const double kT = 0.8, w = 1.3;
    SystemModel m(1, 1, {1.0}, HarmonicPotential{w});
    const DensityModel dm = DensityModel::build(m, ConstantBeta{1.0 / kT});
    CHECK(entropy(dm) == doctest::Approx(1.0 + std::log(kTwoPi * kT / w)).epsilon(1e-6));

    // uniform density over a finite window: S = ln(phase volume)
    const DensityModel dmu =
        DensityModel::build(m, ConstantBeta{0.0}, EnergyWindow{0.0, 2.0});
    CHECK(entropy(dmu) == doctest::Approx(std::log(kTwoPi * 2.0 / w)).epsilon(1e-9));

    // dS/dT = (1/T) dU/dT at fixed omega
    const double h = 1e-4;
    auto SU = [&](double T) {
        const DensityModel d = DensityModel::build(m, ConstantBeta{1.0 / T});
        return std::pair<double, double>(entropy(d), internal_energy(d));
    };
    const auto [Sp, Up] = SU(kT + h);
    const auto [Sm, Um] = SU(kT - h);
    CHECK((Sp - Sm) / (2 * h) ==
          doctest::Approx((Up - Um) / (2 * h) / kT).epsilon(1e-5));

    // fermi-bose with a = 0 goes through the generic S_N construction and
    // must reproduce the canonical Gibbs value exactly
    SystemModel m3(1, 3, {1.0}, HarmonicPotential{w});
    const DensityModel dmc = DensityModel::build(m3, ConstantBeta{1.25});
    const DensityModel dmfb = DensityModel::build(m3, FermiBoseBeta{1.25, 0.0, 0.0});
    CHECK(entropy(dmfb, 1.0 / 1.25) == doctest::Approx(entropy(dmc)).epsilon(1e-6));

    // Monte Carlo cross-check of S = -<ln rho> for the canonical family
    Rng rng(61);
    const DensityModel dmm = DensityModel::build(m3, ConstantBeta{1.25});
    double acc = 0.0, acc2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const PhaseState s = dmm.sample_state(rng);
        const double l = -std::log(dmm.density_at(s));
        acc += l;
        acc2 += l * l;
    }
    const double mean = acc / n;
    const double sem = std::sqrt((acc2 / n - mean * mean) / n);
    CHECK(std::abs(entropy(dmm) - mean) < 3.0 * sem + 1e-6);

    // breit-wigner: full window straddling the resonance is flagged
    const DensityModel dbw_full = DensityModel::build(
        m3, BreitWignerBeta{2.0, 1.5}, EnergyWindow{0.5, 6.0});
    CHECK_THROWS_AS(entropy(dbw_full, 1.0), DomainError);
    const DensityModel dbw_half = DensityModel::build(
        m3, BreitWignerBeta{2.0, 1.5}, EnergyWindow{2.0, 9.0});
    CHECK(std::isfinite(entropy(dbw_half, 1.0)));
    // lower half-window works too
    const DensityModel dbw_lo = DensityModel::build(
        m3, BreitWignerBeta{2.0, 1.5}, EnergyWindow{0.2, 2.0});
    CHECK(std::isfinite(entropy(dbw_lo, 1.0)));
    // linear family needs an explicit temperature
    const DensityModel dlin = DensityModel::build(m3, LinearBeta{0.8, 0.3});
    CHECK_THROWS_AS(entropy(dlin), ContractViolation);
    CHECK(std::isfinite(entropy(dlin, 1.0)));
}

TEST_CASE("heat increment") {
    const double kT = 0.8, w = 1.3;
    SystemModel m(2, 2, {1.0, 1.0}, HarmonicPotential{w});
    const DensityModel dm = DensityModel::build(m, ConstantBeta{1.0 / kT});
    CHECK(heat_increment(dm, dm) == doctest::Approx(0.0));

    // temperature-only step: delta Q = dU = Nd k dT + O(dT^2)
    const double dT = 1e-3;
    const DensityModel dm2 = DensityModel::build(m, ConstantBeta{1.0 / (kT + dT)});
    const double dQ = heat_increment(dm, dm2);
    CHECK(dQ == doctest::Approx(internal_energy(dm2) - internal_energy(dm)).epsilon(1e-10));
    CHECK(std::abs(dQ - 4.0 * dT) < 50.0 * dT * dT);

    // omega step at fixed T: residual dQ - (dU + X dw) is second order
    auto resid = [&](double dw) {
        SystemModel mb(2, 2, {1.0, 1.0}, HarmonicPotential{w + dw});
        const DensityModel dmb = DensityModel::build(mb, ConstantBeta{1.0 / kT});
        const double q = heat_increment(dm, dmb);
        const double dU = internal_energy(dmb) - internal_energy(dm);
        const double Xm = 0.5 * (thermodynamic_force(dm, "omega") +
                                 thermodynamic_force(dmb, "omega"));
        return std::abs(q - (dU + Xm * dw));
    };
    const double r1 = resid(2e-3), r2 = resid(1e-3);
    CHECK(r1 / r2 > 3.0);

    // contract violations
    SystemModel mq(2, 2, {1.0, 1.0}, QuarticPotential{0.5, 0.3});
    const DensityModel dmq = DensityModel::build(mq, ConstantBeta{1.25});
    SystemModel mq2(2, 2, {1.0, 1.0}, QuarticPotential{0.5, 0.31});
    const DensityModel dmq2 = DensityModel::build(mq2, ConstantBeta{1.25});
    CHECK_THROWS_AS(heat_increment(dmq, dmq2), ContractViolation);
    const DensityModel dmw =
        DensityModel::build(m, ConstantBeta{1.0 / kT}, EnergyWindow{0.0, 9.0});
    CHECK_THROWS_AS(heat_increment(dm, dmw), ContractViolation);
}

TEST_CASE("first-law residual on sweeps") {
    SystemModel m(1, 3, {1.0}, HarmonicPotential{1.0});
    const ThermoSweep driver(m, ConstantBeta{1.25});

    // canonical harmonic T-sweep at dT/T = 1e-3: residual well below 1e-4 |dU|
    {
        const auto pts = driver.run({"T"}, {0.8}, {0.8 * (1.0 + 8e-3)}, 8);
        const auto lr = first_law_residual(pts);
        for (std::size_t i = 0; i < lr.first_law.size(); ++i) {
            const double dU = pts[i + 1].U - pts[i].U;
            CHECK(lr.first_law[i] < 1e-4 * std::abs(dU));
        }
    }

    // constant-x sweep: all residuals identically zero
    {
        const auto pts = driver.run({"T"}, {0.8}, {0.8}, 4);
        const auto lr = first_law_residual(pts);
        for (double r : lr.first_law) CHECK(r == 0.0);
    }

    // joint (T, omega) sweep: halving the step quarters the residual
    {
        auto max_resid = [&](int steps) {
            const auto pts =
                driver.run({"T", "omega"}, {0.8, 1.0}, {0.8 * 1.02, 0.97}, steps);
            const auto lr = first_law_residual(pts);
            double worst = 0.0;
            for (double r : lr.first_law) worst = std::max(worst, r);
            return worst;
        };
        const double r8 = max_resid(8), r16 = max_resid(16);
        CHECK(r8 / r16 > 3.5);
    }

    // maxwell asymmetry diagnostic: |dX_omega/dT - dX_T/domega| = Nd/omega
    {
        const auto pts = driver.run({"T", "omega"}, {0.8, 1.0}, {0.82, 1.05}, 4);
        const auto lr = first_law_residual(pts, driver);
        REQUIRE(lr.maxwell_asymmetry.size() == 2);
        const double w_mid = 1.025;
        // X_omega = -Nd T / omega, so dX_omega/dT = -Nd/omega and X_T = 0
        CHECK(lr.maxwell_asymmetry[0][1] ==
              doctest::Approx(3.0 / w_mid).epsilon(1e-3));
    }

    CHECK_THROWS_AS(first_law_residual(std::vector<ThermoPoint>(2)), ContractViolation);
}

TEST_CASE("fermi-bose sweep: U decreases with beta0") {
    SystemModel m(1, 3, {1.0}, HarmonicPotential{1.3});
    const ThermoSweep driver(m, FermiBoseBeta{1.0, 0.4, 1.0});
    const auto pts = driver.run({"beta0"}, {0.8}, {2.0}, 6);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].U < pts[i - 1].U);
}
