#include "fewps/thermo.hpp"

#include <cmath>

#include "fewps/quadrature.hpp"

namespace fewps {
namespace {

double expect_energy_weight(const DensityModel& dm,
                            const std::function<double(double)>& w) {
    const auto& dos = dm.dos();
    const auto& fam = dm.family();
    auto f = [&](double E) { return w(E) * dos.g(E) * unnormalized_density(fam, E); };
    return integrate(f, dm.window().lo, dm.window().hi, 1e-14, 1e-300).value / dm.Z();
}

} // namespace

double internal_energy(const DensityModel& dm) {
    const double u = expect_energy_weight(dm, [](double E) { return E; });
    if (!std::isfinite(u)) throw DivergenceError("internal energy is not finite");
    return u;
}

double thermodynamic_force(const DensityModel& dm, const std::string& k) {
    const auto& model = dm.model();
    const auto& params = model.params();
    if (params.find(k) == params.end())
        throw LookupError("unknown parameter '" + k + "'");

    if (const auto* h = std::get_if<HarmonicPotential>(&model.potential())) {
        if (k == "omega") {
            // X = (1/Z) int exp(-B) dPhi/domega dE with dPhi/domega = -(M/omega) Phi
            const auto& dos = dm.dos();
            const auto& fam = dm.family();
            auto f = [&](double E) {
                return unnormalized_density(fam, E) * dos.phase_volume(E);
            };
            const double v =
                integrate(f, dm.window().lo, dm.window().hi, 1e-14, 1e-300).value;
            return -(model.dof() / h->omega) * v / dm.Z();
        }
    } else if (const auto* qp = std::get_if<QuarticPotential>(&model.potential())) {
        if (k == "a" || k == "b") {
            const double v0 = (k == "a") ? qp->a : qp->b;
            const double h_fd = 1e-2 * (1.0 + std::abs(v0));
            auto rebuilt = [&](double v) {
                QuarticPotential q2 = *qp;
                (k == "a" ? q2.a : q2.b) = v;
                SystemModel m2(model.n_particles(), model.dim(), model.masses(), q2);
                return DensityOfStates::build(m2, dm.window().hi * 1.0000001);
            };
            const DensityOfStates dp = rebuilt(v0 + h_fd);
            const DensityOfStates dmns = rebuilt(std::max(0.0, v0 - h_fd));
            const double denom = (v0 - h_fd >= 0.0) ? 2.0 * h_fd : h_fd + v0;
            const auto& fam = dm.family();
            auto f = [&](double E) {
                return unnormalized_density(fam, E) *
                       (dp.phase_volume(E) - dmns.phase_volume(E)) / denom;
            };
            return integrate(f, dm.window().lo, dm.window().hi, 1e-9, 1e-300).value / dm.Z();
        }
    }
    return 0.0; // parameter does not enter H
}

double entropy(const DensityModel& dm, std::optional<double> temperature) {
    const auto& fam = dm.family();
    if (std::holds_alternative<ConstantBeta>(fam)) {
        // Gibbs form: S = <B> + ln Z = -<ln rho>
        const double meanB =
            expect_energy_weight(dm, [&](double E) { return antiderivative_B(fam, E); });
        return meanB + std::log(dm.Z());
    }

    double T;
    if (temperature) T = *temperature;
    else if (const auto* fb = std::get_if<FermiBoseBeta>(&fam)) T = 1.0 / fb->beta0;
    else
        throw ContractViolation(std::string("entropy for family '") + family_name(fam) +
                                "' needs an explicit temperature");
    if (!(T > 0.0)) throw ContractViolation("entropy: temperature must be > 0");

    // Inversion branch of rho(H): +1 when the density decays upward in energy.
    double branch = +1.0;
    if (const auto* bw = std::get_if<BreitWignerBeta>(&fam)) {
        const double E0 = bw->resonance_energy;
        if (dm.window().lo < E0 && dm.window().hi > E0)
            throw DomainError("entropy for breit_wigner needs a half-window on one side "
                              "of the resonance energy " + std::to_string(E0));
        branch = (dm.window().lo >= E0) ? +1.0 : -1.0;
    }

    // S = (ln Z - 1) + (1/(T Z)) int_window g(E) I(E) dE,
    // I(E) = int to the rho->0 end of eps beta(eps) exp(-B(eps)) d eps.
    auto tail = [&](double E) {
        auto f = [&](double eps) {
            const double signed_eps = branch > 0 ? eps : -eps;
            return signed_eps * beta(fam, signed_eps) *
                   unnormalized_density(fam, signed_eps);
        };
        // integrate from E toward the rho -> 0 end (upward on the upper branch,
        // downward on the lower one, where the substitution flips orientation)
        return branch * integrate_to_inf(f, branch > 0 ? E : -E, 1e-9, 1e-300).value;
    };
    const auto& dos = dm.dos();
    auto outer = [&](double E) { return dos.g(E) * tail(E); };
    const double v = integrate(outer, dm.window().lo, dm.window().hi, 1e-8, 1e-300).value;
    const double S = (std::log(dm.Z()) - 1.0) + v / (T * dm.Z());
    if (!std::isfinite(S)) throw DivergenceError("entropy integral is not finite");
    return S;
}

double heat_increment(const DensityModel& dm, const DensityModel& dm_next) {
    const auto& m1 = dm.model();
    const auto& m2 = dm_next.model();
    if (m1.n_particles() != m2.n_particles() || m1.dim() != m2.dim() ||
        m1.masses() != m2.masses())
        throw ContractViolation("heat_increment: particle structure must match");
    if (dm.explicit_window() != dm_next.explicit_window() ||
        (dm.explicit_window() && (dm.window().lo != dm_next.window().lo ||
                                  dm.window().hi != dm_next.window().hi)))
        throw ContractViolation("heat_increment: energy window mismatch");

    const auto* h1 = std::get_if<HarmonicPotential>(&m1.potential());
    const auto* h2 = std::get_if<HarmonicPotential>(&m2.potential());
    const double U1 = internal_energy(dm);
    const double U2 = internal_energy(dm_next);

    if (h1 && h2) {
        if (h1->omega == h2->omega) return U2 - U1;
        // <H_mid> under each density, using <K|E> = <U_pot|E> = E/2 on
        // harmonic shells: <H_mid> = U/2 (1 + (omega_mid/omega)^2)
        const double wm = 0.5 * (h1->omega + h2->omega);
        const double r1 = wm / h1->omega, r2 = wm / h2->omega;
        return 0.5 * U2 * (1.0 + r2 * r2) - 0.5 * U1 * (1.0 + r1 * r1);
    }
    if (m1.potential().index() != m2.potential().index())
        throw ContractViolation("heat_increment: potential families must match");
    if (const auto* q1 = std::get_if<QuarticPotential>(&m1.potential())) {
        const auto& q2 = std::get<QuarticPotential>(m2.potential());
        if (q1->a != q2.a || q1->b != q2.b)
            throw ContractViolation("heat_increment: quartic coefficient steps are not "
                                    "supported by the 1-D energy reduction");
    }
    return U2 - U1; // H is the same phase-space function in both points
}

ThermoSweep::ThermoSweep(SystemModel base_model, BetaFamily base_family,
                         std::optional<EnergyWindow> window,
                         std::optional<double> temperature)
    : base_model_(std::move(base_model)),
      base_family_(std::move(base_family)),
      window_(window),
      temperature_(temperature) {}

std::pair<SystemModel, BetaFamily> apply_sweep_params(
    const SystemModel& base, const BetaFamily& family,
    const std::map<std::string, double>& x) {
    PotentialSpec pot = base.potential();
    BetaFamily fam = family;
    try {
        for (const auto& [name, value] : x) {
            if (name == "T") {
                if (auto* c = std::get_if<ConstantBeta>(&fam)) {
                    if (!(value > 0.0)) throw ContractViolation("sweep: T must be > 0");
                    c->beta0 = 1.0 / value;
                } else
                    throw ContractViolation("sweep parameter 'T' applies to the constant "
                                            "family; sweep 'beta0' instead");
            } else if (name == "omega") {
                std::get<HarmonicPotential>(pot).omega = value;
            } else if (name == "a") {
                std::get<QuarticPotential>(pot).a = value;
            } else if (name == "b") {
                std::get<QuarticPotential>(pot).b = value;
            } else if (name == "beta0") {
                if (auto* c = std::get_if<ConstantBeta>(&fam)) c->beta0 = value;
                else std::get<FermiBoseBeta>(fam).beta0 = value;
            } else if (name == "mu") {
                std::get<FermiBoseBeta>(fam).mu = value;
            } else if (name == "a_stat") {
                std::get<FermiBoseBeta>(fam).a = value;
            } else if (name == "beta1") {
                std::get<LinearBeta>(fam).beta1 = value;
            } else if (name == "beta2") {
                std::get<LinearBeta>(fam).beta2 = value;
            } else if (name == "resonance_energy") {
                std::get<BreitWignerBeta>(fam).resonance_energy = value;
            } else if (name == "width") {
                std::get<BreitWignerBeta>(fam).width = value;
            } else {
                throw LookupError("unknown sweep parameter '" + name + "'");
            }
        }
    } catch (const std::bad_variant_access&) {
        throw ContractViolation("sweep parameter does not apply to the configured "
                                "potential/family");
    }
    return {SystemModel(base.n_particles(), base.dim(), base.masses(), pot,
                        base.extra_params()),
            fam};
}

DensityModel ThermoSweep::density_model_at(const std::map<std::string, double>& x) const {
    auto [model, fam] = apply_sweep_params(base_model_, base_family_, x);
    return DensityModel::build(std::move(model), fam, window_);
}

ThermoPoint ThermoSweep::at(const std::map<std::string, double>& x) const {
    const DensityModel dm = density_model_at(x);
    ThermoPoint pt;
    pt.x = x;
    pt.Z = dm.Z();
    pt.U = internal_energy(dm);

    if (auto it = x.find("T"); it != x.end()) pt.T = it->second;
    else if (temperature_) pt.T = *temperature_;
    else if (const auto* c = std::get_if<ConstantBeta>(&dm.family())) pt.T = 1.0 / c->beta0;
    else if (const auto* fb = std::get_if<FermiBoseBeta>(&dm.family())) pt.T = 1.0 / fb->beta0;
    else
        throw ContractViolation("sweep: no temperature rule for this family; "
                                "supply 'temperature'");

    pt.S = entropy(dm, pt.T);
    for (const auto& [name, value] : x) {
        (void)value;
        if (name == "T" || dm.model().params().find(name) == dm.model().params().end())
            pt.X[name] = 0.0;
        else
            pt.X[name] = thermodynamic_force(dm, name);
    }
    return pt;
}

std::vector<ThermoPoint> ThermoSweep::run(const std::vector<std::string>& params,
                                          const std::vector<double>& from,
                                          const std::vector<double>& to, int steps) const {
    if (params.size() != from.size() || params.size() != to.size())
        throw ContractViolation("sweep: params/from/to sizes differ");
    if (steps < 0) throw ContractViolation("sweep: steps must be >= 0");
    std::vector<ThermoPoint> pts;
    for (int i = 0; i <= steps; ++i) {
        const double t = steps == 0 ? 0.0 : static_cast<double>(i) / steps;
        std::map<std::string, double> x;
        for (std::size_t k = 0; k < params.size(); ++k)
            x[params[k]] = from[k] + t * (to[k] - from[k]);
        pts.push_back(at(x));
    }
    return pts;
}

LawResiduals first_law_residual(const std::vector<ThermoPoint>& sweep) {
    if (sweep.size() < 3)
        throw ContractViolation("first_law_residual: need at least 3 sweep points");
    LawResiduals lr;
    for (const auto& [name, v] : sweep.front().x) {
        (void)v;
        lr.params.push_back(name);
    }
    for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
        const auto& p0 = sweep[i];
        const auto& p1 = sweep[i + 1];
        const double Tm = 0.5 * (p0.T + p1.T);
        double work = 0.0;
        for (const auto& name : lr.params) {
            const double Xm = 0.5 * (p0.X.at(name) + p1.X.at(name));
            work += Xm * (p1.x.at(name) - p0.x.at(name));
        }
        lr.first_law.push_back(std::abs((p1.U - p0.U) - (Tm * (p1.S - p0.S) - work)));
    }
    return lr;
}

LawResiduals first_law_residual(const std::vector<ThermoPoint>& sweep,
                                const ThermoSweep& driver) {
    LawResiduals lr = first_law_residual(sweep);
    // Maxwell cross-derivative diagnostic at the path midpoint (reported only;
    // the forces are non-potential in general).
    const auto& mid = sweep[sweep.size() / 2].x;
    const std::size_t n = lr.params.size();
    lr.maxwell_asymmetry.assign(n, std::vector<double>(n, 0.0));
    if (n < 2) return lr;
    auto X_at = [&](const std::map<std::string, double>& x, const std::string& k) {
        const DensityModel dm = driver.density_model_at(x);
        if (k == "T" || dm.model().params().find(k) == dm.model().params().end()) return 0.0;
        return thermodynamic_force(dm, k);
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::string &pi = lr.params[i], &pj = lr.params[j];
            const double hi = 1e-3 * (1.0 + std::abs(mid.at(pi)));
            const double hj = 1e-3 * (1.0 + std::abs(mid.at(pj)));
            auto shifted = [&](const std::string& name, double h) {
                auto x = mid;
                x[name] += h;
                return x;
            };
            const double dXi_dj =
                (X_at(shifted(pj, hj), pi) - X_at(shifted(pj, -hj), pi)) / (2.0 * hj);
            const double dXj_di =
                (X_at(shifted(pi, hi), pj) - X_at(shifted(pi, -hi), pj)) / (2.0 * hi);
            lr.maxwell_asymmetry[i][j] = lr.maxwell_asymmetry[j][i] =
                std::abs(dXi_dj - dXj_di);
        }
    }
    return lr;
}

} // namespace fewps
