#include "fewps/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fewps/stats.hpp"

namespace fewps {

using json = nlohmann::ordered_json;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, int dof) {
    const std::string tmp = path + ".part";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ContractViolation("cannot open output file " + tmp);
        out << "t";
        for (int i = 0; i < dof; ++i) out << ",q" << i;
        for (int i = 0; i < dof; ++i) out << ",p" << i;
        out << ",H,f,Omega,P\n";
        for (const auto& s : traj.samples) {
            out << format_g17(s.t);
            for (double v : s.q) out << ',' << format_g17(v);
            for (double v : s.p) out << ',' << format_g17(v);
            out << ',' << format_g17(s.H) << ',' << format_g17(s.f) << ','
                << format_g17(s.Omega) << ',' << format_g17(s.P) << '\n';
        }
    }
    std::filesystem::rename(tmp, path);
}

namespace {

PhaseState random_state(const SystemModel& model, Rng& rng, double q_sigma, double p_sigma) {
    PhaseState s;
    s.q.resize(model.dof());
    s.p.resize(model.dof());
    for (auto& v : s.q) v = q_sigma * rng.normal();
    for (auto& v : s.p) v = p_sigma * rng.normal();
    return s;
}

// Deliberately wrong density family for the stationarity negative control:
// canonical against a non-constant flow family, a genuinely-curved linear
// family against a constant one.  (Mismatching the density rather than the
// flow keeps the check away from the flow's own gradient-critical sets.)
BetaFamily mismatch_family(const BetaFamily& fam, double mean_H) {
    const double b = std::max(1e-3, std::abs(beta(fam, mean_H)));
    if (std::holds_alternative<ConstantBeta>(fam))
        return LinearBeta{0.4 * b, 0.6 * b / (1.0 + std::abs(mean_H))};
    return ConstantBeta{0.4 * b};
}

} // namespace

VerifyReport run_verify(const RunConfig& cfg) {
    cfg.validate();
    const SystemModel model = cfg.make_model();
    const BaseForce& force = cfg.force;
    const BetaFamily& family = cfg.family;
    const std::uint64_t seed = cfg.ensemble.seed.value_or(1);

    VerifyReport rep;

    auto on_surface_states = [&](int n, std::uint64_t stream,
                                 const EnergyWindow* keep = nullptr) {
        Rng rng(seed, stream);
        std::vector<PhaseState> states;
        int attempts = 0;
        while (static_cast<int>(states.size()) < n && attempts < 200 * n) {
            ++attempts;
            PhaseState s = random_state(model, rng, cfg.ensemble.sampler.q_sigma,
                                        cfg.ensemble.sampler.p_sigma);
            try {
                PhaseState proj = project_to_surface(model, force, family, s);
                if (keep) {
                    const double H = model.hamiltonian(proj);
                    if (H < keep->lo || H > keep->hi) continue;
                }
                states.push_back(std::move(proj));
            } catch (const Error&) {
            }
        }
        if (static_cast<int>(states.size()) < n)
            throw ProjectionFailure("verify: too few projectable states (inside the "
                                    "energy window) after " + std::to_string(attempts) +
                                    " attempts; widen sampler sigmas or the window");
        return states;
    };

    if (cfg.verify.closure) {
        VerifyCheck c;
        c.name = "closure";
        c.enabled = true;
        c.tolerance = 1e-8;
        const auto states = on_surface_states(cfg.verify.n_states, 101);
        double worst = 0.0;
        int skipped = 0;
        for (const auto& s : states) {
            try {
                const double H = model.hamiltonian(s);
                const double b = beta(family, H);
                const double pw = projected_power(model, force, family, s);
                const double om = projected_omega_fd(model, force, family, s);
                worst = std::max(worst, std::abs(om - b * pw) / (std::abs(b * pw) + 1.0));
            } catch (const SingularityError&) {
                ++skipped; // gradient-critical state; report it, keep measuring
            }
        }
        c.measured = worst;
        c.pass = worst < c.tolerance;
        c.details = "max |Omega[F_new] - beta P[F_new]| / (|beta P| + 1) over " +
                    std::to_string(states.size()) + " on-surface states" +
                    (skipped ? " (" + std::to_string(skipped) + " singular skipped)" : "");
        rep.checks.push_back(c);
    }

    if (cfg.verify.gradient) {
        VerifyCheck c;
        c.name = "gradient";
        c.enabled = true;
        c.tolerance = 1e-5;
        Rng rng(seed, 202);
        double worst = 0.0;
        int kept = 0;
        for (int attempt = 0; kept < cfg.verify.n_states &&
                              attempt < 100 * cfg.verify.n_states;
             ++attempt) {
            PhaseState s = random_state(model, rng, cfg.ensemble.sampler.q_sigma,
                                        cfg.ensemble.sampler.p_sigma);
            try {
                check_domain(family, model.hamiltonian(s));
            } catch (const Error&) {
                continue;
            }
            ++kept;
            const auto g = constraint_gradients(model, force, family, s);
            PhaseState w = s;
            for (int i = 0; i < model.dof(); ++i) {
                const double hq = 1e-6 * (1.0 + std::abs(s.q[i]));
                w.q[i] = s.q[i] + hq;
                const double fp = constraint_value(model, force, family, w);
                w.q[i] = s.q[i] - hq;
                const double fm = constraint_value(model, force, family, w);
                w.q[i] = s.q[i];
                worst = std::max(worst, std::abs(g.Q[i] - (fp - fm) / (2.0 * hq)) /
                                            (1.0 + std::abs(g.Q[i])));
                const double hp = 1e-6 * (1.0 + std::abs(s.p[i]));
                w.p[i] = s.p[i] + hp;
                const double gp = constraint_value(model, force, family, w);
                w.p[i] = s.p[i] - hp;
                const double gm = constraint_value(model, force, family, w);
                w.p[i] = s.p[i];
                worst = std::max(worst, std::abs(g.P[i] - (gp - gm) / (2.0 * hp)) /
                                            (1.0 + std::abs(g.P[i])));
            }
        }
        c.measured = worst;
        c.pass = worst < c.tolerance;
        c.details = "max relative gap between analytic (P,Q) and central differences";
        rep.checks.push_back(c);
    }

    if (cfg.verify.stationarity) {
        const DensityModel dm = DensityModel::build(model, family, cfg.window);
        const auto states = on_surface_states(cfg.verify.n_states, 303, &dm.window());
        VerifyCheck c;
        c.name = "stationarity_matched";
        c.enabled = true;
        c.tolerance = 1e-6;
        double worst = 0.0;
        for (const auto& s : states)
            worst = std::max(worst,
                             stationarity_residual(dm, force, family, s).normalized);
        c.measured = worst;
        c.pass = worst < c.tolerance;
        c.details = "max normalized Liouville residual, matched density vs projected flow";
        rep.checks.push_back(c);

        VerifyCheck nc;
        nc.name = "stationarity_negative_control";
        nc.enabled = true;
        nc.tolerance = 1e-2;
        double mean_H = 0.0;
        for (const auto& s : states) mean_H += model.hamiltonian(s);
        mean_H /= static_cast<double>(states.size());
        const BetaFamily mis = mismatch_family(family, mean_H);
        const DensityModel dm_mis = DensityModel::build(model, mis, cfg.window);
        std::vector<double> vals;
        for (const auto& s : states) {
            try {
                vals.push_back(stationarity_residual(dm_mis, force, family, s).normalized);
            } catch (const Error&) {
            }
        }
        std::sort(vals.begin(), vals.end());
        nc.measured = vals.empty() ? 0.0 : vals[vals.size() / 2];
        nc.pass = nc.measured > nc.tolerance;
        nc.details = "median normalized residual of a mismatched density under the "
                     "projected flow; must exceed the tolerance";
        rep.checks.push_back(nc);
    }

    if (cfg.verify.pushforward) {
        VerifyCheck c;
        c.name = "pushforward";
        c.enabled = true;
        const DensityModel dm = DensityModel::build(model, family, cfg.window);
        const auto pc = pushforward_invariance(dm, force, cfg.integrator,
                                               cfg.verify.n_samples,
                                               cfg.verify.horizon_steps, seed + 404);
        c.measured = pc.ks_stat;
        c.tolerance = pc.ks_critical_99;
        c.pass = pc.pass;
        c.details = "two-sample KS of H before/after evolving analytic samples for " +
                    std::to_string(cfg.verify.horizon_steps) + " steps";
        rep.checks.push_back(c);
    }

    if (cfg.verify.histogram) {
        VerifyCheck c;
        c.name = "histogram";
        c.enabled = true;
        const DensityModel dm = DensityModel::build(model, family, cfg.window);
        const auto ens = run_ensemble(model, force, family, cfg.ensemble.sampler,
                                      cfg.integrator, cfg.ensemble.n_trajectories, seed);
        const auto hc = compare_histogram(dm, ens.pooled_H, cfg.verify.n_bins);
        c.measured = hc.chi_square;
        c.tolerance = chi_square_quantile(0.99, hc.dof);
        c.pass = c.measured <= c.tolerance;
        c.details = "chi-square of pooled trajectory H against the analytic energy "
                    "marginal (dof = " + std::to_string(hc.dof) + ")";
        rep.checks.push_back(c);
    }

    if (const auto* fb = std::get_if<FermiBoseBeta>(&family)) {
        // Document the coefficient-sign choice: the +exponent variant
        // beta0/(1 + alpha exp(+beta0 H)) has antiderivative
        // beta0 H - ln(1 + alpha exp(beta0 H)), whose density is
        // exp(-beta0 H) + alpha -- a constant-offset exponential, not
        // 1/(exp(beta0(H-mu)) + a), and it is not normalizable.
        const double alpha = fb->a * std::exp(-fb->beta0 * fb->mu);
        const double Hprobe = fb->mu + 1.0 / fb->beta0;
        const double target = unnormalized_density(family, Hprobe);
        const double variant = std::exp(-fb->beta0 * Hprobe) + alpha;
        rep.notes = "fermi_bose uses beta(H) = beta0/(1 + a exp(-beta0(H-mu))), the "
                    "unique coefficient whose antiderivative reproduces the density "
                    "1/(exp(beta0(H-mu)) + a). The +exponent variant integrates to the "
                    "density exp(-beta0 H) + alpha (alpha = " + format_g17(alpha) +
                    "), which is non-normalizable and differs from the target at "
                    "H = mu + 1/beta0 by " + format_g17(std::abs(variant - target)) +
                    " (target " + format_g17(target) + ", variant " + format_g17(variant) +
                    ").";
    }
    return rep;
}

std::string verify_report_json(const VerifyReport& report) {
    json j;
    j["checks"] = json::array();
    for (const auto& c : report.checks) {
        json jc;
        jc["name"] = c.name;
        jc["enabled"] = c.enabled;
        jc["pass"] = c.pass;
        jc["measured"] = c.measured;
        jc["tolerance"] = c.tolerance;
        jc["details"] = c.details;
        j["checks"].push_back(jc);
    }
    j["all_pass"] = report.all_pass();
    if (!report.notes.empty()) j["notes"] = report.notes;
    return j.dump(2) + "\n";
}

std::string simulate_summary_json(const SimulateSummary& s) {
    json j;
    j["n_trajectories"] = s.n_trajectories;
    j["n_steps"] = s.n_steps;
    j["mean_H"] = s.mean_H;
    j["max_constraint_drift"] = s.max_constraint_drift;
    j["final_abs_f"] = s.final_abs_f;
    j["final_H"] = s.final_H;
    return j.dump(2) + "\n";
}

std::string thermo_csv(const std::vector<ThermoPoint>& pts) {
    std::string out;
    if (pts.empty()) return out;
    std::vector<std::string> names;
    for (const auto& [k, v] : pts.front().x) {
        (void)v;
        names.push_back(k);
    }
    for (const auto& n : names) out += n + ",";
    out += "U,S,Z,T";
    for (const auto& n : names) out += ",X_" + n;
    out += "\n";
    for (const auto& p : pts) {
        for (const auto& n : names) out += format_g17(p.x.at(n)) + ",";
        out += format_g17(p.U) + "," + format_g17(p.S) + "," + format_g17(p.Z) + "," +
               format_g17(p.T);
        for (const auto& n : names) out += "," + format_g17(p.X.at(n));
        out += "\n";
    }
    return out;
}

std::string thermo_report_json(const std::vector<ThermoPoint>& pts, const LawResiduals& lr) {
    json j;
    j["points"] = json::array();
    for (const auto& p : pts) {
        json jp;
        jp["x"] = p.x;
        jp["U"] = p.U;
        jp["S"] = p.S;
        jp["Z"] = p.Z;
        jp["T"] = p.T;
        jp["X"] = p.X;
        j["points"].push_back(jp);
    }
    j["first_law_residuals"] = lr.first_law;
    if (!lr.first_law.empty())
        j["max_first_law_residual"] =
            *std::max_element(lr.first_law.begin(), lr.first_law.end());
    if (!lr.maxwell_asymmetry.empty()) {
        j["maxwell_asymmetry"]["params"] = lr.params;
        j["maxwell_asymmetry"]["matrix"] = lr.maxwell_asymmetry;
        j["maxwell_asymmetry"]["note"] =
            "reported diagnostic; the forces are non-potential in general";
    }
    return j.dump(2) + "\n";
}

std::string error_envelope(const std::string& kind, const std::string& message) {
    json j;
    j["error"]["type"] = kind;
    j["error"]["message"] = message;
    return j.dump() + "\n";
}

} // namespace fewps
