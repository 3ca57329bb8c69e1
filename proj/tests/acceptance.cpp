// Acceptance suite.  Each criterion prints one [PASS]/[FAIL] line with the
// measured value and its tolerance; the exit code is the number of failures.
//
// Criteria 1 and 4 measure pointwise identities that the constraint
// projection does not satisfy for interacting potentials (see README,
// "Verification results"): they are implemented exactly as specified and
// report the measured gap rather than a softened proxy.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "fewps/config.hpp"
#include "fewps/distribution.hpp"
#include "fewps/quadrature.hpp"
#include "fewps/report.hpp"
#include "fewps/stats.hpp"
#include "fewps/thermo.hpp"

using namespace fewps;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass, double measured,
            double tolerance, const std::string& extra = "") {
    std::printf("[%s] criterion %d: %s  measured=%.6g  tolerance=%.6g%s%s\n",
                pass ? "PASS" : "FAIL", criterion, what.c_str(), measured, tolerance,
                extra.empty() ? "" : "  ", extra.c_str());
    if (!pass) ++g_failures;
}

struct Preset {
    std::string name;
    RunConfig cfg;
    SystemModel model;
};

std::vector<Preset> shipped_presets() {
    std::vector<Preset> out;
    for (const auto& name :
         {"isokinetic-harmonic", "canonical-dissipative-quartic", "breit-wigner-windowed",
          "fermi-bose-fermi", "fermi-bose-bose"}) {
        RunConfig cfg = parse_config(preset_text(name));
        SystemModel model = cfg.make_model();
        out.push_back({name, std::move(cfg), std::move(model)});
    }
    return out;
}

std::vector<PhaseState> on_surface_states(const Preset& p, int n, std::uint64_t stream,
                                          const EnergyWindow* keep = nullptr) {
    Rng rng(*p.cfg.ensemble.seed, stream);
    std::vector<PhaseState> states;
    int attempts = 0;
    while (static_cast<int>(states.size()) < n && attempts < 500 * n) {
        ++attempts;
        PhaseState s;
        s.q.resize(p.model.dof());
        s.p.resize(p.model.dof());
        for (auto& v : s.q) v = p.cfg.ensemble.sampler.q_sigma * rng.normal();
        for (auto& v : s.p) v = p.cfg.ensemble.sampler.p_sigma * rng.normal();
        try {
            PhaseState proj = project_to_surface(p.model, p.cfg.force, p.cfg.family, s);
            if (keep) {
                const double H = p.model.hamiltonian(proj);
                if (H < keep->lo || H > keep->hi) continue;
            }
            states.push_back(std::move(proj));
        } catch (const Error&) {
        }
    }
    return states;
}

// ---------------------------------------------------------------- criterion 1
void criterion_closure() {
    for (const auto& p : shipped_presets()) {
        const auto states = on_surface_states(p, 100, 11);
        double worst = 0.0;
        for (const auto& s : states) {
            const double H = p.model.hamiltonian(s);
            const double b = beta(p.cfg.family, H);
            const double pw = projected_power(p.model, p.cfg.force, p.cfg.family, s);
            const double om = projected_omega_fd(p.model, p.cfg.force, p.cfg.family, s);
            worst = std::max(worst, std::abs(om - b * pw) / (std::abs(b * pw) + 1.0));
        }
        report(1, "constraint closure of the projected force, preset " + p.name,
               worst < 1e-8, worst, 1e-8,
               "(states=" + std::to_string(states.size()) + ")");
    }
}

// ---------------------------------------------------------------- criterion 2
void criterion_gradients() {
    double worst = 0.0;
    long states_tested = 0;
    for (const auto& p : shipped_presets()) {
        Rng rng(*p.cfg.ensemble.seed, 22);
        for (int k = 0; k < 200; ++k) {
            PhaseState s;
            s.q.resize(p.model.dof());
            s.p.resize(p.model.dof());
            for (auto& v : s.q) v = p.cfg.ensemble.sampler.q_sigma * rng.normal();
            for (auto& v : s.p) v = p.cfg.ensemble.sampler.p_sigma * rng.normal();
            try {
                check_domain(p.cfg.family, p.model.hamiltonian(s));
            } catch (const Error&) {
                continue;
            }
            const auto g = constraint_gradients(p.model, p.cfg.force, p.cfg.family, s);
            PhaseState w = s;
            for (int i = 0; i < p.model.dof(); ++i) {
                const double hq = 1e-6 * (1.0 + std::abs(s.q[i]));
                w.q[i] = s.q[i] + hq;
                const double f1 = constraint_value(p.model, p.cfg.force, p.cfg.family, w);
                w.q[i] = s.q[i] - hq;
                const double f0 = constraint_value(p.model, p.cfg.force, p.cfg.family, w);
                w.q[i] = s.q[i];
                worst = std::max(worst, std::abs(g.Q[i] - (f1 - f0) / (2 * hq)) /
                                            (1.0 + std::abs(g.Q[i])));
                const double hp = 1e-6 * (1.0 + std::abs(s.p[i]));
                w.p[i] = s.p[i] + hp;
                const double g1 = constraint_value(p.model, p.cfg.force, p.cfg.family, w);
                w.p[i] = s.p[i] - hp;
                const double g0 = constraint_value(p.model, p.cfg.force, p.cfg.family, w);
                w.p[i] = s.p[i];
                worst = std::max(worst, std::abs(g.P[i] - (g1 - g0) / (2 * hp)) /
                                            (1.0 + std::abs(g.P[i])));
            }
            ++states_tested;
        }
    }
    report(2, "analytic constraint gradients vs central differences", worst < 1e-5, worst,
           1e-5, "(states=" + std::to_string(states_tested) + ")");
}

// ---------------------------------------------------------------- criterion 3
void criterion_isokinetic_invariant() {
    const double kT = 0.8, w = 1.3;
    SystemModel model(2, 3, {1.0, 1.0}, HarmonicPotential{w});
    const LinearFriction force{0.7};
    const ConstantBeta family{model.dof() / kT};
    Rng rng(33);
    PhaseState s0;
    s0.q.resize(6);
    s0.p.resize(6);
    for (auto& v : s0.q) v = 0.6 * rng.normal();
    for (auto& v : s0.p) v = 0.9 * rng.normal();
    s0 = project_to_surface(model, force, family, s0);

    auto max_drift = [&](long interval) {
        IntegratorSpec spec;
        spec.dt = 1e-3 / w;
        spec.n_steps = 100000;
        spec.projection_interval = interval;
        spec.drift_tolerance = 1.0; // measure the free drift; no forced projection
        spec.record_stride = 1;
        const Trajectory t = run_trajectory(model, force, family, s0, spec);
        double worst = 0.0;
        for (const auto& smp : t.samples) {
            double p2 = 0.0;
            for (double v : smp.p) p2 += v * v;
            worst = std::max(worst, std::abs(p2 - kT) / kT);
        }
        return worst;
    };
    const double d1 = max_drift(1);
    report(3, "isokinetic invariant, per-step projection (1e5 RK4 steps)", d1 < 1e-8, d1,
           1e-8);
    const double d100 = max_drift(100);
    report(3, "isokinetic invariant, projection every 100 steps", d100 < 1e-4, d100, 1e-4);
}

// ---------------------------------------------------------------- criterion 4
void criterion_stationarity() {
    for (const auto& p : shipped_presets()) {
        const DensityModel dm = DensityModel::build(p.model, p.cfg.family, p.cfg.window);
        const auto states = on_surface_states(p, 100, 44, &dm.window());
        double worst = 0.0;
        for (const auto& s : states)
            worst = std::max(
                worst, stationarity_residual(dm, p.cfg.force, p.cfg.family, s).normalized);
        report(4, "stationarity of the matched density, preset " + p.name, worst < 1e-6,
               worst, 1e-6, "(states=" + std::to_string(states.size()) + ")");

        // negative control: a deliberately mismatched density must be detected
        double mean_H = 0.0;
        for (const auto& s : states) mean_H += p.model.hamiltonian(s);
        mean_H /= static_cast<double>(states.size());
        const double bval = std::max(1e-3, std::abs(beta(p.cfg.family, mean_H)));
        BetaFamily mis;
        if (std::holds_alternative<ConstantBeta>(p.cfg.family))
            mis = LinearBeta{0.4 * bval, 0.6 * bval / (1.0 + std::abs(mean_H))};
        else
            mis = ConstantBeta{0.4 * bval};
        const DensityModel dmm = DensityModel::build(p.model, mis, p.cfg.window);
        std::vector<double> vals;
        for (const auto& s : states)
            vals.push_back(
                stationarity_residual(dmm, p.cfg.force, p.cfg.family, s).normalized);
        std::sort(vals.begin(), vals.end());
        const double median = vals[vals.size() / 2];
        report(4, "stationarity negative control, preset " + p.name, median > 1e-2, median,
               1e-2, "(must exceed tolerance)");
    }
}

// ---------------------------------------------------------------- criterion 5
void criterion_pushforward() {
    RunConfig cfg = parse_config(preset_text("isokinetic-harmonic"));
    const SystemModel model = cfg.make_model();
    const DensityModel dm = DensityModel::build(model, cfg.family, cfg.window);
    const auto pc =
        pushforward_invariance(dm, cfg.force, cfg.integrator, 10000, 100, 55);
    report(5, "pushforward invariance of the isokinetic ensemble (KS, 99%)", pc.pass,
           pc.ks_stat, pc.ks_critical_99,
           "(mean H " + std::to_string(pc.mean_before) + " -> " +
               std::to_string(pc.mean_after) + ")");
}

// ---------------------------------------------------------------- criterion 6
void criterion_thermo_closed_forms() {
    const double kT = 0.8, w = 1.3;
    double worst = 0.0;
    for (int N = 1; N <= 3; ++N) {
        for (int d = 1; d <= 3; ++d) {
            SystemModel m(N, d, std::vector<double>(N, 1.0), HarmonicPotential{w});
            const DensityModel dm = DensityModel::build(m, ConstantBeta{1.0 / kT});
            const int M = N * d;
            const double U = internal_energy(dm);
            const double S = entropy(dm);
            const double X = thermodynamic_force(dm, "omega");
            const double u_ref = M * kT;
            const double s_ref = M * (1.0 + std::log(2.0 * 3.14159265358979323846 * kT / w));
            const double x_ref = -M * kT / w;
            worst = std::max(worst, std::abs(U - u_ref) / std::abs(u_ref));
            worst = std::max(worst, std::abs(S - s_ref) / std::abs(s_ref));
            worst = std::max(worst, std::abs(X - x_ref) / std::abs(x_ref));
        }
    }
    report(6, "canonical harmonic closed forms U, S, X (N,d = 1..3)", worst < 1e-6, worst,
           1e-6);
}

// ---------------------------------------------------------------- criterion 7
void criterion_first_law() {
    SystemModel m(1, 3, {1.0}, HarmonicPotential{1.1});
    const ThermoSweep driver(m, ConstantBeta{1.25});
    // fixed path with opposite-sign parameter trends (a proportional (T, omega)
    // path has identically zero residual); base resolution: relative step 1e-3
    auto max_resid = [&](int steps) {
        const auto pts = driver.run({"T", "omega"}, {0.8, 1.1},
                                    {0.8 * (1.0 + 8e-3), 1.1 * (1.0 - 1.2e-2)}, steps);
        const auto lr = first_law_residual(pts);
        double worst = 0.0;
        for (double r : lr.first_law) worst = std::max(worst, r);
        return worst;
    };
    const double r8 = max_resid(8);   // per-segment relative steps 1e-3 / 1.5e-3
    const double r16 = max_resid(16); // halved steps over the same path
    const double ratio = r8 / r16;
    char buf[80];
    std::snprintf(buf, sizeof(buf), "(residuals %.3e -> %.3e)", r8, r16);
    report(7, "first-law residual is second order (halving ratio)", ratio >= 3.5, ratio,
           3.5, buf);
}

// ---------------------------------------------------------------- criterion 8
void criterion_antiderivatives() {
    const BetaFamily fams[] = {
        BetaFamily{ConstantBeta{1.25}}, BetaFamily{LinearBeta{0.8, 0.3}},
        BetaFamily{BreitWignerBeta{2.0, 1.5}}, BetaFamily{FermiBoseBeta{1.5, 0.4, 1.0}},
        BetaFamily{FermiBoseBeta{1.5, -0.5, -1.0}}};
    Rng rng(88);
    double worst = 0.0;
    for (const auto& f : fams) {
        for (int rep = 0; rep < 100; ++rep) {
            double lo = -4.0;
            if (const auto* fb = std::get_if<FermiBoseBeta>(&f))
                if (fb->a < 0.0) lo = fb->mu + 0.05;
            const double H0 = rng.uniform(lo, 8.0), H1 = rng.uniform(lo, 8.0);
            const auto q =
                integrate([&](double e) { return beta(f, e); }, H0, H1, 1e-12, 1e-14);
            const double dB = antiderivative_B(f, H1) - antiderivative_B(f, H0);
            worst = std::max(worst, std::abs(q.value - dB));
        }
    }
    report(8, "quadrature of beta equals B differences (all families)", worst < 1e-8,
           worst, 1e-8);

    // the implemented fermi-bose coefficient reproduces the target density
    // exactly under exp(-B); the +exponent variant does not
    const FermiBoseBeta fb{1.5, 0.4, 1.0};
    double worst_fb = 0.0, gap_variant = 0.0;
    const double alpha = fb.a * std::exp(-fb.beta0 * fb.mu);
    for (int i = 0; i <= 200; ++i) {
        const double H = -2.0 + 10.0 * i / 200.0;
        const double target = 1.0 / (std::exp(fb.beta0 * (H - fb.mu)) + fb.a);
        const double viaB = std::exp(-antiderivative_B(BetaFamily{fb}, H));
        worst_fb = std::max(worst_fb, std::abs(viaB - target) / target);
        // antiderivative of beta0/(1 + alpha exp(+beta0 H)) is
        // beta0 H - ln(1 + alpha exp(beta0 H)); its density is exp(-beta0 H) + alpha
        const double variant = std::exp(-fb.beta0 * H) + alpha;
        gap_variant = std::max(gap_variant, std::abs(variant - target));
    }
    report(8, "implemented fermi-bose coefficient reproduces the target density",
           worst_fb < 1e-12, worst_fb, 1e-12);
    report(8, "documented discrepancy: +exponent variant density differs (gap must "
              "exceed tolerance; variant is exp(-beta0 H) + alpha, not normalizable)",
           gap_variant > 0.1, gap_variant, 0.1);
}

// ---------------------------------------------------------------- criterion 9
void criterion_worked_example() {
    RunConfig cfg = parse_config(preset_text("isokinetic-harmonic"));
    const SystemModel model = cfg.make_model();
    const double kT = cfg.extra_params.at("kT");
    const double w = std::get<HarmonicPotential>(cfg.potential).omega;
    Preset p{"isokinetic-harmonic", cfg, model};
    const auto states = on_surface_states(p, 100, 99);
    double worst = 0.0;
    for (const auto& s : states) {
        const auto Fn = project_force(model, cfg.force, cfg.family, s);
        double pq = 0.0;
        for (int i = 0; i < model.dof(); ++i) pq += s.p[i] * s.q[i];
        for (int i = 0; i < model.dof(); ++i) {
            const double ref = -w * w * s.q[i] + (w * w / kT) * s.p[i] * pq;
            worst = std::max(worst, std::abs(Fn[i] - ref) / (1.0 + std::abs(ref)));
        }
    }
    report(9, "projected isokinetic force equals the closed harmonic form", worst < 1e-10,
           worst, 1e-10, "(states=" + std::to_string(states.size()) + ")");
}

// --------------------------------------------------------------- criterion 10
void criterion_determinism() {
    namespace fs = std::filesystem;
    RunConfig cfg = parse_config(preset_text("isokinetic-harmonic"));
    cfg.integrator.n_steps = 2000;
    const SystemModel model = cfg.make_model();
    const fs::path dir = fs::temp_directory_path() / "fewps_acceptance_det";
    fs::create_directories(dir);
    auto run_once = [&](const fs::path& out) {
        Rng rng(*cfg.ensemble.seed, 1);
        const PhaseState s0 =
            sample_initial_state(model, cfg.force, cfg.family, cfg.ensemble.sampler, rng);
        const Trajectory t =
            run_trajectory(model, cfg.force, cfg.family, s0, cfg.integrator);
        write_trajectory_csv(out.string(), t, model.dof());
    };
    run_once(dir / "a.csv");
    run_once(dir / "b.csv");
    std::ifstream fa(dir / "a.csv", std::ios::binary), fb(dir / "b.csv", std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    const bool identical = sa.str() == sb.str() && !sa.str().empty();
    report(10, "identical config and seed give byte-identical trajectory CSV", identical,
           identical ? 0.0 : 1.0, 0.0);
}

using CriterionFn = std::function<void()>;

} // namespace

int main(int argc, char** argv) {
    const CriterionFn criteria[] = {
        criterion_closure,        criterion_gradients,    criterion_isokinetic_invariant,
        criterion_stationarity,   criterion_pushforward,  criterion_thermo_closed_forms,
        criterion_first_law,      criterion_antiderivatives, criterion_worked_example,
        criterion_determinism};
    const auto t0 = std::chrono::steady_clock::now();
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > 10) {
            std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
            return 64;
        }
        criteria[k - 1]();
    } else {
        for (const auto& fn : criteria) fn();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d failure(s), %.1f s\n", g_failures, secs);
    return g_failures;
}
