// fewps: constrained-dynamics simulation and verification of few-particle
// systems whose non-potential forces satisfy Omega = beta(H) * P.
//
// Subcommands: simulate, verify, thermo, sweep.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fewps/config.hpp"
#include "fewps/report.hpp"
#include "fewps/thermo.hpp"

namespace fs = std::filesystem;
using namespace fewps;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerifyFailed = 4;

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

RunConfig load_config(const CommonOpts& opts) {
    std::string text;
    if (!opts.preset.empty()) {
        text = preset_text(opts.preset);
    } else if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw ConfigError("cannot read config file " + opts.config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else {
        throw ConfigError("either --config PATH or --preset NAME is required");
    }
    RunConfig cfg = parse_config(text);
    if (opts.seed_set) cfg.ensemble.seed = opts.seed;
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    return cfg;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".part";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ContractViolation("cannot open output file " + tmp.string());
        out << text;
    }
    fs::rename(tmp, path);
}

int cmd_simulate(const RunConfig& cfg) {
    const SystemModel model = cfg.make_model();
    fs::create_directories(cfg.output_dir);

    SimulateSummary summary;
    summary.n_trajectories = cfg.ensemble.n_trajectories;
    summary.n_steps = cfg.integrator.n_steps;
    double sumH = 0.0;
    long n_recorded = 0;
    std::ostringstream jsonl; // one summary line per trajectory

    for (int k = 0; k < cfg.ensemble.n_trajectories; ++k) {
        Rng rng(*cfg.ensemble.seed, static_cast<std::uint64_t>(k) + 1);
        const PhaseState s0 =
            sample_initial_state(model, cfg.force, cfg.family, cfg.ensemble.sampler, rng);
        Trajectory traj;
        char name[64];
        std::snprintf(name, sizeof(name), "trajectory_%03d.csv", k);
        const fs::path csv = fs::path(cfg.output_dir) / name;
        try {
            run_trajectory(model, cfg.force, cfg.family, s0, cfg.integrator, traj);
        } catch (const Error&) {
            // keep whatever was recorded, then surface the failure
            write_trajectory_csv(csv.string(), traj, model.dof());
            throw;
        }
        write_trajectory_csv(csv.string(), traj, model.dof());
        double traj_sum = 0.0, traj_max_f = 0.0;
        for (const auto& s : traj.samples) {
            sumH += s.H;
            traj_sum += s.H;
            ++n_recorded;
            traj_max_f = std::max(traj_max_f, std::abs(s.f));
            summary.max_constraint_drift =
                std::max(summary.max_constraint_drift, std::abs(s.f));
        }
        summary.final_abs_f = std::abs(traj.samples.back().f);
        summary.final_H = traj.samples.back().H;
        jsonl << "{\"trajectory\":" << k << ",\"mean_H\":"
              << format_g17(traj_sum / static_cast<double>(traj.samples.size()))
              << ",\"max_abs_f\":" << format_g17(traj_max_f)
              << ",\"final_H\":" << format_g17(traj.samples.back().H) << "}\n";
    }
    summary.mean_H = sumH / static_cast<double>(n_recorded);
    write_text_atomic(fs::path(cfg.output_dir) / "summaries.jsonl", jsonl.str());
    write_text_atomic(fs::path(cfg.output_dir) / "summary.json",
                      simulate_summary_json(summary));
    std::cout << simulate_summary_json(summary);
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const VerifyReport rep = run_verify(cfg);
    fs::create_directories(cfg.output_dir);
    write_text_atomic(fs::path(cfg.output_dir) / "verify_report.json",
                      verify_report_json(rep));
    for (const auto& c : rep.checks) {
        if (!c.enabled) continue;
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                  << "  measured=" << format_g17(c.measured)
                  << "  tolerance=" << format_g17(c.tolerance) << "\n";
    }
    if (rep.checks.empty()) std::cout << "no checks enabled\n";
    return rep.all_pass() ? 0 : kExitVerifyFailed;
}

int cmd_thermo(const RunConfig& cfg) {
    if (!cfg.thermo.sweep)
        throw ConfigError("thermo: config needs a thermo.sweep section");
    const auto& sw = *cfg.thermo.sweep;
    const ThermoSweep driver(cfg.make_model(), cfg.family, cfg.window,
                             cfg.thermo.temperature);
    const auto pts = driver.run(sw.params, sw.from, sw.to, sw.steps);
    LawResiduals lr;
    if (pts.size() >= 3) lr = first_law_residual(pts, driver);
    fs::create_directories(cfg.output_dir);
    write_text_atomic(fs::path(cfg.output_dir) / "thermo.csv", thermo_csv(pts));
    write_text_atomic(fs::path(cfg.output_dir) / "thermo_report.json",
                      thermo_report_json(pts, lr));
    std::cout << thermo_report_json(pts, lr);
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    if (!cfg.thermo.sweep)
        throw ConfigError("sweep: config needs a thermo.sweep section");
    const auto& sw = *cfg.thermo.sweep;
    fs::create_directories(cfg.output_dir);
    std::string csv;
    for (const auto& p : sw.params) csv += p + ",";
    csv += "mean_H,max_constraint_drift\n";
    const int steps = sw.steps;
    for (int i = 0; i <= steps; ++i) {
        const double t = steps == 0 ? 0.0 : static_cast<double>(i) / steps;
        std::map<std::string, double> x;
        for (std::size_t k = 0; k < sw.params.size(); ++k)
            x[sw.params[k]] = sw.from[k] + t * (sw.to[k] - sw.from[k]);
        auto [model, family] = apply_sweep_params(cfg.make_model(), cfg.family, x);
        const auto ens = run_ensemble(model, cfg.force, family, cfg.ensemble.sampler,
                                      cfg.integrator, cfg.ensemble.n_trajectories,
                                      *cfg.ensemble.seed + i);
        double meanH = 0.0, drift = 0.0;
        for (const auto& s : ens.summaries) {
            meanH += s.mean_H;
            drift = std::max(drift, s.max_abs_f);
        }
        meanH /= static_cast<double>(ens.summaries.size());
        for (const auto& p : sw.params) csv += format_g17(x[p]) + ",";
        csv += format_g17(meanH) + "," + format_g17(drift) + "\n";
    }
    write_text_atomic(fs::path(cfg.output_dir) / "sweep.csv", csv);
    std::cout << csv;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermodynamic few-particle systems: constrained dynamics, "
                 "distributions, and thermodynamic reports"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON config path");
        sub->add_option("--preset", opts.preset, "named preset");
        sub->add_option("--out", opts.out_dir, "output directory override");
        sub->add_option("--seed", opts.seed, "seed override")
            ->each([&](const std::string&) { opts.seed_set = true; });
    };
    auto* sim = app.add_subcommand("simulate", "integrate trajectories, write CSV + summary");
    auto* ver = app.add_subcommand("verify", "run closure/stationarity/pushforward checks");
    auto* thm = app.add_subcommand("thermo", "thermodynamic sweep table + residuals");
    auto* swp = app.add_subcommand("sweep", "parameter sweep of trajectory summaries");
    for (auto* sub : {sim, ver, thm, swp}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(opts);
        if (sim->parsed()) return cmd_simulate(cfg);
        if (ver->parsed()) return cmd_verify(cfg);
        if (thm->parsed()) return cmd_thermo(cfg);
        return cmd_sweep(cfg);
    } catch (const Error& e) {
        std::cout << error_envelope(e.kind_name(), e.what());
        std::cerr << "error (" << e.kind_name() << "): " << e.what() << "\n";
        return e.kind() == ErrorKind::config ? kExitConfig : kExitNumerical;
    } catch (const std::exception& e) {
        std::cout << error_envelope("internal", e.what());
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
