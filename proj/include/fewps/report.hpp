#ifndef FEWPS_REPORT_HPP
#define FEWPS_REPORT_HPP

#include <string>
#include <vector>

#include "fewps/config.hpp"
#include "fewps/dynamics.hpp"
#include "fewps/thermo.hpp"

namespace fewps {

/// Trajectory CSV with the fixed header t,q0..,p0..,H,f,Omega,P
/// (floats printed with 17 significant digits).
void write_trajectory_csv(const std::string& path, const Trajectory& traj, int dof);

std::string format_g17(double v);

struct VerifyCheck {
    std::string name;
    bool enabled = false;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string details;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    std::string notes; // family-specific documentation notes
    bool all_pass() const {
        for (const auto& c : checks)
            if (c.enabled && !c.pass) return false;
        return true;
    }
};

/// Runs the checks enabled in cfg.verify against the configured system.
VerifyReport run_verify(const RunConfig& cfg);

std::string verify_report_json(const VerifyReport& report);

struct SimulateSummary {
    int n_trajectories = 0;
    long n_steps = 0;
    double mean_H = 0.0;
    double max_constraint_drift = 0.0;
    double final_abs_f = 0.0;
    double final_H = 0.0;
};

std::string simulate_summary_json(const SimulateSummary& s);

std::string thermo_csv(const std::vector<ThermoPoint>& pts);
std::string thermo_report_json(const std::vector<ThermoPoint>& pts, const LawResiduals& lr);

/// JSON error envelope for scripting.
std::string error_envelope(const std::string& kind, const std::string& message);

} // namespace fewps

#endif
