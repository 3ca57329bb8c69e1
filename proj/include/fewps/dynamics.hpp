#ifndef FEWPS_DYNAMICS_HPP
#define FEWPS_DYNAMICS_HPP

#include <cstdint>
#include <vector>

#include "fewps/forces.hpp"
#include "fewps/phase.hpp"
#include "fewps/rng.hpp"

namespace fewps {

enum class Method { rk4, semi_implicit_euler };

struct IntegratorSpec {
    Method method = Method::rk4;
    double dt = 1e-3;
    long n_steps = 1000;
    long projection_interval = 1;   // steps between renormalizations; 0 = never
    double drift_tolerance = 1e-8;  // max |f| before forced projection
    long record_stride = 10;

    void validate() const;
};

struct TrajectorySample {
    double t;
    std::vector<double> q, p;
    double H;
    double f;      // constraint value at the sample
    double Omega;  // momentum divergence of the projected non-potential force (central FD)
    double P;      // power of the projected non-potential force = dH/dt
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
};

/// Gaussian initial conditions; states are projected onto the constraint
/// surface before use.
struct InitialSampler {
    double q_sigma = 1.0;
    double p_sigma = 1.0;
};

struct TrajectorySummary {
    std::uint64_t index = 0;
    double mean_H = 0.0;   // time average over recorded samples
    double max_abs_f = 0.0;
    double final_H = 0.0;
};

struct EnsembleResult {
    std::vector<TrajectorySummary> summaries;
    std::vector<double> pooled_H; // recorded H samples across all trajectories
};

/// One step of dt with F^new evaluated at each stage.
PhaseState step(const SystemModel& model, const BaseForce& force, const BetaFamily& family,
                const PhaseState& s, const IntegratorSpec& spec);

/// Newton iteration along the P direction in momentum space until |f| < 1e-12
/// (at most 50 iterations); positions are never moved.
PhaseState project_to_surface(const SystemModel& model, const BaseForce& force,
                              const BetaFamily& family, const PhaseState& s);

/// One step of the closed-form isokinetic flow
/// dq/dt = p/m, dp/dt = p (p . dU/dq) / (m kT) - dU/dq.  Equal masses only.
PhaseState isokinetic_step(const SystemModel& model, const PhaseState& s, double kT,
                           double dt, Method method = Method::rk4);

/// Integrates n_steps from s0, recording every record_stride steps into `out`
/// (partial records are kept when an error is thrown mid-run).
void run_trajectory(const SystemModel& model, const BaseForce& force,
                    const BetaFamily& family, const PhaseState& s0,
                    const IntegratorSpec& spec, Trajectory& out);

Trajectory run_trajectory(const SystemModel& model, const BaseForce& force,
                          const BetaFamily& family, const PhaseState& s0,
                          const IntegratorSpec& spec);

/// Samples an on-surface state: Gaussian draw followed by projection.
PhaseState sample_initial_state(const SystemModel& model, const BaseForce& force,
                                const BetaFamily& family, const InitialSampler& sampler,
                                Rng& rng);

/// n_traj independent trajectories with per-trajectory RNG streams; parallel
/// across workers, result identical for a fixed seed regardless of scheduling.
EnsembleResult run_ensemble(const SystemModel& model, const BaseForce& force,
                            const BetaFamily& family, const InitialSampler& sampler,
                            const IntegratorSpec& spec, int n_traj, std::uint64_t seed);

} // namespace fewps

#endif
