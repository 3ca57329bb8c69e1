#include "fewps/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <string>
#include <thread>

namespace fewps {
namespace {

struct Flow {
    std::vector<double> dq, dp;
};

// Trivially-satisfied constraints (f identically ~0, e.g. zero friction) have
// a vanishing gradient; no constraint force is needed there and the projected
// field degenerates to the plain total force.  A vanishing gradient at f != 0
// is a genuine singularity and propagates.
std::vector<double> flow_force(const SystemModel& model, const BaseForce& force,
                               const BetaFamily& family, const PhaseState& s) {
    try {
        return project_force(model, force, family, s);
    } catch (const SingularityError&) {
        if (std::abs(constraint_value(model, force, family, s)) < 1e-10)
            return total_force(model, force, s);
        throw;
    }
}

Flow projected_flow(const SystemModel& model, const BaseForce& force,
                    const BetaFamily& family, const PhaseState& s) {
    return {model.grad_p(s), flow_force(model, force, family, s)};
}

PhaseState advance(const PhaseState& s, const Flow& v, double dt) {
    PhaseState r = s;
    for (std::size_t i = 0; i < r.q.size(); ++i) {
        r.q[i] += dt * v.dq[i];
        r.p[i] += dt * v.dp[i];
    }
    r.t = s.t + dt;
    return r;
}

template <typename Field>
PhaseState rk4_step(const PhaseState& s, double dt, Field&& field) {
    const Flow k1 = field(s);
    const Flow k2 = field(advance(s, k1, 0.5 * dt));
    const Flow k3 = field(advance(s, k2, 0.5 * dt));
    const Flow k4 = field(advance(s, k3, dt));
    PhaseState r = s;
    for (std::size_t i = 0; i < r.q.size(); ++i) {
        r.q[i] += dt / 6.0 * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
        r.p[i] += dt / 6.0 * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
    }
    r.t = s.t + dt;
    return r;
}

} // namespace

void IntegratorSpec::validate() const {
    if (!(dt > 0.0)) throw ContractViolation("IntegratorSpec: dt must be > 0");
    if (n_steps < 1) throw ContractViolation("IntegratorSpec: n_steps must be >= 1");
    if (!(drift_tolerance > 0.0))
        throw ContractViolation("IntegratorSpec: drift_tolerance must be > 0");
    if (projection_interval < 0)
        throw ContractViolation("IntegratorSpec: projection_interval must be >= 0");
    if (record_stride < 1) throw ContractViolation("IntegratorSpec: record_stride must be >= 1");
}

PhaseState step(const SystemModel& model, const BaseForce& force, const BetaFamily& family,
                const PhaseState& s, const IntegratorSpec& spec) {
    if (spec.method == Method::rk4) {
        return rk4_step(s, spec.dt, [&](const PhaseState& w) {
            return projected_flow(model, force, family, w);
        });
    }
    // semi-implicit Euler: momentum kick with the force at (q_n, p_n), then
    // drift with the updated momentum
    PhaseState r = s;
    const auto Fn = flow_force(model, force, family, s);
    for (std::size_t i = 0; i < r.p.size(); ++i) r.p[i] += spec.dt * Fn[i];
    const auto K = model.grad_p(r);
    for (std::size_t i = 0; i < r.q.size(); ++i) r.q[i] += spec.dt * K[i];
    r.t = s.t + spec.dt;
    return r;
}

PhaseState project_to_surface(const SystemModel& model, const BaseForce& force,
                              const BetaFamily& family, const PhaseState& s) {
    PhaseState w = s;
    for (int iter = 0; iter < 50; ++iter) {
        const double f = constraint_value(model, force, family, w);
        if (std::abs(f) < 1e-12) return w;
        const auto g = constraint_gradients(model, force, family, w);
        const auto F = total_force(model, force, w);
        double pp = 0.0, ff = 0.0;
        for (std::size_t i = 0; i < g.P.size(); ++i) {
            pp += g.P[i] * g.P[i];
            ff += F[i] * F[i];
        }
        if (pp <= degeneracy_threshold(ff))
            throw SingularityError("project_to_surface: degenerate P at iteration " +
                                   std::to_string(iter));
        const double t = -f / pp;
        for (std::size_t i = 0; i < w.p.size(); ++i) w.p[i] += t * g.P[i];
    }
    throw ProjectionFailure("project_to_surface: no convergence after 50 iterations (|f| = " +
                            std::to_string(std::abs(constraint_value(model, force, family, s))) +
                            " at start)");
}

PhaseState isokinetic_step(const SystemModel& model, const PhaseState& s, double kT,
                           double dt, Method method) {
    model.check_state(s);
    if (!model.equal_masses())
        throw ContractViolation("isokinetic_step: equal masses required");
    if (!(kT > 0.0)) throw ContractViolation("isokinetic_step: kT must be > 0");
    double p2 = 0.0;
    for (double v : s.p) p2 += v * v;
    if (p2 == 0.0) throw SingularityError("isokinetic_step: p = 0");
    const double m = model.masses()[0];

    auto field = [&](const PhaseState& w) -> Flow {
        const auto gU = model.grad_q(w);
        double pg = 0.0;
        for (std::size_t i = 0; i < w.p.size(); ++i) pg += w.p[i] * gU[i];
        Flow v;
        v.dq.resize(w.q.size());
        v.dp.resize(w.p.size());
        for (std::size_t i = 0; i < w.p.size(); ++i) {
            v.dq[i] = w.p[i] / m;
            v.dp[i] = w.p[i] * pg / (m * kT) - gU[i];
        }
        return v;
    };

    if (method == Method::rk4) return rk4_step(s, dt, field);
    PhaseState r = s;
    const Flow v0 = field(s);
    for (std::size_t i = 0; i < r.p.size(); ++i) r.p[i] += dt * v0.dp[i];
    for (std::size_t i = 0; i < r.q.size(); ++i) r.q[i] += dt * r.p[i] / m;
    r.t = s.t + dt;
    return r;
}

void run_trajectory(const SystemModel& model, const BaseForce& force,
                    const BetaFamily& family, const PhaseState& s0,
                    const IntegratorSpec& spec, Trajectory& out) {
    spec.validate();
    model.check_state(s0);
    {
        const double f0 = std::abs(constraint_value(model, force, family, s0));
        if (f0 > spec.drift_tolerance)
            throw ContractViolation("run_trajectory: initial |f| = " + std::to_string(f0) +
                                    " exceeds drift_tolerance; project the state first");
    }
    auto record = [&](const PhaseState& w) {
        TrajectorySample r;
        r.t = w.t;
        r.q = w.q;
        r.p = w.p;
        r.H = model.hamiltonian(w);
        r.f = constraint_value(model, force, family, w);
        try {
            r.Omega = projected_omega_fd(model, force, family, w);
            r.P = projected_power(model, force, family, w);
        } catch (const SingularityError&) {
            // degenerate (trivially satisfied) constraint: the flow is the
            // plain total force; its non-potential part is F^(n)
            r.Omega = omega(model, force, w);
            r.P = power(model, force, w);
        }
        out.samples.push_back(std::move(r));
    };

    PhaseState s = s0;
    record(s);
    for (long k = 1; k <= spec.n_steps; ++k) {
        try {
            s = step(model, force, family, s, spec);
            const bool scheduled =
                spec.projection_interval > 0 && k % spec.projection_interval == 0;
            if (scheduled ||
                std::abs(constraint_value(model, force, family, s)) > spec.drift_tolerance)
                s = project_to_surface(model, force, family, s);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " [at step " + std::to_string(k) + "]");
        }
        if (k % spec.record_stride == 0) record(s);
    }
}

Trajectory run_trajectory(const SystemModel& model, const BaseForce& force,
                          const BetaFamily& family, const PhaseState& s0,
                          const IntegratorSpec& spec) {
    Trajectory t;
    run_trajectory(model, force, family, s0, spec, t);
    return t;
}

PhaseState sample_initial_state(const SystemModel& model, const BaseForce& force,
                                const BetaFamily& family, const InitialSampler& sampler,
                                Rng& rng) {
    if (!(sampler.q_sigma > 0.0) || !(sampler.p_sigma > 0.0))
        throw ContractViolation("InitialSampler: sigmas must be > 0");
    const int n = model.dof();
    for (int attempt = 0; attempt < 64; ++attempt) {
        PhaseState s;
        s.q.resize(n);
        s.p.resize(n);
        for (int i = 0; i < n; ++i) s.q[i] = sampler.q_sigma * rng.normal();
        for (int i = 0; i < n; ++i) s.p[i] = sampler.p_sigma * rng.normal();
        try {
            return project_to_surface(model, force, family, s);
        } catch (const Error&) {
            // degenerate draw (e.g. near-zero momentum); try another
        }
    }
    throw ProjectionFailure("sample_initial_state: no projectable draw in 64 attempts");
}

EnsembleResult run_ensemble(const SystemModel& model, const BaseForce& force,
                            const BetaFamily& family, const InitialSampler& sampler,
                            const IntegratorSpec& spec, int n_traj, std::uint64_t seed) {
    if (n_traj < 1) throw ContractViolation("run_ensemble: n_traj must be >= 1");
    spec.validate();

    struct Slot {
        TrajectorySummary summary;
        std::vector<double> H;
        std::string error;
    };
    std::vector<Slot> slots(n_traj);

    auto work = [&](int idx) {
        Slot& slot = slots[idx];
        slot.summary.index = static_cast<std::uint64_t>(idx);
        try {
            Rng rng(seed, static_cast<std::uint64_t>(idx) + 1);
            const PhaseState s0 = sample_initial_state(model, force, family, sampler, rng);
            Trajectory traj;
            run_trajectory(model, force, family, s0, spec, traj);
            double sum = 0.0, maxf = 0.0;
            for (const auto& r : traj.samples) {
                slot.H.push_back(r.H);
                sum += r.H;
                maxf = std::max(maxf, std::abs(r.f));
            }
            slot.summary.mean_H = sum / static_cast<double>(traj.samples.size());
            slot.summary.max_abs_f = maxf;
            slot.summary.final_H = traj.samples.back().H;
        } catch (const Error& e) {
            slot.error = e.what();
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_workers = std::min<unsigned>(hw, static_cast<unsigned>(n_traj));
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    for (unsigned w = 0; w < n_workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&]() {
            for (int i = next.fetch_add(1); i < n_traj; i = next.fetch_add(1)) work(i);
        }));
    }
    for (auto& f : futures) f.get();

    EnsembleResult res;
    std::string first_error;
    for (auto& slot : slots) {
        if (!slot.error.empty()) {
            if (first_error.empty()) first_error = slot.error;
            continue;
        }
        res.summaries.push_back(slot.summary);
        res.pooled_H.insert(res.pooled_H.end(), slot.H.begin(), slot.H.end());
    }
    if (!first_error.empty() && res.summaries.empty())
        throw ProjectionFailure("run_ensemble: every trajectory failed; first error: " +
                                first_error);
    return res;
}

} // namespace fewps
