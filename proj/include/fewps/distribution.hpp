#ifndef FEWPS_DISTRIBUTION_HPP
#define FEWPS_DISTRIBUTION_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fewps/beta.hpp"
#include "fewps/dos.hpp"
#include "fewps/dynamics.hpp"
#include "fewps/forces.hpp"
#include "fewps/phase.hpp"
#include "fewps/rng.hpp"

namespace fewps {

struct EnergyWindow {
    double lo = 0.0;
    double hi = 0.0;
};

/// Analytic stationary distribution rho = exp(-B(H))/Z over an energy window.
/// The window is explicit for families that need one (Breit-Wigner always
/// does); otherwise an effective cutoff is derived from the integrand decay.
class DensityModel {
public:
    static DensityModel build(SystemModel model, BetaFamily family,
                              std::optional<EnergyWindow> window = std::nullopt);

    const SystemModel& model() const { return model_; }
    const BetaFamily& family() const { return family_; }
    const DensityOfStates& dos() const { return *dos_; }
    const EnergyWindow& window() const { return window_; }
    bool explicit_window() const { return explicit_window_; }
    double Z() const { return Z_; }

    /// rho(s) = exp(-B(H(s)))/Z; zero outside the window (counted).
    double density_at(const PhaseState& s) const;
    std::int64_t out_of_window_count() const { return oow_->load(); }

    /// normalized energy marginal g(E) exp(-B(E))/Z inside the window
    double energy_pdf(double E) const;
    double energy_cdf(double E) const;
    double energy_quantile(double u) const;
    double sample_energy(Rng& rng) const;

    /// exact microcanonical-shell draw for harmonic/free models; rejection
    /// sampling in full phase space for quartic models (acceptance floor 1e-3)
    PhaseState sample_state(Rng& rng) const;

private:
    DensityModel(SystemModel m, BetaFamily f)
        : model_(std::move(m)), family_(std::move(f)) {}

    SystemModel model_;
    BetaFamily family_;
    EnergyWindow window_{};
    bool explicit_window_ = false;
    std::shared_ptr<DensityOfStates> dos_;
    double Z_ = 0.0;
    std::vector<double> cdf_grid_;  // energies
    std::vector<double> cdf_vals_;
    std::shared_ptr<std::atomic<std::int64_t>> oow_;
};

/// Z alone (builds the density model internally).
double partition_function(const BetaFamily& family, const SystemModel& model,
                          std::optional<EnergyWindow> window = std::nullopt);

enum class FlowKind {
    projected, // dq/dt = dH/dp, dp/dt = F^new (constraint-projected force)
    base,      // dq/dt = dH/dp, dp/dt = -dH/dq + F^(n) (no constraint force)
};

struct StationarityResult {
    double residual = 0.0;   // R(s) = div_q(K rho) + div_p(F rho)
    double normalized = 0.0; // |R| / (rho (|grad ln rho| |v| + |div v|))
};

/// Liouville stationarity residual of dm's density under the given flow.
/// The flow is projected with `flow_family` (pass dm.family() for the matched
/// pair; anything else gives a deliberate mismatch).
StationarityResult stationarity_residual(const DensityModel& dm, const BaseForce& force,
                                         const BetaFamily& flow_family, const PhaseState& s,
                                         FlowKind kind = FlowKind::projected);

struct HistogramComparison {
    std::vector<double> edges;       // merged bin edges over the window
    std::vector<double> counts;      // observed per merged bin
    std::vector<double> expected;    // analytic expectation per merged bin
    double ks_stat = 0.0;            // one-sample KS against the energy CDF
    double chi_square = 0.0;
    int dof = 0;
};

/// Compares pooled H samples against the analytic energy marginal.  Bins are
/// equal-probability under the analytic law; bins with expected count < 5 are
/// merged.  Needs >= 1000 samples.
HistogramComparison compare_histogram(const DensityModel& dm,
                                      const std::vector<double>& h_samples, int n_bins);

struct PushforwardComparison {
    double ks_stat = 0.0;
    double ks_critical_99 = 0.0;
    double mean_before = 0.0;
    double mean_after = 0.0;
    std::vector<double> H_before;
    std::vector<double> H_after;
    bool pass = false;
};

/// Draws n_samples from the analytic density, evolves each for horizon_steps
/// under the projected flow (no renormalization: the flow itself must carry
/// the ensemble), and compares the H-histograms (two-sample KS at 99%).
PushforwardComparison pushforward_invariance(const DensityModel& dm, const BaseForce& force,
                                             const IntegratorSpec& spec, int n_samples,
                                             long horizon_steps, std::uint64_t seed);

} // namespace fewps

#endif
