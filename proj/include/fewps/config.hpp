#ifndef FEWPS_CONFIG_HPP
#define FEWPS_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fewps/beta.hpp"
#include "fewps/distribution.hpp"
#include "fewps/dynamics.hpp"
#include "fewps/forces.hpp"
#include "fewps/phase.hpp"

namespace fewps {

struct VerifyConfig {
    bool closure = true;
    bool gradient = true;
    bool stationarity = true;
    bool pushforward = false;
    bool histogram = false;
    int n_states = 100;
    int n_samples = 2000;
    long horizon_steps = 100;
    int n_bins = 20;
};

struct SweepConfig {
    std::vector<std::string> params;
    std::vector<double> from;
    std::vector<double> to;
    int steps = 10;
};

struct ThermoConfig {
    std::optional<double> temperature;
    std::optional<SweepConfig> sweep;
};

struct EnsembleConfig {
    int n_trajectories = 1;
    std::optional<std::uint64_t> seed;
    InitialSampler sampler;
};

struct RunConfig {
    int n_particles = 1;
    int dim = 1;
    std::vector<double> masses{1.0};
    PotentialSpec potential = HarmonicPotential{1.0};
    std::map<std::string, double> extra_params;

    BaseForce force = LinearFriction{1.0};
    BetaFamily family = ConstantBeta{1.0};
    std::optional<EnergyWindow> window;

    IntegratorSpec integrator;
    EnsembleConfig ensemble;
    VerifyConfig verify;
    ThermoConfig thermo;

    std::string output_dir = ".";

    SystemModel make_model() const;
    /// Cross-field validation (window requirements, seed rules, ...).
    void validate() const;
};

/// Parses and validates a JSON config document.  Parse failures and semantic
/// failures throw ConfigError naming the offending field.
RunConfig parse_config(const std::string& text);

/// Canonical serialization; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& cfg);

bool config_equal(const RunConfig& a, const RunConfig& b);

/// Named presets shipped with the repository.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);

} // namespace fewps

#endif
