#include "fewps/config.hpp"

#include <array>
#include <utility>

namespace fewps {
namespace {

// Shipped presets; configs/<name>.json carries the same text (kept in sync by
// a unit test).  The isokinetic preset sets beta0 = N*d/kT explicitly, which
// places the constraint surface at p^2/m = kT.

constexpr const char* kIsokineticHarmonic = R"JSON({
  "model": {
    "n_particles": 2,
    "dim": 3,
    "masses": [1.0, 1.0],
    "potential": {"type": "harmonic", "omega": 1.3},
    "params": {"kT": 0.8}
  },
  "force": {"type": "linear_friction", "gamma": 0.7},
  "beta": {"type": "constant", "beta0": 7.5},
  "integrator": {
    "method": "rk4",
    "dt": 0.0007692307692307692,
    "n_steps": 20000,
    "projection_interval": 1,
    "drift_tolerance": 1e-08,
    "record_stride": 10
  },
  "ensemble": {
    "n_trajectories": 4,
    "seed": 20260811,
    "sampler": {"q_sigma": 0.6, "p_sigma": 0.9}
  },
  "verify": {
    "closure": true,
    "gradient": true,
    "stationarity": true,
    "pushforward": true,
    "histogram": false,
    "n_states": 100,
    "n_samples": 2000,
    "horizon_steps": 100,
    "n_bins": 20
  },
  "output": {"dir": "out/isokinetic-harmonic"}
})JSON";

constexpr const char* kCanonicalDissipativeQuartic = R"JSON({
  "model": {
    "n_particles": 2,
    "dim": 2,
    "masses": [1.0, 1.0],
    "potential": {"type": "quartic", "a": 0.5, "b": 0.3}
  },
  "force": {"type": "canonical_dissipative", "g_coeffs": [0.0, 0.2, 0.05]},
  "beta": {"type": "linear", "beta1": 0.8, "beta2": 0.3},
  "integrator": {
    "method": "rk4",
    "dt": 0.0005,
    "n_steps": 20000,
    "projection_interval": 1,
    "drift_tolerance": 1e-08,
    "record_stride": 10
  },
  "ensemble": {
    "n_trajectories": 4,
    "seed": 20260812,
    "sampler": {"q_sigma": 0.7, "p_sigma": 0.9}
  },
  "verify": {
    "closure": true,
    "gradient": true,
    "stationarity": true,
    "pushforward": false,
    "histogram": false,
    "n_states": 100,
    "n_samples": 1000,
    "horizon_steps": 50,
    "n_bins": 16
  },
  "thermo": {"temperature": 1.25},
  "output": {"dir": "out/canonical-dissipative-quartic"}
})JSON";

constexpr const char* kBreitWignerWindowed = R"JSON({
  "model": {
    "n_particles": 1,
    "dim": 3,
    "masses": [1.0],
    "potential": {"type": "harmonic", "omega": 0.9}
  },
  "force": {"type": "canonical_dissipative", "g_coeffs": [0.0, 0.0, 0.25]},
  "beta": {"type": "breit_wigner", "resonance_energy": 2.0, "width": 1.5},
  "energy_window": {"lo": 2.0, "hi": 9.0},
  "integrator": {
    "method": "rk4",
    "dt": 0.0005,
    "n_steps": 20000,
    "projection_interval": 1,
    "drift_tolerance": 1e-08,
    "record_stride": 10
  },
  "ensemble": {
    "n_trajectories": 4,
    "seed": 20260813,
    "sampler": {"q_sigma": 1.2, "p_sigma": 1.4}
  },
  "verify": {
    "closure": true,
    "gradient": true,
    "stationarity": true,
    "pushforward": false,
    "histogram": false,
    "n_states": 100,
    "n_samples": 2000,
    "horizon_steps": 100,
    "n_bins": 20
  },
  "thermo": {"temperature": 1.0},
  "output": {"dir": "out/breit-wigner-windowed"}
})JSON";

constexpr const char* kFermiBoseFermi = R"JSON({
  "model": {
    "n_particles": 2,
    "dim": 2,
    "masses": [1.0, 1.0],
    "potential": {"type": "harmonic", "omega": 1.0}
  },
  "force": {"type": "canonical_dissipative", "g_coeffs": [0.0, 0.3, 0.1]},
  "beta": {"type": "fermi_bose", "beta0": 1.5, "mu": 0.4, "a": 1.0},
  "integrator": {
    "method": "rk4",
    "dt": 0.001,
    "n_steps": 20000,
    "projection_interval": 1,
    "drift_tolerance": 1e-08,
    "record_stride": 10
  },
  "ensemble": {
    "n_trajectories": 4,
    "seed": 20260814,
    "sampler": {"q_sigma": 0.8, "p_sigma": 1.0}
  },
  "verify": {
    "closure": true,
    "gradient": true,
    "stationarity": true,
    "pushforward": true,
    "histogram": false,
    "n_states": 100,
    "n_samples": 2000,
    "horizon_steps": 100,
    "n_bins": 20
  },
  "output": {"dir": "out/fermi-bose-fermi"}
})JSON";

constexpr const char* kFermiBoseBose = R"JSON({
  "model": {
    "n_particles": 2,
    "dim": 2,
    "masses": [1.0, 1.0],
    "potential": {"type": "harmonic", "omega": 1.0}
  },
  "force": {"type": "canonical_dissipative", "g_coeffs": [0.0, 0.3, 0.1]},
  "beta": {"type": "fermi_bose", "beta0": 1.5, "mu": -0.5, "a": -1.0},
  "integrator": {
    "method": "rk4",
    "dt": 0.001,
    "n_steps": 20000,
    "projection_interval": 1,
    "drift_tolerance": 1e-08,
    "record_stride": 10
  },
  "ensemble": {
    "n_trajectories": 4,
    "seed": 20260815,
    "sampler": {"q_sigma": 0.8, "p_sigma": 1.0}
  },
  "verify": {
    "closure": true,
    "gradient": true,
    "stationarity": true,
    "pushforward": true,
    "histogram": false,
    "n_states": 100,
    "n_samples": 2000,
    "horizon_steps": 100,
    "n_bins": 20
  },
  "output": {"dir": "out/fermi-bose-bose"}
})JSON";

constexpr std::array<std::pair<const char*, const char*>, 5> kPresets = {{
    {"isokinetic-harmonic", kIsokineticHarmonic},
    {"canonical-dissipative-quartic", kCanonicalDissipativeQuartic},
    {"breit-wigner-windowed", kBreitWignerWindowed},
    {"fermi-bose-fermi", kFermiBoseFermi},
    {"fermi-bose-bose", kFermiBoseBose},
}};

} // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : kPresets) {
        (void)text;
        names.emplace_back(name);
    }
    return names;
}

std::string preset_text(const std::string& name) {
    for (const auto& [pname, text] : kPresets)
        if (name == pname) return text;
    throw ConfigError("unknown preset '" + name + "'; available: isokinetic-harmonic, "
                      "canonical-dissipative-quartic, breit-wigner-windowed, "
                      "fermi-bose-fermi, fermi-bose-bose");
}

} // namespace fewps
