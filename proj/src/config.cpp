#include "fewps/config.hpp"

#include <json.hpp>

namespace fewps {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ConfigError(path + ": " + why);
}

template <typename T>
T get_req(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing required field");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(path + "." + key, e.what());
    }
}

template <typename T>
T get_or(const json& j, const std::string& path, const char* key, T dflt) {
    if (!j.contains(key)) return dflt;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(path + "." + key, e.what());
    }
}

PotentialSpec parse_potential(const json& j, const std::string& path) {
    const auto type = get_req<std::string>(j, path, "type");
    if (type == "harmonic") return HarmonicPotential{get_req<double>(j, path, "omega")};
    if (type == "quartic")
        return QuarticPotential{get_req<double>(j, path, "a"), get_req<double>(j, path, "b")};
    if (type == "free") return FreePotential{get_or<double>(j, path, "volume", 1.0)};
    fail(path + ".type", "unknown potential '" + type + "'");
}

BaseForce parse_force(const json& j, const std::string& path) {
    const auto type = get_req<std::string>(j, path, "type");
    if (type == "linear_friction") return LinearFriction{get_req<double>(j, path, "gamma")};
    if (type == "canonical_dissipative")
        return CanonicalDissipative{get_req<std::vector<double>>(j, path, "g_coeffs")};
    fail(path + ".type", "unknown force '" + type + "'");
}

BetaFamily parse_family(const json& j, const std::string& path) {
    const auto type = get_req<std::string>(j, path, "type");
    if (type == "constant") return ConstantBeta{get_req<double>(j, path, "beta0")};
    if (type == "linear")
        return LinearBeta{get_req<double>(j, path, "beta1"), get_req<double>(j, path, "beta2")};
    if (type == "breit_wigner")
        return BreitWignerBeta{get_req<double>(j, path, "resonance_energy"),
                               get_req<double>(j, path, "width")};
    if (type == "fermi_bose")
        return FermiBoseBeta{get_req<double>(j, path, "beta0"), get_req<double>(j, path, "mu"),
                             get_req<double>(j, path, "a")};
    fail(path + ".type", "unknown beta family '" + type + "'");
}

json potential_json(const PotentialSpec& p) {
    json j;
    if (const auto* h = std::get_if<HarmonicPotential>(&p)) {
        j["type"] = "harmonic";
        j["omega"] = h->omega;
    } else if (const auto* q = std::get_if<QuarticPotential>(&p)) {
        j["type"] = "quartic";
        j["a"] = q->a;
        j["b"] = q->b;
    } else {
        j["type"] = "free";
        j["volume"] = std::get<FreePotential>(p).volume;
    }
    return j;
}

json force_json(const BaseForce& f) {
    json j;
    if (const auto* lf = std::get_if<LinearFriction>(&f)) {
        j["type"] = "linear_friction";
        j["gamma"] = lf->gamma;
    } else {
        j["type"] = "canonical_dissipative";
        j["g_coeffs"] = std::get<CanonicalDissipative>(f).g_coeffs;
    }
    return j;
}

json family_json(const BetaFamily& f) {
    json j;
    if (const auto* c = std::get_if<ConstantBeta>(&f)) {
        j["type"] = "constant";
        j["beta0"] = c->beta0;
    } else if (const auto* l = std::get_if<LinearBeta>(&f)) {
        j["type"] = "linear";
        j["beta1"] = l->beta1;
        j["beta2"] = l->beta2;
    } else if (const auto* bw = std::get_if<BreitWignerBeta>(&f)) {
        j["type"] = "breit_wigner";
        j["resonance_energy"] = bw->resonance_energy;
        j["width"] = bw->width;
    } else {
        const auto& fb = std::get<FermiBoseBeta>(f);
        j["type"] = "fermi_bose";
        j["beta0"] = fb.beta0;
        j["mu"] = fb.mu;
        j["a"] = fb.a;
    }
    return j;
}

} // namespace

SystemModel RunConfig::make_model() const {
    return SystemModel(n_particles, dim, masses, potential, extra_params);
}

void RunConfig::validate() const {
    try {
        (void)make_model();
    } catch (const Error& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    try {
        fewps::validate(force);
        fewps::validate(family);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    try {
        integrator.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("integrator: ") + e.what());
    }
    if (std::holds_alternative<BreitWignerBeta>(family) && !window)
        throw ConfigError("beta.type = breit_wigner requires energy_window");
    if (window && !(window->hi > window->lo))
        throw ConfigError("energy_window: hi must exceed lo");
    if (ensemble.n_trajectories < 1)
        throw ConfigError("ensemble.n_trajectories must be >= 1");
    const bool stochastic = ensemble.n_trajectories > 0; // every run samples initial states
    if (stochastic && !ensemble.seed)
        throw ConfigError("ensemble.seed is mandatory for stochastic runs");
    if (thermo.sweep) {
        const auto& sw = *thermo.sweep;
        if (sw.params.empty() || sw.params.size() != sw.from.size() ||
            sw.params.size() != sw.to.size())
            throw ConfigError("thermo.sweep: params/from/to must have equal nonzero sizes");
        if (sw.steps < 0) throw ConfigError("thermo.sweep.steps must be >= 0");
    }
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("parse error: ") + e.what());
    }
    RunConfig cfg;
    const auto jm = j.contains("model") ? j.at("model") : json::object();
    cfg.n_particles = get_req<int>(jm, "model", "n_particles");
    cfg.dim = get_req<int>(jm, "model", "dim");
    cfg.masses = get_req<std::vector<double>>(jm, "model", "masses");
    if (!jm.contains("potential")) fail("model.potential", "missing required field");
    cfg.potential = parse_potential(jm.at("potential"), "model.potential");
    cfg.extra_params =
        get_or<std::map<std::string, double>>(jm, "model", "params", {});

    if (!j.contains("force")) fail("force", "missing required field");
    cfg.force = parse_force(j.at("force"), "force");
    if (!j.contains("beta")) fail("beta", "missing required field");
    cfg.family = parse_family(j.at("beta"), "beta");

    if (j.contains("energy_window")) {
        const auto& jw = j.at("energy_window");
        cfg.window = EnergyWindow{get_req<double>(jw, "energy_window", "lo"),
                                  get_req<double>(jw, "energy_window", "hi")};
    }

    if (j.contains("integrator")) {
        const auto& ji = j.at("integrator");
        const auto method = get_or<std::string>(ji, "integrator", "method", "rk4");
        if (method == "rk4") cfg.integrator.method = Method::rk4;
        else if (method == "semi_implicit_euler")
            cfg.integrator.method = Method::semi_implicit_euler;
        else
            fail("integrator.method", "unknown method '" + method + "'");
        cfg.integrator.dt = get_req<double>(ji, "integrator", "dt");
        cfg.integrator.n_steps = get_req<long>(ji, "integrator", "n_steps");
        cfg.integrator.projection_interval =
            get_or<long>(ji, "integrator", "projection_interval", 1);
        cfg.integrator.drift_tolerance =
            get_or<double>(ji, "integrator", "drift_tolerance", 1e-8);
        cfg.integrator.record_stride = get_or<long>(ji, "integrator", "record_stride", 10);
    }

    if (j.contains("ensemble")) {
        const auto& je = j.at("ensemble");
        cfg.ensemble.n_trajectories = get_or<int>(je, "ensemble", "n_trajectories", 1);
        if (je.contains("seed"))
            cfg.ensemble.seed = get_req<std::uint64_t>(je, "ensemble", "seed");
        if (je.contains("sampler")) {
            const auto& js = je.at("sampler");
            cfg.ensemble.sampler.q_sigma =
                get_or<double>(js, "ensemble.sampler", "q_sigma", 1.0);
            cfg.ensemble.sampler.p_sigma =
                get_or<double>(js, "ensemble.sampler", "p_sigma", 1.0);
        }
    }

    if (j.contains("verify")) {
        const auto& jv = j.at("verify");
        cfg.verify.closure = get_or<bool>(jv, "verify", "closure", true);
        cfg.verify.gradient = get_or<bool>(jv, "verify", "gradient", true);
        cfg.verify.stationarity = get_or<bool>(jv, "verify", "stationarity", true);
        cfg.verify.pushforward = get_or<bool>(jv, "verify", "pushforward", false);
        cfg.verify.histogram = get_or<bool>(jv, "verify", "histogram", false);
        cfg.verify.n_states = get_or<int>(jv, "verify", "n_states", 100);
        cfg.verify.n_samples = get_or<int>(jv, "verify", "n_samples", 2000);
        cfg.verify.horizon_steps = get_or<long>(jv, "verify", "horizon_steps", 100);
        cfg.verify.n_bins = get_or<int>(jv, "verify", "n_bins", 20);
    }

    if (j.contains("thermo")) {
        const auto& jt = j.at("thermo");
        if (jt.contains("temperature"))
            cfg.thermo.temperature = get_req<double>(jt, "thermo", "temperature");
        if (jt.contains("sweep")) {
            const auto& js = jt.at("sweep");
            SweepConfig sw;
            sw.params = get_req<std::vector<std::string>>(js, "thermo.sweep", "params");
            sw.from = get_req<std::vector<double>>(js, "thermo.sweep", "from");
            sw.to = get_req<std::vector<double>>(js, "thermo.sweep", "to");
            sw.steps = get_req<int>(js, "thermo.sweep", "steps");
            cfg.thermo.sweep = sw;
        }
    }

    if (j.contains("output"))
        cfg.output_dir = get_or<std::string>(j.at("output"), "output", "dir", ".");

    cfg.validate();
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["model"]["n_particles"] = cfg.n_particles;
    j["model"]["dim"] = cfg.dim;
    j["model"]["masses"] = cfg.masses;
    j["model"]["potential"] = potential_json(cfg.potential);
    if (!cfg.extra_params.empty()) j["model"]["params"] = cfg.extra_params;
    j["force"] = force_json(cfg.force);
    j["beta"] = family_json(cfg.family);
    if (cfg.window) {
        j["energy_window"]["lo"] = cfg.window->lo;
        j["energy_window"]["hi"] = cfg.window->hi;
    }
    j["integrator"]["method"] =
        cfg.integrator.method == Method::rk4 ? "rk4" : "semi_implicit_euler";
    j["integrator"]["dt"] = cfg.integrator.dt;
    j["integrator"]["n_steps"] = cfg.integrator.n_steps;
    j["integrator"]["projection_interval"] = cfg.integrator.projection_interval;
    j["integrator"]["drift_tolerance"] = cfg.integrator.drift_tolerance;
    j["integrator"]["record_stride"] = cfg.integrator.record_stride;
    j["ensemble"]["n_trajectories"] = cfg.ensemble.n_trajectories;
    if (cfg.ensemble.seed) j["ensemble"]["seed"] = *cfg.ensemble.seed;
    j["ensemble"]["sampler"]["q_sigma"] = cfg.ensemble.sampler.q_sigma;
    j["ensemble"]["sampler"]["p_sigma"] = cfg.ensemble.sampler.p_sigma;
    j["verify"]["closure"] = cfg.verify.closure;
    j["verify"]["gradient"] = cfg.verify.gradient;
    j["verify"]["stationarity"] = cfg.verify.stationarity;
    j["verify"]["pushforward"] = cfg.verify.pushforward;
    j["verify"]["histogram"] = cfg.verify.histogram;
    j["verify"]["n_states"] = cfg.verify.n_states;
    j["verify"]["n_samples"] = cfg.verify.n_samples;
    j["verify"]["horizon_steps"] = cfg.verify.horizon_steps;
    j["verify"]["n_bins"] = cfg.verify.n_bins;
    if (cfg.thermo.temperature) j["thermo"]["temperature"] = *cfg.thermo.temperature;
    if (cfg.thermo.sweep) {
        j["thermo"]["sweep"]["params"] = cfg.thermo.sweep->params;
        j["thermo"]["sweep"]["from"] = cfg.thermo.sweep->from;
        j["thermo"]["sweep"]["to"] = cfg.thermo.sweep->to;
        j["thermo"]["sweep"]["steps"] = cfg.thermo.sweep->steps;
    }
    j["output"]["dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

bool config_equal(const RunConfig& a, const RunConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

} // namespace fewps
