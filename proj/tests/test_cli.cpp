#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli() {
    const char* p = std::getenv("FEWPS_CLI");
    REQUIRE(p != nullptr);
    return p;
}

int run(const std::string& args, const std::string& log) {
    const std::string cmd = cli() + " " + args + " > " + log + " 2> " + log + ".err";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path tmpdir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("fewps_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

const char* kSmallConfig = R"JSON({
  "model": {"n_particles": 2, "dim": 3, "masses": [1.0, 1.0],
            "potential": {"type": "harmonic", "omega": 1.3},
            "params": {"kT": 0.8}},
  "force": {"type": "linear_friction", "gamma": 0.7},
  "beta": {"type": "constant", "beta0": 7.5},
  "integrator": {"method": "rk4", "dt": 0.0007692307692307692, "n_steps": 400,
                 "projection_interval": 1, "drift_tolerance": 1e-08, "record_stride": 10},
  "ensemble": {"n_trajectories": 2, "seed": 12345,
               "sampler": {"q_sigma": 0.6, "p_sigma": 0.9}},
  "verify": {"closure": false, "gradient": true, "stationarity": false,
             "pushforward": false, "histogram": false, "n_states": 20},
  "thermo": {"sweep": {"params": ["T"], "from": [0.7], "to": [0.9], "steps": 4}},
  "output": {"dir": "out"}
})JSON";

} // namespace

TEST_CASE("simulate: summary, drift, determinism") {
    const fs::path d = tmpdir("sim");
    write(d / "cfg.json", kSmallConfig);
    const int rc = run("simulate --config " + (d / "cfg.json").string() + " --out " +
                           (d / "a").string(),
                       (d / "log1").string());
    CHECK(rc == 0);
    REQUIRE(fs::exists(d / "a" / "trajectory_000.csv"));
    REQUIRE(fs::exists(d / "a" / "summary.json"));
    REQUIRE(fs::exists(d / "a" / "summaries.jsonl"));
    {
        std::ifstream jl(d / "a" / "summaries.jsonl");
        std::string l1, l2;
        std::getline(jl, l1);
        std::getline(jl, l2);
        CHECK(l1.find("\"trajectory\":0") != std::string::npos);
        CHECK(l2.find("\"trajectory\":1") != std::string::npos);
    }
    const std::string summary = slurp(d / "a" / "summary.json");
    CHECK(summary.find("max_constraint_drift") != std::string::npos);

    // header schema is fixed
    std::ifstream csv(d / "a" / "trajectory_000.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,q0,q1,q2,q3,q4,q5,p0,p1,p2,p3,p4,p5,H,f,Omega,P");

    // same seed twice: byte-identical CSV
    const int rc2 = run("simulate --config " + (d / "cfg.json").string() + " --out " +
                            (d / "b").string(),
                        (d / "log2").string());
    CHECK(rc2 == 0);
    CHECK(slurp(d / "a" / "trajectory_000.csv") == slurp(d / "b" / "trajectory_000.csv"));
    CHECK(slurp(d / "a" / "trajectory_001.csv") == slurp(d / "b" / "trajectory_001.csv"));

    // seed override changes the trajectory
    const int rc3 = run("simulate --config " + (d / "cfg.json").string() +
                            " --seed 999 --out " + (d / "c").string(),
                        (d / "log3").string());
    CHECK(rc3 == 0);
    CHECK(slurp(d / "a" / "trajectory_000.csv") != slurp(d / "c" / "trajectory_000.csv"));
}

TEST_CASE("invalid config: exit 2, machine-readable envelope, no partial outputs") {
    const fs::path d = tmpdir("bad");
    write(d / "bad.json", "{\"model\": {}}");
    const int rc = run("simulate --config " + (d / "bad.json").string() + " --out " +
                           (d / "out").string(),
                       (d / "log").string());
    CHECK(rc == 2);
    const std::string log = slurp(d / "log");
    CHECK(log.find("\"error\"") != std::string::npos);
    CHECK(log.find("config_error") != std::string::npos);
    CHECK(!fs::exists(d / "out" / "trajectory_000.csv"));

    // unknown preset also exits 2
    const int rc2 = run("simulate --preset nope --out " + (d / "out2").string(),
                        (d / "log2").string());
    CHECK(rc2 == 2);
}

TEST_CASE("numerical errors exit 3 with an envelope") {
    const fs::path d = tmpdir("numerr");
    // bose-like family with the domain edge inside the spectrum and no window:
    // the partition function diverges
    write(d / "cfg.json", R"JSON({
      "model": {"n_particles": 1, "dim": 2, "masses": [1.0],
                "potential": {"type": "harmonic", "omega": 1.0}},
      "force": {"type": "canonical_dissipative", "g_coeffs": [0.0, 0.3, 0.1]},
      "beta": {"type": "fermi_bose", "beta0": 1.5, "mu": 0.4, "a": -1.0},
      "integrator": {"method": "rk4", "dt": 0.001, "n_steps": 10},
      "ensemble": {"n_trajectories": 1, "seed": 5},
      "thermo": {"sweep": {"params": ["beta0"], "from": [1.5], "to": [1.6], "steps": 2}},
      "output": {"dir": "out"}
    })JSON");
    const int rc = run("thermo --config " + (d / "cfg.json").string() + " --out " +
                           (d / "t").string(),
                       (d / "log").string());
    CHECK(rc == 3);
    CHECK(slurp(d / "log").find("divergence_error") != std::string::npos);
}

TEST_CASE("verify: exit codes and report") {
    const fs::path d = tmpdir("verify");
    write(d / "cfg.json", kSmallConfig);
    // only the gradient check is enabled in the small config and it passes
    const int rc = run("verify --config " + (d / "cfg.json").string() + " --out " +
                           (d / "v").string(),
                       (d / "log").string());
    CHECK(rc == 0);
    const std::string rep = slurp(d / "v" / "verify_report.json");
    CHECK(rep.find("\"gradient\"") != std::string::npos);
    CHECK(rep.find("\"all_pass\": true") != std::string::npos);

    // all toggles off: empty report, exit 0
    std::string off = kSmallConfig;
    off.replace(off.find("\"gradient\": true"), 16, "\"gradient\": false");
    write(d / "off.json", off);
    const int rc2 = run("verify --config " + (d / "off.json").string() + " --out " +
                            (d / "voff").string(),
                        (d / "log2").string());
    CHECK(rc2 == 0);
    CHECK(slurp(d / "log2").find("no checks enabled") != std::string::npos);

    // the full preset includes the closure/stationarity checks, which measure
    // the documented gap and fail: exit 4
    const int rc3 = run("verify --preset isokinetic-harmonic --out " + (d / "vp").string(),
                        (d / "log3").string());
    CHECK(rc3 == 4);
    const std::string rep3 = slurp(d / "vp" / "verify_report.json");
    CHECK(rep3.find("\"closure\"") != std::string::npos);
    CHECK(rep3.find("\"all_pass\": false") != std::string::npos);
}

TEST_CASE("thermo: sweep table and single-point behavior") {
    const fs::path d = tmpdir("thermo");
    write(d / "cfg.json", kSmallConfig);
    const int rc = run("thermo --config " + (d / "cfg.json").string() + " --out " +
                           (d / "t").string(),
                       (d / "log").string());
    CHECK(rc == 0);
    const std::string csv = slurp(d / "t" / "thermo.csv");
    CHECK(csv.find("T,U,S,Z,T,X_T") != std::string::npos);
    const std::string rep = slurp(d / "t" / "thermo_report.json");
    CHECK(rep.find("first_law_residuals") != std::string::npos);

    // single-point sweep: no residual entries, point values present
    std::string single = kSmallConfig;
    single.replace(single.find("\"steps\": 4"), 10, "\"steps\": 0");
    write(d / "one.json", single);
    const int rc2 = run("thermo --config " + (d / "one.json").string() + " --out " +
                            (d / "t1").string(),
                        (d / "log2").string());
    CHECK(rc2 == 0);
    const std::string rep2 = slurp(d / "t1" / "thermo_report.json");
    CHECK(rep2.find("\"first_law_residuals\": []") != std::string::npos);
    CHECK(rep2.find("\"U\"") != std::string::npos);
}

TEST_CASE("sweep: trajectory summaries across a parameter grid") {
    const fs::path d = tmpdir("sweep");
    std::string cfg = kSmallConfig;
    cfg.replace(cfg.find("[\"T\"]"), 5, "[\"omega\"]");
    write(d / "cfg.json", cfg);
    const int rc = run("sweep --config " + (d / "cfg.json").string() + " --out " +
                           (d / "s").string(),
                       (d / "log").string());
    CHECK(rc == 0);
    const std::string csv = slurp(d / "s" / "sweep.csv");
    CHECK(csv.find("omega,mean_H,max_constraint_drift") != std::string::npos);
    // header + 5 rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
