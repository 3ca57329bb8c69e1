#include "fewps/distribution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "fewps/quadrature.hpp"
#include "fewps/stats.hpp"

namespace fewps {
namespace {

constexpr int kCdfPanels = 4096;

double domain_floor(const BetaFamily& family) {
    if (const auto* fb = std::get_if<FermiBoseBeta>(&family)) {
        if (fb->a < 0.0) return fb->mu + std::log(-fb->a) / fb->beta0;
    }
    return -std::numeric_limits<double>::infinity();
}

// Smallest energy beyond the integrand peak where
// ln[E^(nu-1) exp(-B(E))] has dropped `efolds` below its max.
double find_cutoff(const BetaFamily& family, double nu, double lo, double efolds) {
    auto lam = [&](double E) { return (nu - 1.0) * std::log(E) - antiderivative_B(family, E); };
    const double start = std::max(lo, 1e-9) + 1e-9;
    double peak = -std::numeric_limits<double>::infinity();
    double E = start;
    for (int i = 0; i < 4000; ++i) {
        peak = std::max(peak, lam(E));
        if (lam(E) < peak - efolds && E > start * 4.0) return E;
        E *= 1.05;
        if (E > 1e12)
            throw DivergenceError(std::string("partition function for family '") +
                                  family_name(family) +
                                  "' does not decay; supply an explicit energy_window");
    }
    throw DivergenceError("no energy cutoff found; supply an explicit energy_window");
}

} // namespace

DensityModel DensityModel::build(SystemModel model, BetaFamily family,
                                 std::optional<EnergyWindow> window) {
    validate(family);
    DensityModel dm(std::move(model), std::move(family));
    dm.oow_ = std::make_shared<std::atomic<std::int64_t>>(0);

    const double floor = domain_floor(dm.family_);
    const bool is_bw = std::holds_alternative<BreitWignerBeta>(dm.family_);
    if (is_bw && !window)
        throw DivergenceError("breit_wigner density is not normalizable without "
                              "an explicit energy_window");
    double nu;
    {
        // leading exponent of g near 0 (g ~ E^(nu-1)); used only for the cutoff scan
        const auto& pot = dm.model_.potential();
        const int M = dm.model_.dof();
        if (std::holds_alternative<HarmonicPotential>(pot)) nu = M;
        else if (std::holds_alternative<FreePotential>(pot)) nu = 0.5 * M;
        else {
            const auto& qp = std::get<QuarticPotential>(pot);
            nu = qp.a == 0.0 && qp.b > 0.0 ? 0.75 * M : M;
        }
    }
    if (window) {
        if (!(window->hi > window->lo))
            throw ContractViolation("energy_window: need hi > lo");
        if (window->lo < 0.0)
            throw ContractViolation("energy_window: lo must be >= 0 for these models");
        if (window->lo <= floor)
            throw DomainError("energy_window overlaps the family domain edge at " +
                              std::to_string(floor));
        dm.window_ = *window;
        dm.explicit_window_ = true;
    } else {
        if (floor >= 0.0)
            throw DivergenceError("family domain edge lies inside the spectrum; "
                                  "supply an explicit energy_window above " +
                                  std::to_string(floor));
        dm.window_.lo = 0.0;
        dm.window_.hi = find_cutoff(dm.family_, nu, 0.0, 60.0);
        dm.explicit_window_ = false;
    }

    dm.dos_ = std::make_shared<DensityOfStates>(
        DensityOfStates::build(dm.model_, dm.window_.hi * 1.0000001));

    const auto& dos = *dm.dos_;
    auto integrand = [&](double E) {
        return dos.g(E) * unnormalized_density(dm.family_, E);
    };
    const auto zr = integrate(integrand, dm.window_.lo, dm.window_.hi, 1e-13, 1e-300);
    dm.Z_ = zr.value;
    if (!(dm.Z_ > 0.0) || !std::isfinite(dm.Z_))
        throw DivergenceError("partition function is not positive and finite");

    // cumulative energy CDF for sampling and KS
    dm.cdf_grid_.resize(kCdfPanels + 1);
    dm.cdf_vals_.assign(kCdfPanels + 1, 0.0);
    const double lo = dm.window_.lo, hi = dm.window_.hi;
    for (int i = 0; i <= kCdfPanels; ++i)
        dm.cdf_grid_[i] = lo + (hi - lo) * static_cast<double>(i) / kCdfPanels;
    for (int i = 1; i <= kCdfPanels; ++i) {
        const double a = dm.cdf_grid_[i - 1], b = dm.cdf_grid_[i];
        const double m = 0.5 * (a + b);
        dm.cdf_vals_[i] = dm.cdf_vals_[i - 1] +
                          (b - a) / 6.0 * (integrand(a) + 4.0 * integrand(m) + integrand(b));
    }
    const double total = dm.cdf_vals_.back();
    for (auto& v : dm.cdf_vals_) v /= total;
    return dm;
}

double DensityModel::density_at(const PhaseState& s) const {
    const double H = model_.hamiltonian(s);
    if (H < window_.lo || H > window_.hi) {
        oow_->fetch_add(1);
        return 0.0;
    }
    return unnormalized_density(family_, H) / Z_;
}

double DensityModel::energy_pdf(double E) const {
    if (E < window_.lo || E > window_.hi) return 0.0;
    return dos_->g(E) * unnormalized_density(family_, E) / Z_;
}

double DensityModel::energy_cdf(double E) const {
    if (E <= window_.lo) return 0.0;
    if (E >= window_.hi) return 1.0;
    const auto it = std::upper_bound(cdf_grid_.begin(), cdf_grid_.end(), E);
    const std::size_t i = static_cast<std::size_t>(it - cdf_grid_.begin());
    const double a = cdf_grid_[i - 1], b = cdf_grid_[i];
    const double w = (E - a) / (b - a);
    return cdf_vals_[i - 1] * (1.0 - w) + cdf_vals_[i] * w;
}

double DensityModel::energy_quantile(double u) const {
    if (u <= 0.0) return window_.lo;
    if (u >= 1.0) return window_.hi;
    const auto it = std::lower_bound(cdf_vals_.begin(), cdf_vals_.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cdf_vals_.begin());
    if (i == 0) i = 1;
    const double c0 = cdf_vals_[i - 1], c1 = cdf_vals_[i];
    const double w = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
    return cdf_grid_[i - 1] + w * (cdf_grid_[i] - cdf_grid_[i - 1]);
}

double DensityModel::sample_energy(Rng& rng) const { return energy_quantile(rng.uniform()); }

PhaseState DensityModel::sample_state(Rng& rng) const {
    const int M = model_.dof();
    const auto& mc = model_.component_masses();
    PhaseState s;
    s.q.assign(M, 0.0);
    s.p.assign(M, 0.0);

    if (const auto* h = std::get_if<HarmonicPotential>(&model_.potential())) {
        const double E = sample_energy(rng);
        std::vector<double> u(2 * M);
        double norm2 = 0.0;
        for (auto& x : u) {
            x = rng.normal();
            norm2 += x * x;
        }
        const double scale = std::sqrt(2.0 * E / norm2);
        for (int i = 0; i < M; ++i) {
            s.p[i] = scale * u[i] * std::sqrt(mc[i]);
            s.q[i] = scale * u[M + i] / (std::sqrt(mc[i]) * h->omega);
        }
        return s;
    }
    if (const auto* fr = std::get_if<FreePotential>(&model_.potential())) {
        const double E = sample_energy(rng);
        std::vector<double> u(M);
        double norm2 = 0.0;
        for (auto& x : u) {
            x = rng.normal();
            norm2 += x * x;
        }
        const double scale = std::sqrt(2.0 * E / norm2);
        const double L = std::pow(fr->volume, 1.0 / M);
        for (int i = 0; i < M; ++i) {
            s.p[i] = scale * u[i] * std::sqrt(mc[i]);
            s.q[i] = L * rng.uniform();
        }
        return s;
    }

    // quartic: rejection sampling in the full phase-space box of the window
    const auto& qp = std::get<QuarticPotential>(model_.potential());
    const double hi = window_.hi;
    const double qb = std::sqrt((-qp.a + std::sqrt(qp.a * qp.a + 4.0 * qp.b * hi)) /
                                (2.0 * qp.b));
    double bmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 256; ++i) {
        const double E = window_.lo + (hi - window_.lo) * i / 256.0;
        bmin = std::min(bmin, antiderivative_B(family_, E));
    }
    long attempts = 0, accepted = 0;
    while (true) {
        ++attempts;
        for (int i = 0; i < M; ++i) {
            s.q[i] = qb * (2.0 * rng.uniform() - 1.0);
            s.p[i] = std::sqrt(2.0 * mc[i] * hi) * (2.0 * rng.uniform() - 1.0);
        }
        const double H = model_.hamiltonian(s);
        if (H >= window_.lo && H <= hi) {
            const double acc = std::exp(-(antiderivative_B(family_, H) - bmin));
            if (rng.uniform() < acc) {
                ++accepted;
                return s;
            }
        }
        if (attempts >= 20000 && accepted == 0)
            throw DomainError("rejection sampler acceptance below the 1e-3 floor");
        if (attempts % 100000 == 0 &&
            static_cast<double>(accepted + 1) / attempts < 1e-3)
            throw DomainError("rejection sampler acceptance below the 1e-3 floor");
    }
}

double partition_function(const BetaFamily& family, const SystemModel& model,
                          std::optional<EnergyWindow> window) {
    return DensityModel::build(model, family, window).Z();
}

StationarityResult stationarity_residual(const DensityModel& dm, const BaseForce& force,
                                         const BetaFamily& flow_family, const PhaseState& s,
                                         FlowKind kind) {
    const auto& model = dm.model();
    const double H = model.hamiltonian(s);
    const double rho = dm.density_at(s);
    const double b = beta(dm.family(), H); // grad ln rho = -beta dH
    const auto K = model.grad_p(s);
    const auto gq = model.grad_q(s);

    std::vector<double> Fp;
    double divp;
    if (kind == FlowKind::projected) {
        Fp = project_force(model, force, flow_family, s);
        divp = projected_omega_fd(model, force, flow_family, s);
    } else {
        Fp = total_force(model, force, s);
        divp = omega(model, force, s); // analytic for base forces
    }

    double dHdt = 0.0, vnorm2 = 0.0, gnorm2 = 0.0;
    for (std::size_t i = 0; i < K.size(); ++i) {
        dHdt += K[i] * gq[i] + Fp[i] * K[i];
        vnorm2 += K[i] * K[i] + Fp[i] * Fp[i];
        gnorm2 += gq[i] * gq[i] + K[i] * K[i];
    }
    StationarityResult r;
    r.residual = rho * (-b * dHdt + divp);
    const double scale =
        std::abs(b) * std::sqrt(gnorm2) * std::sqrt(vnorm2) + std::abs(divp) + 1e-300;
    r.normalized = std::abs(r.residual) / (rho * scale + 1e-300);
    return r;
}

HistogramComparison compare_histogram(const DensityModel& dm,
                                      const std::vector<double>& h_samples, int n_bins) {
    if (h_samples.size() < 1000)
        throw ContractViolation("compare_histogram: need at least 1000 samples");
    if (n_bins < 2) throw ContractViolation("compare_histogram: need n_bins >= 2");

    const double n = static_cast<double>(h_samples.size());
    // equal-probability bin edges under the analytic law
    std::vector<double> edges(n_bins + 1);
    for (int i = 0; i <= n_bins; ++i)
        edges[i] = dm.energy_quantile(static_cast<double>(i) / n_bins);

    std::vector<double> counts(n_bins, 0.0);
    for (double h : h_samples) {
        const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, h);
        counts[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
    }
    std::vector<double> expected(n_bins, n / n_bins);

    // merge neighbours until every expected count is >= 5
    std::vector<double> m_edges{edges[0]};
    std::vector<double> m_counts, m_expected;
    double acc_c = 0.0, acc_e = 0.0;
    for (int i = 0; i < n_bins; ++i) {
        acc_c += counts[i];
        acc_e += expected[i];
        if (acc_e >= 5.0 || i == n_bins - 1) {
            m_edges.push_back(edges[i + 1]);
            m_counts.push_back(acc_c);
            m_expected.push_back(acc_e);
            acc_c = acc_e = 0.0;
        }
    }
    if (m_expected.size() > 1 && m_expected.back() < 5.0) {
        m_expected[m_expected.size() - 2] += m_expected.back();
        m_counts[m_counts.size() - 2] += m_counts.back();
        m_expected.pop_back();
        m_counts.pop_back();
        m_edges.erase(m_edges.end() - 2);
    }

    HistogramComparison hc;
    hc.edges = std::move(m_edges);
    hc.counts = std::move(m_counts);
    hc.expected = std::move(m_expected);
    for (std::size_t i = 0; i < hc.counts.size(); ++i) {
        const double d = hc.counts[i] - hc.expected[i];
        hc.chi_square += d * d / hc.expected[i];
    }
    hc.dof = static_cast<int>(hc.counts.size()) - 1;
    hc.ks_stat = ks_one_sample(h_samples, [&](double e) { return dm.energy_cdf(e); });
    return hc;
}

PushforwardComparison pushforward_invariance(const DensityModel& dm, const BaseForce& force,
                                             const IntegratorSpec& spec, int n_samples,
                                             long horizon_steps, std::uint64_t seed) {
    if (n_samples < 1000)
        throw ContractViolation("pushforward_invariance: need n_samples >= 1000");
    spec.validate();

    PushforwardComparison pc;
    pc.H_before.resize(n_samples);
    pc.H_after.resize(n_samples);

    IntegratorSpec free_run = spec; // the flow itself must transport the ensemble
    free_run.projection_interval = 0;
    free_run.drift_tolerance = std::numeric_limits<double>::infinity();

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string error_msg;
    std::mutex err_mutex;
    auto work = [&]() {
        for (int i = next.fetch_add(1); i < n_samples; i = next.fetch_add(1)) {
            if (failed.load()) return;
            try {
                Rng rng(seed, static_cast<std::uint64_t>(i) + 1);
                PhaseState s = dm.sample_state(rng);
                pc.H_before[i] = dm.model().hamiltonian(s);
                for (long k = 0; k < horizon_steps; ++k)
                    s = step(dm.model(), force, dm.family(), s, free_run);
                pc.H_after[i] = dm.model().hamiltonian(s);
            } catch (const Error& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                failed.store(true);
                error_msg = e.what();
            }
        }
    };
    const unsigned n_workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(n_samples));
    std::vector<std::future<void>> futures;
    for (unsigned w = 0; w < n_workers; ++w)
        futures.push_back(std::async(std::launch::async, work));
    for (auto& f : futures) f.get();
    if (failed.load()) throw SingularityError("pushforward_invariance: " + error_msg);

    for (int i = 0; i < n_samples; ++i) {
        pc.mean_before += pc.H_before[i];
        pc.mean_after += pc.H_after[i];
    }
    pc.mean_before /= n_samples;
    pc.mean_after /= n_samples;
    pc.ks_stat = ks_two_sample(pc.H_before, pc.H_after);
    pc.ks_critical_99 = ks_two_sample_critical(pc.H_before.size(), pc.H_after.size(), 0.01);
    pc.pass = pc.ks_stat < pc.ks_critical_99;
    return pc;
}

} // namespace fewps
