#include "fewps/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fewps {
namespace {

// K15 nodes (positive half) and weights; G7 weights on the shared nodes.
const double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b,
          double& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    double resk = 0.0, resg = 0.0;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        fv[j] = f(c - x);
        fv[14 - j] = f(c + x);
    }
    fv[7] = f(c);
    for (int j = 0; j < 7; ++j) resk += kWgk[j] * (fv[j] + fv[14 - j]);
    resk += kWgk[7] * fv[7];
    for (int j = 0; j < 3; ++j) resg += kWg[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);
    resg += kWg[3] * fv[7];
    result = resk * h;
    err = std::abs((resk - resg) * h);
}

struct Panel {
    double a, b, value, err;
    int depth;
};

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0};
    double v, e;
    gk15(f, a, b, v, e);
    std::vector<Panel> heap{{a, b, v, e, 0}};
    double total = v, total_err = e;
    auto cmp = [](const Panel& x, const Panel& y) { return x.err < y.err; };
    std::make_heap(heap.begin(), heap.end(), cmp);
    for (int iter = 0; iter < 20000; ++iter) {
        if (total_err <= std::max(abs_tol, rel_tol * std::abs(total))) break;
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Panel p = heap.back();
        heap.pop_back();
        if (p.depth >= max_depth) {
            heap.push_back(p);
            std::push_heap(heap.begin(), heap.end(), cmp);
            break; // refinement exhausted; report what we have
        }
        const double m = 0.5 * (p.a + p.b);
        Panel l{p.a, m, 0, 0, p.depth + 1}, r{m, p.b, 0, 0, p.depth + 1};
        gk15(f, l.a, l.b, l.value, l.err);
        gk15(f, r.a, r.b, r.value, r.err);
        total += l.value + r.value - p.value;
        total_err += l.err + r.err - p.err;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end(), cmp);
    }
    return {total, total_err};
}

QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            double rel_tol, double abs_tol) {
    // Tail-decay check: the integrand must eventually decrease and be summable
    // over doubling windows, else the transformed integral hides a divergence.
    double span = 1.0;
    double prev = std::abs(integrate(f, a, a + span, 1e-8, 1e-300).value);
    double tail_sum = prev;
    for (int k = 0; k < 60; ++k) {
        const double lo = a + span, hi = a + 2.0 * span;
        const double cur = std::abs(integrate(f, lo, hi, 1e-8, 1e-300).value);
        tail_sum = prev + cur;
        if (k > 6 && cur > 0.9 * prev && cur > 1e-12 * (1.0 + tail_sum))
            throw DivergenceError("integral over unbounded energy range does not decay; "
                                  "supply an explicit energy_window");
        if (cur < 1e-16 * (1.0 + tail_sum) && k > 4) break;
        prev = cur;
        span *= 2.0;
    }
    auto g = [&](double t) {
        const double onemt = 1.0 - t;
        const double x = a + t / onemt;
        return f(x) / (onemt * onemt);
    };
    return integrate(g, 0.0, 1.0, rel_tol, abs_tol);
}

namespace {
double g64_nodes[64];
double g64_weights[64];
bool g64_init_done = [] {
    // Newton iteration on Legendre P_64; standard construction.
    const int n = 64;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        g64_nodes[i] = -x;
        g64_nodes[n - 1 - i] = x;
        g64_weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        g64_weights[n - 1 - i] = g64_weights[i];
    }
    return true;
}();
} // namespace

const double* gauss64_nodes() { return g64_nodes; }
const double* gauss64_weights() { return g64_weights; }

} // namespace fewps
