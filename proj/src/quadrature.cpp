#include "nvlab/quadrature.hpp"

#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace nv {

namespace {

GaussRule compute_gauss(int n) {
    // Newton iteration on Legendre P_n from the Chebyshev initial guess.
    GaussRule r;
    r.x.resize(size_t(n));
    r.w.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[size_t(i)] = x;
        r.w[size_t(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

std::mutex g_rule_mutex;
std::map<int, GaussRule> g_rules;

}  // namespace

const GaussRule& gauss_legendre(int order) {
    std::lock_guard<std::mutex> lk(g_rule_mutex);
    auto it = g_rules.find(order);
    if (it == g_rules.end()) it = g_rules.emplace(order, compute_gauss(order)).first;
    return it->second;
}

std::vector<Panel> build_panels(double lo, double hi,
                                const std::function<double(double)>& freq,
                                const std::vector<double>& graded,
                                const PanelOptions& opt) {
    std::vector<Panel> panels;
    if (!(hi > lo)) return panels;
    const double span = hi - lo;
    const double cap = span * opt.max_width_fraction;

    auto osc_width = [&](double r) {
        double f = std::max(freq(r), 1e-30);
        return std::min(cap, opt.cycles_per_panel * two_pi / f);
    };

    // Geometric ladders out of graded edges, then frequency-limited panels
    // across the remainder.
    double cursor = lo;
    bool lo_graded = false;
    for (double g : graded) lo_graded = lo_graded || (std::abs(g - lo) < 1e-300 || g == lo);
    double hi_edge = hi;
    bool hi_graded = false;
    for (double g : graded)
        if (g == hi) hi_graded = true;

    if (lo_graded) {
        double w = std::min(opt.edge_start, span * 0.25);
        while (cursor < hi && w < osc_width(cursor) && (cursor - lo) < 0.25 * span) {
            double b = std::min(cursor + w, hi);
            panels.push_back({cursor, b});
            cursor = b;
            w *= opt.edge_growth;
        }
    }

    std::vector<Panel> tail;  // built backwards from a graded upper edge
    if (hi_graded) {
        double w = std::min(opt.edge_start, span * 0.25);
        double c = hi;
        while (c > cursor && w < osc_width(c) && (hi - c) < 0.25 * span) {
            double a = std::max(c - w, cursor);
            tail.push_back({a, c});
            c = a;
            w *= opt.edge_growth;
        }
        hi_edge = c;
    }

    while (cursor < hi_edge) {
        double w = osc_width(cursor);
        // look ahead: frequency may grow across the panel
        double w2 = osc_width(std::min(cursor + w, hi_edge));
        w = std::min(w, w2 * 1.5);
        double b = std::min(cursor + std::max(w, 1e-12 * span), hi_edge);
        panels.push_back({cursor, b});
        cursor = b;
    }
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) panels.push_back(*it);
    return panels;
}

int worker_threads() {
    if (const char* s = std::getenv("NVLAB_THREADS")) {
        int n = std::atoi(s);
        if (n >= 1) return n;
    }
    unsigned n = std::thread::hardware_concurrency();
    return n ? int(n) : 1;
}

void parallel_for_ordered(int n, const std::function<void(int)>& work) {
    const int nthreads = std::min(worker_threads(), n > 0 ? n : 1);
    if (nthreads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(size_t(nthreads));
    for (int tId = 0; tId < nthreads; ++tId) {
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                work(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace nv
