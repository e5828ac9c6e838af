#include "nvlab/oscint.hpp"

#include <algorithm>

#include "nvlab/bessel.hpp"
#include "nvlab/quadrature.hpp"
#include "nvlab/stationary.hpp"

namespace nv {

namespace {

// Radial geometry of one plane. The frequency plane integrates r in
// [0, Rcut], the lambda plane rho in [1, rho(Rcut)] with rho - 1/rho = |xi|;
// both phases have the form z1(r) g(3 theta) + z2(r) g(theta - psi) with
// positive coefficients z1 = t z1t, z2 = t z2t.
struct RadialShape {
    bool lambda_plane = false;
    double Eabs = 1.0;
    double umod = 0.0;
    double upsi = 0.0;

    double lo() const { return lambda_plane ? 1.0 : 0.0; }
    double r_of_xi(double x) const { return lambda_plane ? 0.5 * (x + std::sqrt(x * x + 4.0)) : x; }
    double xi_of_r(double r) const { return lambda_plane ? r - 1.0 / r : r; }
    double z1t(double r) const {
        if (lambda_plane) {
            const double r3 = r * r * r;
            return 2.0 * (r3 - 1.0 / r3);
        }
        return 2.0 * r * r * r + 6.0 * Eabs * r;
    }
    double z2t(double r) const { return xi_of_r(r) * umod; }
    double phase_freq(double r) const {  // |z1t'| + |z2t'|
        if (lambda_plane) {
            const double r2 = r * r;
            return 6.0 * (r2 + 1.0 / (r2 * r2)) + umod * (1.0 + 1.0 / r2);
        }
        return 6.0 * r * r + 6.0 * Eabs + umod;
    }
    // Radial amplitude for one channel, area element included, taper excluded.
    cplx amp(double r, double alpha, double beta) const {
        if (lambda_plane) {
            const double g = std::log((r - 1.0) * (r + 1.0));
            const double h = std::log(r);
            const double r2 = r * r;
            const double mag = std::exp(alpha * (g - h)) * (r2 * r2 - 1.0) / (r2 * r);
            return std::polar(mag, beta * (g - h));
        }
        const double lr = std::log(r);
        return std::polar(std::exp((1.0 + alpha) * lr), beta * lr);
    }
    // Extra resolution demanded by the amplitude factors (log-oscillation of
    // the i*beta power and the algebraic edge powers).
    double amp_freq(double r, double alpha_max, double beta_max) const {
        const double c = 1.0 + alpha_max + beta_max;
        if (lambda_plane) return c * (2.0 * r / ((r - 1.0) * (r + 1.0) + 1e-300) + 1.0 / r);
        return c / std::max(r, 1e-300);
    }
};

double taper(double x, double R, double W) {
    if (x <= R) return 1.0;
    if (x >= R + W) return 0.0;
    return 1.0 - smoothstep5((x - R) / W);
}

struct StageResult {
    std::vector<cplx> vals;
    long long points = 0;
};

thread_local std::vector<double> tl_scratch1, tl_scratch2;

StageResult run_stage(const RadialShape& sh, double t, const std::vector<Channel>& channels,
                      double R, double W, bool use_bessel, const QuadControl& quad,
                      const std::vector<double>& extra_refine) {
    const int nch = int(channels.size());
    double alpha_max = 0.0, beta_max = 0.0;
    for (const auto& c : channels) {
        alpha_max = std::max(alpha_max, c.alpha);
        beta_max = std::max(beta_max, std::abs(c.beta));
    }

    const double lo = sh.lo();
    const double hi = sh.r_of_xi(R + W);

    PanelOptions popt;
    popt.cycles_per_panel = quad.cycles_per_panel;
    popt.order = quad.gauss_order;
    popt.max_width_fraction = 1.0 / std::max(4, quad.panels_radial);

    auto freq = [&](double r) {
        double f = t * sh.phase_freq(r) + sh.amp_freq(r, alpha_max, beta_max);
        if (quad.refine_near_stationary) {
            for (double rs : extra_refine) {
                const double d = std::abs(r - rs);
                if (d < 0.25) f *= 2.0;  // doubled density near stationary radii
            }
        }
        return f;
    };
    std::vector<double> graded;
    if (!sh.lambda_plane)
        graded.push_back(0.0);
    else if (quad.refine_near_unit_circle)
        graded.push_back(1.0);

    const auto panels = build_panels(lo, hi, freq, graded, popt);
    const auto& rule = gauss_legendre(quad.gauss_order);

    AngularKernel kern;
    if (use_bessel) {
        const double z2max = t * sh.z2t(hi);
        kern.set_psi(sh.upsi, bessel_band(z2max) / 3 + 2);
    }

    const int npanels = int(panels.size());
    std::vector<std::vector<cplx>> partial(static_cast<size_t>(npanels), std::vector<cplx>(static_cast<size_t>(nch)));
    std::vector<long long> pts(static_cast<size_t>(npanels), 0);

    parallel_for_ordered(npanels, [&](int ip) {
        const Panel& P = panels[size_t(ip)];
        const double mid = 0.5 * (P.a + P.b), half = 0.5 * (P.b - P.a);
        std::vector<cplx> acc(static_cast<size_t>(nch), cplx(0, 0));
        long long np = 0;
        for (size_t k = 0; k < rule.x.size(); ++k) {
            const double r = mid + half * rule.x[k];
            const double wq = half * rule.w[k];
            const double chi = taper(sh.xi_of_r(r), R, W);
            if (chi == 0.0) continue;
            const double z1 = t * sh.z1t(r);
            const double z2 = t * sh.z2t(r);
            double inner_re = 0.0, inner_im = 0.0;
            if (use_bessel) {
                inner_re = kern.eval(z1, z2, tl_scratch1, tl_scratch2);
                np += 1;
            } else {
                int N = 3 * bessel_band(z1) + bessel_band(z2) + 8;
                N = std::max(N, quad.panels_angular);
                const double h = two_pi / N;
                // incremental rotators for exp(3 i theta) and exp(i (theta - psi))
                const cplx rot3 = std::polar(1.0, 3.0 * h);
                const cplx rot1 = std::polar(1.0, h);
                cplx e3(1.0, 0.0);
                cplx e1 = std::polar(1.0, -sh.upsi);
                double sre = 0.0, sim = 0.0;
                for (int j = 0; j < N; ++j) {
                    double phase;
                    if (sh.lambda_plane)
                        phase = -z1 * e3.imag() + z2 * e1.imag();
                    else
                        phase = z1 * e3.real() + z2 * e1.real();
                    sre += std::cos(phase);
                    sim += std::sin(phase);
                    e3 *= rot3;
                    e1 *= rot1;
                    if ((j & 1023) == 1023) {
                        e3 /= std::abs(e3);
                        e1 /= std::abs(e1);
                    }
                }
                inner_re = sre * h;
                inner_im = sim * h;
                np += N;
            }
            const cplx inner(inner_re, inner_im);
            for (int c = 0; c < nch; ++c)
                acc[size_t(c)] += wq * chi * sh.amp(r, channels[size_t(c)].alpha,
                                                    channels[size_t(c)].beta) * inner;
        }
        partial[size_t(ip)] = std::move(acc);
        pts[size_t(ip)] = np;
    });

    StageResult out;
    out.vals.assign(size_t(nch), cplx(0, 0));
    for (int c = 0; c < nch; ++c) {
        KahanSumC s;
        for (int ip = 0; ip < npanels; ++ip) s.add(partial[size_t(ip)][size_t(c)]);
        out.vals[size_t(c)] = s.value();
    }
    for (auto p : pts) out.points += p;
    return out;
}

double auto_base_radius(cplx u, double t) {
    double rst = 0.0;
    const auto st = solve_stationary(u);
    for (const auto& l : st.lambda_points) {
        const double m = std::abs(l);
        if (m >= 1.0) rst = std::max(rst, (m * m - 1.0) / m);
    }
    return std::max({3.0, 1.35 * rst, 3.5 * std::cbrt(1.0 / t)});
}

std::vector<OscIntResult> eval_multi(bool lambda_plane, double t, cplx u, Energy E,
                                     const std::vector<Channel>& channels,
                                     const QuadControl& quad) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("oscint: requires t > 0");
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
        throw std::invalid_argument("oscint: non-finite u");
    E.require_negative("oscint");
    for (const auto& c : channels) {
        if (!(c.alpha >= 0.0 && c.alpha < 1.0))
            throw std::invalid_argument("oscint: requires 0 <= alpha < 1");
        if (!std::isfinite(c.beta)) throw std::invalid_argument("oscint: non-finite beta");
    }
    if (lambda_plane && std::abs(E.value + 1.0) > 1e-12)
        throw std::domain_error("eval_I_lambda: the lambda form is specific to E = -1");

    RadialShape sh;
    sh.lambda_plane = lambda_plane;
    sh.Eabs = E.abs();
    sh.umod = std::abs(u);
    sh.upsi = std::arg(u);

    // Stationary radii (for panel refinement hooks).
    std::vector<double> refine;
    {
        const auto st = solve_stationary(u);
        for (const auto& l : st.lambda_points) {
            const double m = std::abs(l);
            if (m >= 1.0)
                refine.push_back(lambda_plane ? m : (m * m - 1.0) / m);
        }
    }

    const double R0 = quad.cutoff_radius > 0.0 ? quad.cutoff_radius : auto_base_radius(u, t);
    const double W0 = std::min(R0, std::max(0.75, 9.0 * std::cbrt(1.0 / t)));
    const int levels = std::max(2, quad.richardson_levels);

    auto budget = [&](double R, double W) {
        const double edge = sh.r_of_xi(R + W);
        return t * (sh.z1t(edge) + sh.z2t(edge));
    };
    const double growth = (budget(R0, W0) > 3e4) ? 1.3 : 2.0;

    const int nch = int(channels.size());
    std::vector<OscIntResult> res(static_cast<size_t>(nch));
    std::vector<cplx> prev(static_cast<size_t>(nch));
    long long points = 0;

    for (int j = 0; j < levels; ++j) {
        const double R = R0 * std::pow(growth, j);
        const double W = W0 * std::pow(growth, j);
        bool use_bessel;
        switch (quad.angular) {
            case QuadControl::Angular::DIRECT: use_bessel = false; break;
            case QuadControl::Angular::BESSEL: use_bessel = true; break;
            default: use_bessel = budget(R, W) > 2.5e4; break;
        }
        auto stage = run_stage(sh, t, channels, R, W, use_bessel, quad, refine);
        points += stage.points;
        if (j > 0) {
            bool all_ok = true;
            for (int c = 0; c < nch; ++c) {
                const double diff = std::abs(stage.vals[size_t(c)] - prev[size_t(c)]);
                const double scale = std::max({std::abs(stage.vals[size_t(c)]),
                                               std::abs(prev[size_t(c)]), quad.abs_floor});
                res[size_t(c)].stabilization_error = diff;
                res[size_t(c)].converged = diff <= quad.rel_tol * scale + quad.abs_floor;
                all_ok = all_ok && res[size_t(c)].converged;
            }
            for (int c = 0; c < nch; ++c) {
                res[size_t(c)].value = stage.vals[size_t(c)];
                res[size_t(c)].cutoff_final = R;
            }
            if (all_ok) break;
        } else {
            for (int c = 0; c < nch; ++c) {
                res[size_t(c)].value = stage.vals[size_t(c)];
                res[size_t(c)].cutoff_final = R;
            }
        }
        prev = stage.vals;
    }
    for (auto& r : res) r.panels_used = points;
    return res;
}

}  // namespace

OscIntResult eval_I_xi(const OscIntQuery& q) {
    return eval_I_xi_multi(q.t, q.u, q.E, {{q.alpha, q.beta}}, q.quad)[0];
}

OscIntResult eval_I_lambda(const OscIntQuery& q) {
    if (std::abs(q.E.value + 1.0) > 1e-12)
        throw std::domain_error("eval_I_lambda: requires E = -1");
    return eval_I_lambda_multi(q.t, q.u, {{q.alpha, q.beta}}, q.quad)[0];
}

std::vector<OscIntResult> eval_I_xi_multi(double t, cplx u, Energy E,
                                          const std::vector<Channel>& channels,
                                          const QuadControl& quad) {
    return eval_multi(false, t, u, E, channels, quad);
}

std::vector<OscIntResult> eval_I_lambda_multi(double t, cplx u,
                                              const std::vector<Channel>& channels,
                                              const QuadControl& quad) {
    return eval_multi(true, t, u, Energy(-1.0), channels, quad);
}

double scaling_identity_check(double t, cplx u, Energy E, double alpha, double beta,
                              const QuadControl& quad) {
    E.require_negative("scaling_identity_check");
    const double aE = E.abs();

    QuadControl ql = quad;
    if (ql.cutoff_radius <= 0.0) ql.cutoff_radius = auto_base_radius(u, t);
    OscIntQuery lhs{t, u, E, alpha, beta, ql};
    const auto L = eval_I_xi(lhs);

    QuadControl qr = quad;
    qr.cutoff_radius = ql.cutoff_radius / std::sqrt(aE);
    OscIntQuery rhs{std::pow(aE, 1.5) * t, u / aE, Energy(-1.0), alpha, beta, qr};
    const auto Rv = eval_I_xi(rhs);

    const cplx factor = std::polar(std::pow(aE, 0.5 * (alpha + 2.0)), 0.5 * beta * std::log(aE));
    const double denom = std::max(std::abs(L.value), 1e-300);
    return std::abs(L.value - factor * Rv.value) / denom;
}

std::vector<DecayProbe> decay_probe_channels(const std::vector<Channel>& channels,
                                             const std::vector<cplx>& u_set,
                                             const std::vector<double>& t_grid, Energy E,
                                             const QuadControl& quad,
                                             const std::vector<double>& comp_exponents,
                                             double slack) {
    if (t_grid.size() < 2) throw std::invalid_argument("decay_probe: need >= 2 times");
    if (std::abs(E.value + 1.0) > 1e-12)
        throw std::domain_error("decay_probe: probes run at E = -1");
    if (channels.size() != comp_exponents.size())
        throw std::invalid_argument("decay_probe: one exponent per channel");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("decay_probe: t grid must increase");

    const size_t nch = channels.size();
    // results[c].table[iu][it]
    std::vector<DecayProbe> out(nch);
    for (size_t c = 0; c < nch; ++c) out[c].table.assign(u_set.size(), {});

    std::vector<std::vector<std::vector<OscIntResult>>> all(u_set.size());
    for (size_t iu = 0; iu < u_set.size(); ++iu) {
        all[iu].resize(t_grid.size());
        for (size_t it = 0; it < t_grid.size(); ++it)
            all[iu][it] = eval_I_lambda_multi(t_grid[it], u_set[iu], channels, quad);
    }

    const double floor = 10.0 * quad.abs_floor;
    for (size_t c = 0; c < nch; ++c) {
        DecayProbe& probe = out[c];
        probe.worst_ratio = 0.0;
        bool ratios_ok = true;
        std::vector<double> env_max(t_grid.size(), 0.0);
        std::vector<bool> env_have(t_grid.size(), false);
        for (size_t iu = 0; iu < u_set.size(); ++iu) {
            auto& row = probe.table[iu];
            row.reserve(t_grid.size());
            std::vector<double> lx, ly, comps;
            for (size_t it = 0; it < t_grid.size(); ++it) {
                const auto& r = all[iu][it][c];
                row.push_back(r);
                if (!r.converged) continue;
                const double a = std::abs(r.value);
                // sub-floor magnitudes are noise around an exponentially
                // small value: no slope information, any bound holds
                if (a <= floor) continue;
                lx.push_back(std::log(t_grid[it]));
                ly.push_back(std::log(a));
                env_max[it] = std::max(env_max[it], a);
                env_have[it] = true;
                comps.push_back(a * std::pow(t_grid[it], comp_exponents[c]) /
                                (1.0 + std::abs(channels[c].beta)));
            }
            double run_min = std::numeric_limits<double>::infinity();
            for (double v : comps) {
                if (std::isfinite(run_min) && run_min > 0.0) {
                    const double ratio = v / run_min;
                    probe.worst_ratio = std::max(probe.worst_ratio, ratio);
                    if (ratio > slack) ratios_ok = false;
                }
                run_min = std::min(run_min, v);
            }
            DecayFit f;
            f.alpha = channels[c].alpha;
            f.t_lo = t_grid.front();
            f.t_hi = t_grid.back();
            f.n_points = int(lx.size());
            if (lx.size() >= 2) {
                auto lf = fit_line(lx, ly);
                f.exponent = lf.slope;
                f.constant = lf.intercept;
                f.rms_residual = lf.rms;
            } else {
                f.exponent = std::numeric_limits<double>::quiet_NaN();
            }
            probe.fits.push_back(f);
        }
        std::vector<double> ex, ey;
        for (size_t it = 0; it < t_grid.size(); ++it)
            if (env_have[it] && env_max[it] > 0.0) {
                ex.push_back(std::log(t_grid[it]));
                ey.push_back(std::log(env_max[it]));
            }
        probe.envelope.alpha = channels[c].alpha;
        probe.envelope.t_lo = t_grid.front();
        probe.envelope.t_hi = t_grid.back();
        probe.envelope.n_points = int(ex.size());
        if (ex.size() >= 2) {
            auto lf = fit_line(ex, ey);
            probe.envelope.exponent = lf.slope;
            probe.envelope.constant = lf.intercept;
            probe.envelope.rms_residual = lf.rms;
        } else {
            probe.envelope.exponent = std::numeric_limits<double>::quiet_NaN();
        }
        probe.bound_ok = ratios_ok;
    }
    return out;
}

DecayProbe decay_probe(double alpha, double beta, const std::vector<cplx>& u_set,
                       const std::vector<double>& t_grid, Energy E, const QuadControl& quad,
                       double comp_exponent, double slack) {
    return decay_probe_channels({{alpha, beta}}, u_set, t_grid, E, quad, {comp_exponent},
                                slack)[0];
}

std::vector<double> log_grid(double t_lo, double t_hi, int n) {
    if (!(t_hi > t_lo) || n < 2) throw std::invalid_argument("log_grid: bad range");
    std::vector<double> g(static_cast<size_t>(n));
    const double step = std::log(t_hi / t_lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[size_t(i)] = t_lo * std::exp(step * i);
    g.front() = t_lo;
    g.back() = t_hi;
    return g;
}

}  // namespace nv
