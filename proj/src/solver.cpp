#include "nvlab/solver.hpp"

#include <algorithm>
#include <array>

#include "nvlab/symbols.hpp"

namespace nv {

namespace {

// dz has Fourier factor (i/2) conj(xi), dzb has (i/2) xi, xi = kx + i ky.
cplx dz_factor(double kx, double ky) { return 0.5 * cplx(ky, kx); }
cplx dzb_factor(double kx, double ky) { return 0.5 * cplx(-ky, kx); }

SpectralField2D spectral_of_state(const RealField2D& v) {
    auto vh = to_spectral(v);
    apply_dealias(vh);
    return vh;
}

SpectralField2D w_hat_of(const SpectralField2D& vh) {
    SpectralField2D wh(vh.grid);
    const auto& g = vh.grid;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const size_t i = g.idx(ix, iy);
            wh.c[i] = -3.0 * multiplier_m(g.kx(ix), g.ky(iy)) * vh.c[i];
        }
    }
    wh.c[0] = cplx(0, 0);
    return wh;
}

// Quadratic part of the right-hand side in spectral space:
//   2 dz(v w) + 2 dzb(v conj(w)), using F[v conj(w)](k) = conj(F[v w](-k)).
SpectralField2D nonlinear_hat(const SpectralField2D& vh) {
    const auto& g = vh.grid;
    auto v_phys = to_physical(vh);
    auto w_phys = to_physical(w_hat_of(vh));
    ComplexField2D prod(g);
    for (size_t i = 0; i < prod.a.size(); ++i) prod.a[i] = v_phys.a[i].real() * w_phys.a[i];
    auto gh = to_spectral(prod);
    apply_dealias(gh);

    SpectralField2D out(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const size_t i = g.idx(ix, iy);
            const size_t j = g.idx((g.nx - ix) % g.nx, (g.ny - iy) % g.ny);
            const double kx = g.kx(ix), ky = g.ky(iy);
            out.c[i] = 2.0 * dz_factor(kx, ky) * gh.c[i] +
                       2.0 * dzb_factor(kx, ky) * std::conj(gh.c[j]);
        }
    }
    return out;
}

void check_finite(const SpectralField2D& f, const char* who) {
    for (const auto& z : f.c)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NanDetected(std::string(who) + ": non-finite state");
}

}  // namespace

NVState::NVState(const GridSpec& g, const RealField2D& v0, Energy e)
    : grid(g), v(v0), t(0.0), E(e) {
    g.validate();
    if (!v0.grid.same_shape(g)) throw std::invalid_argument("NVState: field/grid shape mismatch");
    w = compute_w(v);
}

ComplexField2D compute_w(const RealField2D& v) { return to_physical(w_hat_of(to_spectral(v))); }

RealField2D nv_rhs(const NVState& s, bool linear_only) {
    const auto& g = s.grid;
    auto vh = spectral_of_state(s.v);
    SpectralField2D rhs(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const size_t i = g.idx(ix, iy);
            const double p = symbol_p(cplx(g.kx(ix), g.ky(iy)), s.E);
            rhs.c[i] = cplx(0.0, -p) * vh.c[i];
        }
    }
    if (!linear_only) {
        auto nl = nonlinear_hat(vh);
        for (size_t i = 0; i < rhs.c.size(); ++i) rhs.c[i] += nl.c[i];
    }
    return to_real(rhs);
}

Etdrk4::Etdrk4(const GridSpec& g, Energy E, double dt) : grid_(g), E_(E), dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("Etdrk4: dt must be > 0");
    g.validate();
    const size_t n = g.size();
    e_full_.resize(n);
    e_half_.resize(n);
    q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);

    // phi-function combinations by circle averaging, uniformly stable
    // through the removable singularity at z = 0.
    constexpr int M = 32;
    std::array<cplx, M> ring;
    for (int j = 0; j < M; ++j) ring[size_t(j)] = std::polar(1.0, two_pi * (j + 0.5) / M);

    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const size_t i = g.idx(ix, iy);
            const double p = symbol_p(cplx(g.kx(ix), g.ky(iy)), E);
            const cplx z0 = cplx(0.0, -p * dt);
            e_full_[i] = std::exp(z0);
            e_half_[i] = std::exp(0.5 * z0);
            cplx q(0, 0), f1(0, 0), f2(0, 0), f3(0, 0);
            for (int j = 0; j < M; ++j) {
                const cplx z = z0 + ring[size_t(j)];
                const cplx ez = std::exp(z);
                const cplx z2 = z * z, z3 = z2 * z;
                q += (std::exp(0.5 * z) - 1.0) / z;
                f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z2)) / z3;
                f2 += (2.0 + z + ez * (-2.0 + z)) / z3;
                f3 += (-4.0 - 3.0 * z - z2 + ez * (4.0 - z)) / z3;
            }
            q_[i] = dt * q / double(M);
            f1_[i] = dt * f1 / double(M);
            f2_[i] = dt * f2 / double(M);
            f3_[i] = dt * f3 / double(M);
        }
    }
}

void Etdrk4::step(NVState& s, const StepControl& ctl) const {
    if (!s.grid.same_shape(grid_)) throw std::invalid_argument("Etdrk4: grid mismatch");
    const size_t n = grid_.size();
    auto vh = spectral_of_state(s.v);

    auto N = [&](const SpectralField2D& f) {
        if (ctl.linear_only) return SpectralField2D(grid_);
        return nonlinear_hat(f);
    };

    const auto Nv = N(vh);
    SpectralField2D a(grid_), b(grid_), c(grid_), vn(grid_);
    for (size_t i = 0; i < n; ++i) a.c[i] = e_half_[i] * vh.c[i] + q_[i] * Nv.c[i];
    const auto Na = N(a);
    for (size_t i = 0; i < n; ++i) b.c[i] = e_half_[i] * vh.c[i] + q_[i] * Na.c[i];
    const auto Nb = N(b);
    for (size_t i = 0; i < n; ++i) c.c[i] = e_half_[i] * a.c[i] + q_[i] * (2.0 * Nb.c[i] - Nv.c[i]);
    const auto Nc = N(c);
    for (size_t i = 0; i < n; ++i)
        vn.c[i] = e_full_[i] * vh.c[i] + f1_[i] * Nv.c[i] + 2.0 * f2_[i] * (Na.c[i] + Nb.c[i]) +
                  f3_[i] * Nc.c[i];

    check_finite(vn, "Etdrk4::step");
    if (ctl.enforce_reality) enforce_hermitian(vn);
    s.v = to_real(vn);
    s.w = to_physical(w_hat_of(vn));
    s.t += dt_;
}

NVState evolve(const NVState& s0, double T, const StepControl& ctl) {
    if (!(T >= 0.0)) throw std::invalid_argument("evolve: T must be >= 0");
    NVState s = s0;
    if (T == 0.0) return s;
    const long nfull = long(std::floor(T / ctl.dt + 1e-9));
    const double rem = T - nfull * ctl.dt;
    if (nfull > 0) {
        Etdrk4 stepper(s.grid, s.E, ctl.dt);
        for (long k = 0; k < nfull; ++k) stepper.step(s, ctl);
    }
    if (rem > 1e-12 * ctl.dt) {
        Etdrk4 tail(s.grid, s.E, rem);
        tail.step(s, ctl);
    }
    s.t = s0.t + T;
    return s;
}

InvariantReport invariants(const NVState& s) {
    const auto& g = s.grid;
    auto vh = to_spectral(s.v);
    auto wh = w_hat_of(vh);

    SpectralField2D dzv(g), dzw(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const size_t i = g.idx(ix, iy);
            const cplx f = dz_factor(g.kx(ix), g.ky(iy));
            dzv.c[i] = f * vh.c[i];
            dzw.c[i] = f * wh.c[i];
        }
    }
    auto w = to_physical(wh);
    auto dv = to_physical(dzv);
    auto dw = to_physical(dzw);

    InvariantReport r;
    r.l1_integral = integral(s.v);
    KahanSumC mass, en, en2;
    for (size_t i = 0; i < g.size(); ++i) {
        const double v = s.v.a[i];
        const cplx W = w.a[i];
        mass.add(v * W);
        en.add(6.0 * dw.a[i] * dv.a[i] + s.E.value * W * W - v * W * W);
        en2.add(6.0 * std::conj(dw.a[i]) * dv.a[i] + s.E.value * std::norm(W) - v * std::norm(W));
    }
    r.mass = mass.value() * g.cell();
    r.energy = en.value() * g.cell();
    r.energy_conj_paired = en2.value() * g.cell();
    return r;
}

RealField2D apply_propagator(const RealField2D& v0, Energy E, double t) {
    const auto& g = v0.grid;
    auto vh = to_spectral(v0);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const size_t i = g.idx(ix, iy);
            const double p = symbol_p(cplx(g.kx(ix), g.ky(iy)), E);
            vh.c[i] *= std::polar(1.0, -p * t);
        }
    }
    return to_real(vh);
}

RealField2D preset_gaussian(const GridSpec& g, double amplitude, double sigma) {
    RealField2D f(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix), y = g.y(iy);
            f.at(ix, iy) = amplitude * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
        }
    return f;
}

RealField2D preset_single_mode(const GridSpec& g, int mx, int my, double amplitude) {
    RealField2D f(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            f.at(ix, iy) =
                amplitude * std::cos(two_pi * mx * g.x(ix) / g.Lx + two_pi * my * g.y(iy) / g.Ly);
    return f;
}

double kdv_soliton_speed(double c, Energy E, double v_mean) {
    // Substituting v(s,x) = -(c/2) sech^2(sqrt(c)(x - speed s)/2) into
    // dv/dt = 2 dx(vxx - 3 v^2 + 3 E v) + 6 mean(v) dx v and using
    // psi''' + 6 psi psi' = c psi' for psi = -v gives
    // speed = -6E - 2c - 6 mean(v).
    return -6.0 * E.value - 2.0 * c - 6.0 * v_mean;
}

double kdv_soliton_mean(const GridSpec& g, double c) {
    const double sq = std::sqrt(c);
    KahanSum s;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double sech = 1.0 / std::cosh(0.5 * sq * g.x(ix));
        s.add(-0.5 * c * sech * sech);
    }
    return s.value() / g.nx;
}

RealField2D kdv_soliton_exact(const GridSpec& g, double c, Energy E, double s) {
    RealField2D f(g);
    const double speed = kdv_soliton_speed(c, E, kdv_soliton_mean(g, c));
    const double sq = std::sqrt(c);
    for (int ix = 0; ix < g.nx; ++ix) {
        double x = g.x(ix) - speed * s;
        x -= g.Lx * std::round(x / g.Lx);  // periodic wrap
        const double sech = 1.0 / std::cosh(0.5 * sq * x);
        const double val = -0.5 * c * sech * sech;
        for (int iy = 0; iy < g.ny; ++iy) f.at(ix, iy) = val;
    }
    return f;
}

RealField2D preset_kdv_soliton(const GridSpec& g, double c) {
    return kdv_soliton_exact(g, c, Energy(-1.0), 0.0);
}

namespace {

// 8th-order centered first derivative on a plain (non-periodic) dense grid;
// the outermost 4 rows/columns are left at zero.
void fd_deriv(const std::vector<double>& in, std::vector<double>& out, int n, double h,
              bool along_x) {
    static const double c1 = 4.0 / 5.0, c2 = -1.0 / 5.0, c3 = 4.0 / 105.0, c4 = -1.0 / 280.0;
    out.assign(in.size(), 0.0);
    const double ih = 1.0 / h;
    auto at = [&](int ix, int iy) { return in[size_t(iy) * n + ix]; };
    for (int iy = 4; iy < n - 4; ++iy) {
        for (int ix = 4; ix < n - 4; ++ix) {
            double d;
            if (along_x)
                d = c1 * (at(ix + 1, iy) - at(ix - 1, iy)) +
                    c2 * (at(ix + 2, iy) - at(ix - 2, iy)) +
                    c3 * (at(ix + 3, iy) - at(ix - 3, iy)) +
                    c4 * (at(ix + 4, iy) - at(ix - 4, iy));
            else
                d = c1 * (at(ix, iy + 1) - at(ix, iy - 1)) +
                    c2 * (at(ix, iy + 2) - at(ix, iy - 2)) +
                    c3 * (at(ix, iy + 3) - at(ix, iy - 3)) +
                    c4 * (at(ix, iy + 4) - at(ix, iy - 4));
            out[size_t(iy) * n + ix] = d * ih;
        }
    }
}

}  // namespace

double blowup_residual(const BlowupParams& p, int n, double box_half, double window_half) {
    if (n < 64) throw std::invalid_argument("blowup_residual: grid too small");
    if (!(window_half < box_half)) throw std::invalid_argument("blowup_residual: window > box");
    const double h = 2.0 * box_half / n;
    std::vector<double> F(size_t(n) * n), L(size_t(n) * n), G(size_t(n) * n);
    double fmin = std::numeric_limits<double>::infinity();
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double x = -box_half + ix * h, y = -box_half + iy * h;
            const double r2 = x * x + y * y;
            const double f = p.a + p.c * (x * x * x + y * y * y) + p.d * r2 * r2;
            fmin = std::min(fmin, f);
            F[size_t(iy) * n + ix] = f;
        }
    }
    if (!(fmin > 0.0))
        throw std::domain_error("blowup_residual: argument of the logarithm is not positive");
    for (size_t i = 0; i < F.size(); ++i) {
        L[i] = std::log(F[i]);
        G[i] = 1.0 / F[i];
    }

    auto dx = [&](const std::vector<double>& a, std::vector<double>& o) {
        fd_deriv(a, o, n, h, true);
    };
    auto dy = [&](const std::vector<double>& a, std::vector<double>& o) {
        fd_deriv(a, o, n, h, false);
    };

    std::vector<double> t1, t2, t3, t4;
    std::vector<double> v(F.size(), 0.0), w1(F.size()), w2(F.size());
    dx(L, t1);
    dx(t1, t2);
    dy(L, t3);
    dy(t3, t4);
    for (size_t i = 0; i < v.size(); ++i) {
        v[i] = -2.0 * (t2[i] + t4[i]);   // v = -2 Lap log F
        w1[i] = 6.0 * (t2[i] - t4[i]);   // w = 24 dz^2 log F
    }
    dy(t1, t2);
    for (size_t i = 0; i < v.size(); ++i) w2[i] = -12.0 * t2[i];

    std::vector<double> vt(F.size());
    dx(G, t1);
    dx(t1, t2);
    dy(G, t3);
    dy(t3, t4);
    for (size_t i = 0; i < v.size(); ++i) vt[i] = 48.0 * p.c * (t2[i] + t4[i]);

    std::vector<double> disp(F.size());
    dx(v, t1);
    dx(t1, t2);
    dy(v, t3);
    dy(t3, t4);
    for (size_t i = 0; i < v.size(); ++i) t1[i] = t2[i] - 3.0 * t4[i];
    dx(t1, disp);

    std::vector<double> trans(F.size());
    for (size_t i = 0; i < v.size(); ++i) t1[i] = v[i] * w1[i];
    dx(t1, t2);
    for (size_t i = 0; i < v.size(); ++i) t1[i] = v[i] * w2[i];
    dy(t1, t3);
    for (size_t i = 0; i < v.size(); ++i) trans[i] = 2.0 * (t2[i] + t3[i]);

    const int lo = std::max(16, int((box_half - window_half) / h) + 1);
    const int hi = n - lo;
    double res_sup = 0.0, term_sup = 0.0;
    for (int iy = lo; iy < hi; ++iy) {
        for (int ix = lo; ix < hi; ++ix) {
            const size_t i = size_t(iy) * n + ix;
            const double dispersive = 2.0 * disp[i];
            const double rhs = dispersive + trans[i];
            res_sup = std::max(res_sup, std::abs(vt[i] - rhs));
            term_sup =
                std::max({term_sup, std::abs(dispersive), std::abs(trans[i]), std::abs(vt[i])});
        }
    }
    return res_sup / term_sup;
}

double scaling_symmetry_check(const std::function<double(double, double)>& sample,
                              const GridSpec& g, Energy E, double lambda, double T, double dt) {
    if (!(lambda > 0.0)) throw std::invalid_argument("scaling_symmetry_check: lambda > 0");
    RealField2D v0(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) v0.at(ix, iy) = sample(g.x(ix), g.y(iy));
    if (spectral_tail_fraction(to_spectral(v0)) > 1e-10)
        throw std::domain_error("scaling_symmetry_check: initial data underresolved");

    StepControl ctl;
    ctl.dt = dt;
    NVState A(g, v0, E);
    A = evolve(A, T, ctl);

    GridSpec gb = g;
    gb.Lx /= lambda;
    gb.Ly /= lambda;
    RealField2D vb(gb);
    const double l2 = lambda * lambda;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) vb.at(ix, iy) = l2 * sample(g.x(ix), g.y(iy));
    StepControl ctlb = ctl;
    ctlb.dt = dt / (lambda * lambda * lambda);
    NVState B(gb, vb, Energy(E.value * l2));
    B = evolve(B, T / (lambda * lambda * lambda), ctlb);

    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < A.v.a.size(); ++i) {
        const double ref = l2 * A.v.a[i];
        num += (B.v.a[i] - ref) * (B.v.a[i] - ref);
        den += ref * ref;
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

PropagatorDecayTable propagator_decay_probe(const RealField2D& v0, double alpha, double beta,
                                            Energy E, const std::vector<double>& t_grid,
                                            double eps) {
    E.require_negative("propagator_decay_probe");
    if (!(alpha >= 0.0 && alpha < 1.0 && beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("propagator_decay_probe: needs 0 <= alpha < 1, beta in [0,1]");
    const auto& g = v0.grid;
    auto vh = to_spectral(v0);
    if (spectral_tail_fraction(vh) > 1e-10)
        throw std::domain_error("propagator_decay_probe: initial data underresolved");

    const bool sup = (beta >= 1.0);
    const double pnorm = sup ? 0.0 : 2.0 / (1.0 - beta);
    const double decay = beta * ((alpha + 3.0) / 4.0 - eps);

    PropagatorDecayTable out;
    std::vector<double> lx, ly;
    for (double t : t_grid) {
        SpectralField2D ut(g);
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                const size_t i = g.idx(ix, iy);
                const cplx xi(g.kx(ix), g.ky(iy));
                const double frac =
                    (alpha * beta == 0.0) ? 1.0 : std::pow(0.5 * std::abs(xi), alpha * beta);
                const double p = symbol_p(xi, E);
                ut.c[i] = vh.c[i] * frac * std::polar(1.0, -p * t);
            }
        }
        auto u = to_real(ut);
        double nrm;
        if (sup) {
            nrm = norm_sup(u);
        } else if (pnorm == 2.0) {
            nrm = norm_l2(u);
        } else {
            KahanSum s;
            for (double x : u.a) s.add(std::pow(std::abs(x), pnorm));
            nrm = std::pow(s.value() * g.cell(), 1.0 / pnorm);
        }
        PropagatorDecayRow row;
        row.t = t;
        row.norm = nrm;
        row.ratio = (t > 0.0) ? nrm * std::pow(t, decay) : nrm;
        out.rows.push_back(row);
        if (t > 0.0 && nrm > 0.0) {
            lx.push_back(std::log(t));
            ly.push_back(std::log(nrm));
        }
    }
    out.fitted_exponent =
        (lx.size() >= 2) ? fit_line(lx, ly).slope : std::numeric_limits<double>::quiet_NaN();
    double run_min = std::numeric_limits<double>::infinity();
    out.bound_ok = true;
    for (const auto& row : out.rows) {
        if (row.t <= 0.0) continue;
        if (std::isfinite(run_min) && row.ratio > 3.0 * run_min) out.bound_ok = false;
        run_min = std::min(run_min, row.ratio);
    }
    return out;
}

}  // namespace nv
