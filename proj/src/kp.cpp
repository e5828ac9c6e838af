#include "nvlab/kp.hpp"

#include <array>

namespace nv {

namespace {

// spectral d/dx^{px} d/dY^{py}, with negative px meaning the x-antiderivative
// (zero on kx = 0 modes)
SpectralField2D spectral_op(const SpectralField2D& f, int px, int py) {
    SpectralField2D out = f;
    const auto& g = f.grid;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const size_t i = g.idx(ix, iy);
            const double kx = g.kx(ix), ky = g.ky(iy);
            cplx m(1.0, 0.0);
            if (px >= 0) {
                for (int k = 0; k < px; ++k) m *= cplx(0.0, kx);
            } else {
                if (kx == 0.0) {
                    out.c[i] = cplx(0, 0);
                    continue;
                }
                for (int k = 0; k < -px; ++k) m /= cplx(0.0, kx);
            }
            for (int k = 0; k < py; ++k) m *= cplx(0.0, ky);
            out.c[i] *= m;
        }
    }
    return out;
}

RealField2D op(const RealField2D& f, int px, int py) {
    return to_real(spectral_op(to_spectral(f), px, py));
}

RealField2D dealiased_product(const RealField2D& a, const RealField2D& b) {
    RealField2D p(a.grid);
    for (size_t i = 0; i < p.a.size(); ++i) p.a[i] = a.a[i] * b.a[i];
    auto ph = to_spectral(p);
    apply_dealias(ph);
    return to_real(ph);
}

double rel_norm(const RealField2D& num, double den) {
    return den > 0.0 ? norm_l2(num) / den : norm_l2(num);
}

double offset_of(double kappa, KpSign sign) {
    return (sign == KpSign::PLUS ? -3.0 : 3.0) * kappa * kappa;
}

double energy_of(double kappa, KpSign sign) {
    return (sign == KpSign::PLUS ? 1.0 : -1.0) * kappa * kappa;
}

// coefficient of the nonlocal term of the limit equation
double nonlocal_coef(KpSign sign) { return sign == KpSign::PLUS ? -24.0 : 24.0; }

}  // namespace

void require_x_mean_free(const RealField2D& v0, double tol) {
    const auto& g = v0.grid;
    auto vh = to_spectral(v0);
    double scale = 0.0;
    for (const auto& z : vh.c) scale = std::max(scale, std::abs(z));
    for (int iy = 1; iy < g.ny; ++iy)
        if (std::abs(vh.c[g.idx(0, iy)]) > tol * std::max(scale, 1e-300))
            throw std::domain_error("kp: x-mean varies across Y (x-antiderivative undefined)");
}

KpAnsatz build_ansatz(const RealField2D& v0, double kappa, KpSign sign) {
    if (!(kappa > 0.0)) throw std::invalid_argument("build_ansatz: kappa must be > 0");
    require_x_mean_free(v0);
    KpAnsatz a;
    a.grid = v0.grid;
    a.kappa = kappa;
    a.sign = sign;
    a.v = v0;
    const double off = offset_of(kappa, sign);
    auto corr1 = op(v0, -2, 2);  // dx^{-2} dYY v0
    auto corr2 = op(v0, -1, 1);  // dx^{-1} dY v0
    a.w1 = RealField2D(v0.grid);
    a.w2 = RealField2D(v0.grid);
    a.w1_varying = RealField2D(v0.grid);
    a.w1_offset = off;
    const double k2 = kappa * kappa;
    for (size_t i = 0; i < v0.a.size(); ++i) {
        const double varying = -3.0 * v0.a[i] + 6.0 / k2 * corr1.a[i];
        a.w1_varying.a[i] = varying;
        a.w1.a[i] = off + varying;
        a.w2.a[i] = 6.0 / kappa * corr2.a[i];
    }
    return a;
}

AnsatzResiduals residual_constraints(const KpAnsatz& a) {
    const double kappa = a.kappa;
    // the constant offset differentiates to zero exactly; the varying part
    // is kept separately so the cancellation happens at machine precision
    const RealField2D& w1v = a.w1_varying;
    auto w1x = op(w1v, 1, 0);
    auto w2y = op(a.w2, 0, 1);
    auto w1y = op(w1v, 0, 1);
    auto w2x = op(a.w2, 1, 0);
    auto vx = op(a.v, 1, 0);
    auto vy = op(a.v, 0, 1);

    RealField2D rb(a.grid), rc(a.grid);
    for (size_t i = 0; i < rb.a.size(); ++i) {
        rb.a[i] = w1x.a[i] - w2y.a[i] / kappa + 3.0 * vx.a[i];
        rc.a[i] = w2x.a[i] + w1y.a[i] / kappa - 3.0 * vy.a[i] / kappa;
    }
    auto closed = op(a.v, -2, 3);  // dx^{-2} dYYY v0
    RealField2D mismatch(a.grid);
    const double c3 = 6.0 / (kappa * kappa * kappa);
    for (size_t i = 0; i < mismatch.a.size(); ++i)
        mismatch.a[i] = rc.a[i] - c3 * closed.a[i];

    AnsatzResiduals out;
    out.b_residual = rel_norm(rb, norm_l2(vx));
    out.c_norm = norm_l2(rc);
    out.c_closed_norm = c3 * norm_l2(closed);
    out.c_mismatch = rel_norm(mismatch, std::max(out.c_closed_norm, 1e-300));
    return out;
}

double residual_evolution(const RealField2D& v0_in, double kappa, KpSign sign) {
    // band-limit the input first: the kappa^2-weighted cancellations must see
    // the same spectral band on the product and linear routes
    auto vh = to_spectral(v0_in);
    apply_dealias(vh);
    const RealField2D v0 = to_real(vh);
    auto a = build_ansatz(v0, kappa, sign);
    const double E = energy_of(kappa, sign);
    const double k1 = 1.0 / kappa, k2 = k1 * k1;

    auto vxxx = op(v0, 3, 0);
    auto vvx = dealiased_product(v0, op(v0, 1, 0));
    auto nl = op(v0, -1, 2);
    RealField2D lhs(v0.grid);
    const double cnl = nonlocal_coef(sign);
    for (size_t i = 0; i < lhs.a.size(); ++i)
        lhs.a[i] = 2.0 * vxxx.a[i] - 12.0 * vvx.a[i] + cnl * nl.a[i];

    auto vxyy = op(v0, 1, 2);
    auto p1 = dealiased_product(v0, a.w1);
    auto p2 = dealiased_product(v0, a.w2);
    auto p1x = op(p1, 1, 0);
    auto p2y = op(p2, 0, 1);
    auto w1x = op(a.w1, 1, 0);
    auto w2y = op(a.w2, 0, 1);
    RealField2D rhs(v0.grid);
    for (size_t i = 0; i < rhs.a.size(); ++i)
        rhs.a[i] = 2.0 * vxxx.a[i] - 6.0 * k2 * vxyy.a[i] + 2.0 * p1x.a[i] +
                   2.0 * k1 * p2y.a[i] - 2.0 * E * w1x.a[i] - 2.0 * E * k1 * w2y.a[i];

    RealField2D res(v0.grid);
    for (size_t i = 0; i < res.a.size(); ++i) res.a[i] = lhs.a[i] - rhs.a[i];
    return norm_l2(res);
}

namespace {

// exponential integrator for the limit equation, mirrors the main stepper
class KpStepper {
  public:
    KpStepper(const GridSpec& g, KpSign sign, double dt) : grid_(g), dt_(dt) {
        const size_t n = g.size();
        e_full_.resize(n);
        e_half_.resize(n);
        q_.resize(n);
        f1_.resize(n);
        f2_.resize(n);
        f3_.resize(n);
        constexpr int M = 32;
        std::array<cplx, M> ring;
        for (int j = 0; j < M; ++j) ring[size_t(j)] = std::polar(1.0, two_pi * (j + 0.5) / M);
        const double cnl = nonlocal_coef(sign);
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                const size_t i = g.idx(ix, iy);
                const double kx = g.kx(ix), ky = g.ky(iy);
                // 2 (i kx)^3 + cnl (i ky)^2/(i kx)  (kx != 0)
                double sym = -2.0 * kx * kx * kx;
                if (kx != 0.0) sym += cnl * ky * ky / kx;
                const cplx z0 = cplx(0.0, sym * dt_);
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
                q_[i] = dt_ * q / double(M);
                f1_[i] = dt_ * f1 / double(M);
                f2_[i] = dt_ * f2 / double(M);
                f3_[i] = dt_ * f3 / double(M);
            }
        }
    }

    // -12 v vx = -6 dx(v^2), dealiased
    SpectralField2D nonlinear(const SpectralField2D& vh) const {
        auto v = to_real(vh);
        RealField2D sq(grid_);
        for (size_t i = 0; i < sq.a.size(); ++i) sq.a[i] = v.a[i] * v.a[i];
        auto sh = to_spectral(sq);
        apply_dealias(sh);
        auto out = spectral_op(sh, 1, 0);
        for (auto& z : out.c) z *= -6.0;
        return out;
    }

    void step(SpectralField2D& vh) const {
        const size_t n = grid_.size();
        const auto Nv = nonlinear(vh);
        SpectralField2D a(grid_), b(grid_), c(grid_);
        for (size_t i = 0; i < n; ++i) a.c[i] = e_half_[i] * vh.c[i] + q_[i] * Nv.c[i];
        const auto Na = nonlinear(a);
        for (size_t i = 0; i < n; ++i) b.c[i] = e_half_[i] * vh.c[i] + q_[i] * Na.c[i];
        const auto Nb = nonlinear(b);
        for (size_t i = 0; i < n; ++i)
            c.c[i] = e_half_[i] * a.c[i] + q_[i] * (2.0 * Nb.c[i] - Nv.c[i]);
        const auto Nc = nonlinear(c);
        for (size_t i = 0; i < n; ++i)
            vh.c[i] = e_full_[i] * vh.c[i] + f1_[i] * Nv.c[i] +
                      2.0 * f2_[i] * (Na.c[i] + Nb.c[i]) + f3_[i] * Nc.c[i];
        // the x-antiderivative demands these stay zero
        for (int iy = 1; iy < grid_.ny; ++iy) vh.c[grid_.idx(0, iy)] = cplx(0, 0);
        enforce_hermitian(vh);
    }

  private:
    GridSpec grid_;
    double dt_;
    std::vector<cplx> e_full_, e_half_, q_, f1_, f2_, f3_;
};

}  // namespace

RealField2D evolve_limit(const RealField2D& v0, double T, const KpStepControl& ctl, KpSign sign) {
    if (!(T >= 0.0)) throw std::invalid_argument("evolve_limit: T >= 0");
    require_x_mean_free(v0);
    auto vh = to_spectral(v0);
    apply_dealias(vh);
    const long nfull = long(std::floor(T / ctl.dt + 1e-9));
    const double rem = T - nfull * ctl.dt;
    if (nfull > 0) {
        KpStepper st(v0.grid, sign, ctl.dt);
        for (long k = 0; k < nfull; ++k) {
            st.step(vh);
            if (ctl.check_finite)
                for (const auto& z : vh.c)
                    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                        throw std::runtime_error("evolve_limit: non-finite state");
        }
    }
    if (rem > 1e-12 * ctl.dt) {
        KpStepper st(v0.grid, sign, rem);
        st.step(vh);
    }
    return to_real(vh);
}

RealField2D kp_soliton_exact(const GridSpec& g, double c, double t) {
    RealField2D f(g);
    const double sq = std::sqrt(c);
    for (int ix = 0; ix < g.nx; ++ix) {
        double x = g.x(ix) + 2.0 * c * t;
        x -= g.Lx * std::round(x / g.Lx);
        const double sech = 1.0 / std::cosh(0.5 * sq * x);
        const double val = -0.5 * c * sech * sech;
        for (int iy = 0; iy < g.ny; ++iy) f.at(ix, iy) = val;
    }
    return f;
}

KpMapCheck kp_map_check(const RealField2D& v0, double t1, const KpStepControl& ctl, KpSign sign) {
    if (!(t1 > 0.0)) throw std::invalid_argument("kp_map_check: t1 > 0");
    const auto& g = v0.grid;

    // five snapshots at times {0, t1/2, t1, 3 t1/2, 2 t1}
    std::array<RealField2D, 5> snap;
    snap[0] = v0;
    for (int k = 1; k < 5; ++k)
        snap[size_t(k)] = evolve_limit(snap[size_t(k - 1)], 0.5 * t1, ctl, sign);

    // u(x, y, t) = -v0(-x, 2y, t/2): same lattice with the y side halved;
    // u-time is twice the evolution time
    GridSpec gu = g;
    gu.Ly = g.Ly / 2.0;
    auto map_u = [&](const RealField2D& v) {
        RealField2D u(gu);
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                const int jx = (g.nx - ix) % g.nx;  // x -> -x on the periodic lattice
                u.at(ix, iy) = -v.at(jx, iy);
            }
        return u;
    };

    auto kp_residual = [&](const RealField2D& um, const RealField2D& u0, const RealField2D& up,
                           double dt_u) {
        RealField2D ut(gu);
        for (size_t i = 0; i < ut.a.size(); ++i) ut.a[i] = (up.a[i] - um.a[i]) / (2.0 * dt_u);
        auto uh = to_spectral(u0);
        auto uxxx = to_real(spectral_op(uh, 3, 0));
        auto ux = to_real(spectral_op(uh, 1, 0));
        auto nloc = to_real(spectral_op(uh, -1, 2));
        const double s3 = (sign == KpSign::PLUS) ? 3.0 : -3.0;
        RealField2D r(gu);
        for (size_t i = 0; i < r.a.size(); ++i)
            r.a[i] = ut.a[i] + 6.0 * u0.a[i] * ux.a[i] + uxxx.a[i] - s3 * nloc.a[i];
        return norm_l2(r);
    };

    KpMapCheck out;
    const double du = t1;  // u-time spacing between consecutive snapshots
    out.residual = kp_residual(map_u(snap[0]), map_u(snap[2]), map_u(snap[4]), 2.0 * du);
    out.residual_half = kp_residual(map_u(snap[1]), map_u(snap[2]), map_u(snap[3]), du);
    out.extrapolated = std::abs(4.0 * out.residual_half - out.residual) / 3.0;

    KpStepControl fine = ctl;
    fine.dt = 0.5 * ctl.dt;
    auto ref = evolve_limit(v0, 2.0 * t1, fine, sign);
    RealField2D diff(g);
    for (size_t i = 0; i < diff.a.size(); ++i) diff.a[i] = snap[4].a[i] - ref.a[i];
    out.scheme_error = norm_l2(diff);
    // The snapshot residual is dominated by its own second-order time
    // differencing; a correct map leaves nothing beyond that truncation
    // (estimated by Richardson from the half-step residual) and the
    // integrator's refinement error. A wrong map leaves an O(1) component
    // that survives the refinement and fails this bound.
    const double truncation_est = std::abs(out.residual - out.residual_half) / 3.0;
    out.ok = out.residual_half <=
             10.0 * (truncation_est + out.scheme_error + 1e-12 * (1.0 + norm_l2(v0)));
    return out;
}

}  // namespace nv
