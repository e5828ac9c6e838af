#include "nvlab/xsb.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <random>
#include <tuple>

#include "nvlab/symbols.hpp"

namespace nv {

double CutoffSpec::phi_tilde(double s) {
    const double a = std::abs(s);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    return 1.0 - smoothstep5(2.0 * (a - 0.5));
}

double CutoffSpec::phi(double s) { return phi_tilde(s) - phi_tilde(2.0 * s); }

double CutoffSpec::phi_shell(double s, double N) {
    if (N < 1.0) throw std::invalid_argument("phi_shell: N must be >= 1");
    if (N == 1.0) return phi_tilde(s);
    return phi(s / N);
}

void SpaceTimeGrid::validate() const {
    auto pow2 = [](int n) { return n >= 8 && (n & (n - 1)) == 0; };
    if (!pow2(nt) || !pow2(nx) || !pow2(ny))
        throw std::invalid_argument("SpaceTimeGrid: nt, nx, ny must be powers of two, >= 8");
    if (!(T > 0.0) || !(Lx > 0.0) || !(Ly > 0.0))
        throw std::invalid_argument("SpaceTimeGrid: sides must be > 0");
}

double TimeWindow::value(double u) const {
    switch (kind) {
        case Kind::HANN: return 0.5 * (1.0 - std::cos(two_pi * u));
        case Kind::BUMP_C2:
        default:
            // compactly supported inside (1/8, 7/8), flat on [1/4, 3/4]
            if (u <= 0.125 || u >= 0.875) return 0.0;
            if (u < 0.25) return smoothstep5((u - 0.125) / 0.125);
            if (u > 0.75) return smoothstep5((0.875 - u) / 0.125);
            return 1.0;
    }
}

namespace {

struct Plan3 {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex g_mutex3;
std::map<std::tuple<int, int, int>, Plan3> g_plans3;

Plan3& plans3(int nt, int nx, int ny) {
    std::lock_guard<std::mutex> lk(g_mutex3);
    auto key = std::make_tuple(nt, nx, ny);
    auto it = g_plans3.find(key);
    if (it == g_plans3.end()) {
        std::vector<cplx> a(size_t(nt) * nx * ny), b(size_t(nt) * nx * ny);
        Plan3 p;
        // layout idx(it, ix, iy) = (it*ny + iy)*nx + ix  ->  dims (nt, ny, nx)
        p.fwd = fftw_plan_dft_3d(nt, ny, nx, reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.bwd = fftw_plan_dft_3d(nt, ny, nx, reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        it = g_plans3.emplace(key, p).first;
    }
    return it->second;
}

double bracket(double x) { return std::sqrt(1.0 + x * x); }

}  // namespace

std::vector<cplx> st_spectrum(const SpaceTimeField& f) {
    const auto& g = f.grid;
    std::vector<cplx> out(f.a.size());
    auto& p = plans3(g.nt, g.nx, g.ny);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(f.a.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double s = 1.0 / double(g.size());
    for (auto& z : out) z *= s;
    return out;
}

SpaceTimeField st_synthesis(const SpaceTimeGrid& g, const std::vector<cplx>& spec) {
    SpaceTimeField f(g);
    auto& p = plans3(g.nt, g.nx, g.ny);
    fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(spec.data())),
                     reinterpret_cast<fftw_complex*>(f.a.data()));
    return f;
}

void apply_window(SpaceTimeField& f) {
    const auto& g = f.grid;
    for (int it = 0; it < g.nt; ++it) {
        const double w = f.window.value(double(it) / g.nt);
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) f.a[g.idx(it, ix, iy)] *= w;
    }
    f.windowed = true;
}

SpaceTimeField project_PN(const SpaceTimeField& f, double N, Energy E) {
    const auto& g = f.grid;
    const double en = 1.0 / std::sqrt(E.abs());
    auto spec = st_spectrum(f);
    for (int it = 0; it < g.nt; ++it)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                const double k = std::hypot(g.kx(ix), g.ky(iy));
                spec[g.idx(it, ix, iy)] *= CutoffSpec::phi_shell(en * k, N);
            }
    auto out = st_synthesis(g, spec);
    out.window = f.window;
    out.windowed = f.windowed;
    return out;
}

SpaceTimeField project_QL(const SpaceTimeField& f, double L, Energy E) {
    const auto& g = f.grid;
    const double en = std::pow(E.abs(), -1.5);
    auto spec = st_spectrum(f);
    for (int it = 0; it < g.nt; ++it)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                const double sg = g.tau(it) - symbol_w(g.kx(ix), g.ky(iy), E).value;
                spec[g.idx(it, ix, iy)] *= CutoffSpec::phi_shell(en * std::abs(sg), L);
            }
    auto out = st_synthesis(g, spec);
    out.window = f.window;
    out.windowed = f.windowed;
    return out;
}

XsbNorm xsb_norm(const SpaceTimeField& f, const XsbSpec& spec) {
    if (!f.windowed) throw std::invalid_argument("xsb_norm: field must be time-windowed first");
    const auto& g = f.grid;
    const double enk = 1.0 / std::sqrt(spec.E.abs());
    const double ens = std::pow(spec.E.abs(), -1.5);
    auto c = st_spectrum(f);
    KahanSum plain, enorm;
    for (int it = 0; it < g.nt; ++it)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                const double k = std::hypot(g.kx(ix), g.ky(iy));
                const double sg = g.tau(it) - symbol_w(g.kx(ix), g.ky(iy), spec.E).value;
                const double m = std::norm(c[g.idx(it, ix, iy)]);
                plain.add(std::pow(bracket(sg), 2.0 * spec.b) *
                          std::pow(bracket(k), 2.0 * spec.s) * m);
                enorm.add(std::pow(bracket(ens * sg), 2.0 * spec.b) *
                          std::pow(bracket(enk * k), 2.0 * spec.s) * m);
            }
    XsbNorm out;
    out.plain = std::sqrt(plain.value() * g.volume());
    out.energy_normalized = std::sqrt(enorm.value() * g.volume());
    return out;
}

double bilinear_ratio(const SpaceTimeField& v_in, const SpaceTimeField& w_in,
                      const XsbSpec& spec) {
    if (!(spec.s > 0.5)) throw std::invalid_argument("bilinear_ratio: requires s > 1/2");
    if (!(spec.eps > 0.0)) throw std::invalid_argument("bilinear_ratio: requires eps > 0");
    const auto& g = v_in.grid;
    SpaceTimeField v = v_in, w = w_in;
    if (!v.windowed) apply_window(v);
    if (!w.windowed) apply_window(w);

    SpaceTimeField prod(g);
    for (size_t i = 0; i < prod.a.size(); ++i) prod.a[i] = v.a[i] * w.a[i];
    prod.windowed = true;

    // dz acts on the product through its exact Fourier factor (i/2) conj(xi)
    auto spec3 = st_spectrum(prod);
    for (int it = 0; it < g.nt; ++it)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                spec3[g.idx(it, ix, iy)] *= 0.5 * cplx(g.ky(iy), g.kx(ix));
    auto dzprod = st_synthesis(g, spec3);
    dzprod.windowed = true;

    XsbSpec num = spec;
    num.b = -0.5 - 2.0 * spec.eps;
    XsbSpec den = spec;
    den.b = 0.5 + spec.eps;

    const double top = xsb_norm(dzprod, num).plain;
    const double bot_v = xsb_norm(v, den).plain;
    const double bot_w = xsb_norm(w, den).plain;
    if (bot_v * bot_w == 0.0) throw std::domain_error("bilinear_ratio: zero denominator");
    return top / (bot_v * bot_w);
}

ResonanceRegionReport resonance_region_probe(double N, double Nhat, double L, double Lhat,
                                             Energy E, long samples, uint64_t seed) {
    E.require_negative("resonance_region_probe");
    if (!(N >= 1.0 && Nhat >= 1.0 && L >= 1.0 && Lhat >= 1.0))
        throw std::invalid_argument("resonance_region_probe: dyadic scales must be >= 1");
    if (!(N < Nhat / 2.0))
        throw std::invalid_argument("resonance_region_probe: needs the low-high regime N << Nhat");

    const double aE = E.abs();
    const double sE = std::sqrt(aE);
    const double Lv = std::max(L, Lhat);

    // representative high-frequency point on its shells
    const cplx xihat = std::polar(0.75 * sE * Nhat, 0.3);
    const double tauhat =
        symbol_w(xihat.real(), xihat.imag(), E).value + 0.75 * std::pow(aE, 1.5) * Lhat;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const double r_lo = 0.5 * sE * N, r_hi = sE * N;
    const double tau_pad = std::pow(aE, 1.5) * L;  // own modulation band

    ResonanceRegionReport rep;
    rep.N = N;
    rep.Nhat = Nhat;
    rep.L = L;
    rep.Lhat = Lhat;
    rep.E = E.value;
    rep.samples = samples;
    rep.min_derivative_ratio = std::numeric_limits<double>::infinity();

    for (long i = 0; i < samples; ++i) {
        const double r = std::sqrt(r_lo * r_lo + (r_hi * r_hi - r_lo * r_lo) * unif(rng));
        const double th = two_pi * unif(rng);
        const cplx xi = std::polar(r, th);
        const double w_xi = symbol_w(xi.real(), xi.imag(), E).value;
        const double tau = w_xi + tau_pad * (2.0 * unif(rng) - 1.0);

        // membership: the difference frequency stays on its shell and its
        // modulation sigma_check = (tauhat - tau) - w(xihat - xi) lies in the
        // partner band; by the convolution identity this carves the thin
        // level strip of the resonance function whose measure the derivative
        // bounds control
        const cplx dxi = xihat - xi;
        const double rdx = std::abs(dxi);
        if (rdx < 0.5 * sE * Nhat || rdx > sE * Nhat) continue;
        const double sigma_check = (tauhat - tau) - symbol_w(dxi.real(), dxi.imag(), E).value;
        if (std::abs(sigma_check) > std::pow(aE, 1.5) * Lv) continue;

        ++rep.members;
        const double d1 = std::abs(resonance_dh(xi, xihat, E, 1));
        const double d2 = std::abs(resonance_dh(xi, xihat, E, 2));
        rep.min_derivative_ratio =
            std::min(rep.min_derivative_ratio, std::max(d1, d2) / (aE * Nhat * Nhat));
    }
    const double box = pi * (r_hi * r_hi - r_lo * r_lo) * (2.0 * tau_pad);
    rep.measure_estimate = box * double(rep.members) / double(samples);
    if (!std::isfinite(rep.min_derivative_ratio)) rep.min_derivative_ratio = 0.0;
    rep.flagged = rep.members > 0 && rep.min_derivative_ratio < 0.1;
    return rep;
}

}  // namespace nv
