#pragma once

#include <vector>

#include "nvlab/common.hpp"

namespace nv {

/// Discrete space-time toolbox: smooth dyadic cutoffs, frequency and
/// modulation projections with energy normalization, the weighted
/// space-time norm, and empirical probes of the bilinear smoothing
/// estimate and of the resonance region.

/// Smooth even cutoff: 1 on [-1/2, 1/2], 0 outside [-1, 1], C^2 in between
/// (quintic smoothstep), and the derived dyadic ring function.
struct CutoffSpec {
    static double phi_tilde(double s);
    /// ring: phi_tilde(s) - phi_tilde(2s)
    static double phi(double s);
    /// shell weight at dyadic N >= 1 (N = 1 uses the plain bump)
    static double phi_shell(double s, double N);
};

struct SpaceTimeGrid {
    int nt = 32, nx = 32, ny = 32;
    double T = two_pi, Lx = two_pi, Ly = two_pi;

    void validate() const;
    size_t size() const { return size_t(nt) * size_t(nx) * size_t(ny); }
    size_t idx(int it, int ix, int iy) const {
        return (size_t(it) * size_t(ny) + size_t(iy)) * size_t(nx) + size_t(ix);
    }
    static int mode(int i, int n) { return (i <= n / 2) ? i : i - n; }
    double t(int it) const { return T * it / nt; }
    double x(int ix) const { return -0.5 * Lx + Lx * ix / nx; }
    double y(int iy) const { return -0.5 * Ly + Ly * iy / ny; }
    /// modulation frequency carried by time index (sign chosen so that the
    /// free flow exp(i(k.x - w(k) t)) sits at sigma = tau - w = 0)
    double tau(int it) const { return -two_pi * mode(it, nt) / T; }
    double kx(int ix) const { return two_pi * mode(ix, nx) / Lx; }
    double ky(int iy) const { return two_pi * mode(iy, ny) / Ly; }
    double cell() const { return (T / nt) * (Lx / nx) * (Ly / ny); }
    double volume() const { return T * Lx * Ly; }
};

struct TimeWindow {
    enum class Kind { BUMP_C2, HANN } kind = Kind::BUMP_C2;
    double value(double t_frac) const;  // t_frac in [0, 1)
};

struct SpaceTimeField {
    SpaceTimeGrid grid;
    std::vector<cplx> a;  // physical samples, layout idx(it, ix, iy)
    TimeWindow window{};
    bool windowed = false;

    SpaceTimeField() = default;
    explicit SpaceTimeField(const SpaceTimeGrid& g) : grid(g), a(g.size(), cplx(0, 0)) {
        g.validate();
    }
};

struct XsbSpec {
    double s = 0.75;
    double b = 0.5;
    double eps = 0.05;
    Energy E{-1.0};
};

/// Space-time Fourier coefficients (synthesis kernel exp(i(k.x - tau t))).
std::vector<cplx> st_spectrum(const SpaceTimeField& f);
SpaceTimeField st_synthesis(const SpaceTimeGrid& g, const std::vector<cplx>& spec);

/// Multiply the time samples by the window.
void apply_window(SpaceTimeField& f);

/// Spatial dyadic shell projection at scale N: multiplier
/// phi_shell(|E|^{-1/2} |xi|, N).
SpaceTimeField project_PN(const SpaceTimeField& f, double N, Energy E);

/// Modulation shell projection at scale L: multiplier
/// phi_shell(|E|^{-3/2} |sigma|, L), sigma = tau - w(xi; E).
SpaceTimeField project_QL(const SpaceTimeField& f, double L, Energy E);

struct XsbNorm {
    double plain = 0.0;              // brackets <sigma>, <|xi|>
    double energy_normalized = 0.0;  // brackets <|E|^{-3/2} sigma>, <|E|^{-1/2}|xi|>
};

/// Discrete surrogate of the weighted space-time norm; f must be windowed.
XsbNorm xsb_norm(const SpaceTimeField& f, const XsbSpec& spec);

/// || dz (v w) ||_{s, -1/2-2eps} / (||v||_{s, 1/2+eps} ||w||_{s, 1/2+eps}),
/// plain-bracket norms; windows are applied to both inputs first.
double bilinear_ratio(const SpaceTimeField& v, const SpaceTimeField& w, const XsbSpec& spec);

struct ResonanceRegionReport {
    double N = 0.0, Nhat = 0.0, L = 0.0, Lhat = 0.0, E = 0.0;
    long samples = 0;
    long members = 0;
    double measure_estimate = 0.0;      // sampled measure of the resonance set
    double min_derivative_ratio = 0.0;  // min over members of max(|dH/dxi1|,|dH/dxi2|)/(|E| Nhat^2)
    bool flagged = false;               // min ratio below 0.1 (recorded, not failed)
};

/// Monte-Carlo probe of the low-high interaction region (N << Nhat).
ResonanceRegionReport resonance_region_probe(double N, double Nhat, double L, double Lhat,
                                             Energy E, long samples, uint64_t seed);

}  // namespace nv
