#pragma once

#include <vector>

#include "nvlab/common.hpp"

namespace nv {

/// Periodic rectangle [-Lx/2, Lx/2) x [-Ly/2, Ly/2) sampled on an nx-by-ny
/// grid (powers of two). Fields are stored row-major: index(ix, iy) =
/// iy * nx + ix.
struct GridSpec {
    int nx = 64;
    int ny = 64;
    double Lx = two_pi;
    double Ly = two_pi;
    double dealias = 2.0 / 3.0;

    void validate() const;
    double dx() const { return Lx / nx; }
    double dy() const { return Ly / ny; }
    double cell() const { return dx() * dy(); }
    double x(int ix) const { return -0.5 * Lx + ix * dx(); }
    double y(int iy) const { return -0.5 * Ly + iy * dy(); }
    /// signed integer mode of spectral index i in [0, n)
    static int mode(int i, int n) { return (i <= n / 2) ? i : i - n; }
    double kx(int ix) const { return two_pi / Lx * mode(ix, nx); }
    double ky(int iy) const { return two_pi / Ly * mode(iy, ny); }
    size_t size() const { return size_t(nx) * size_t(ny); }
    size_t idx(int ix, int iy) const { return size_t(iy) * size_t(nx) + size_t(ix); }
    bool same_shape(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && Lx == o.Lx && Ly == o.Ly;
    }
};

struct RealField2D {
    GridSpec grid;
    std::vector<double> a;

    RealField2D() = default;
    explicit RealField2D(const GridSpec& g) : grid(g), a(g.size(), 0.0) { g.validate(); }
    double& at(int ix, int iy) { return a[grid.idx(ix, iy)]; }
    double at(int ix, int iy) const { return a[grid.idx(ix, iy)]; }
};

struct ComplexField2D {
    GridSpec grid;
    std::vector<cplx> a;

    ComplexField2D() = default;
    explicit ComplexField2D(const GridSpec& g) : grid(g), a(g.size(), cplx(0, 0)) {}
};

/// Fourier coefficients c_k with v(x) = sum_k c_k exp(i k . x); hermitian
/// marks fields representing real-valued data.
struct SpectralField2D {
    GridSpec grid;
    std::vector<cplx> c;
    bool hermitian = false;

    SpectralField2D() = default;
    explicit SpectralField2D(const GridSpec& g) : grid(g), c(g.size(), cplx(0, 0)) {}
};

/// Cached-plan complex FFT on one grid shape. Forward normalizes by 1/(nx ny)
/// so coefficients are Fourier-series coefficients.
class Fft2D {
  public:
    explicit Fft2D(const GridSpec& g);
    void forward(const std::vector<cplx>& phys, std::vector<cplx>& spec) const;
    void backward(const std::vector<cplx>& spec, std::vector<cplx>& phys) const;

  private:
    GridSpec grid_;
};

SpectralField2D to_spectral(const RealField2D& f);
RealField2D to_real(const SpectralField2D& f);  // drops the imaginary residue
ComplexField2D to_physical(const SpectralField2D& f);
SpectralField2D to_spectral(const ComplexField2D& f);

/// max_k |c(-k) - conj(c(k))| / max_k |c(k)|
double hermitian_residue(const SpectralField2D& f);
void enforce_hermitian(SpectralField2D& f);

/// Zero modes outside the dealias band (|m| > n * dealias / 2 per axis).
void apply_dealias(SpectralField2D& f);

/// Fraction of spectral mass carried by the outer 10% of the mode range.
double spectral_tail_fraction(const SpectralField2D& f);

double norm_l2(const RealField2D& f);   // continuum L2 norm (cell-weighted)
double norm_sup(const RealField2D& f);
double integral(const RealField2D& f);

}  // namespace nv
