#include "nvlab/grid.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace nv {

void GridSpec::validate() const {
    auto pow2 = [](int n) { return n >= 8 && (n & (n - 1)) == 0; };
    if (!pow2(nx) || !pow2(ny))
        throw std::invalid_argument("GridSpec: nx, ny must be powers of two, >= 8");
    if (!(Lx > 0.0) || !(Ly > 0.0)) throw std::invalid_argument("GridSpec: box sides must be > 0");
    if (!(dealias > 0.0 && dealias <= 1.0)) throw std::invalid_argument("GridSpec: bad dealias");
}

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, PlanPair> g_plans;

PlanPair& plans_for(int nx, int ny) {
    std::lock_guard<std::mutex> lk(g_plan_mutex);
    auto key = std::make_pair(nx, ny);
    auto it = g_plans.find(key);
    if (it == g_plans.end()) {
        // transforms are planned once on scratch buffers and executed on
        // caller arrays through the new-array interface
        std::vector<cplx> a(size_t(nx) * ny), b(size_t(nx) * ny);
        PlanPair p;
        p.fwd = fftw_plan_dft_2d(ny, nx, reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.bwd = fftw_plan_dft_2d(ny, nx, reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        it = g_plans.emplace(key, p).first;
    }
    return it->second;
}

}  // namespace

Fft2D::Fft2D(const GridSpec& g) : grid_(g) {
    g.validate();
    plans_for(g.nx, g.ny);
}

void Fft2D::forward(const std::vector<cplx>& phys, std::vector<cplx>& spec) const {
    spec.resize(phys.size());
    auto& p = plans_for(grid_.nx, grid_.ny);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(phys.data())),
                     reinterpret_cast<fftw_complex*>(spec.data()));
    const double s = 1.0 / double(grid_.size());
    for (auto& z : spec) z *= s;
}

void Fft2D::backward(const std::vector<cplx>& spec, std::vector<cplx>& phys) const {
    phys.resize(spec.size());
    auto& p = plans_for(grid_.nx, grid_.ny);
    fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(spec.data())),
                     reinterpret_cast<fftw_complex*>(phys.data()));
}

SpectralField2D to_spectral(const RealField2D& f) {
    ComplexField2D tmp(f.grid);
    for (size_t i = 0; i < f.a.size(); ++i) tmp.a[i] = f.a[i];
    auto out = to_spectral(tmp);
    out.hermitian = true;
    return out;
}

SpectralField2D to_spectral(const ComplexField2D& f) {
    SpectralField2D out(f.grid);
    Fft2D fft(f.grid);
    fft.forward(f.a, out.c);
    return out;
}

ComplexField2D to_physical(const SpectralField2D& f) {
    ComplexField2D out(f.grid);
    Fft2D fft(f.grid);
    fft.backward(f.c, out.a);
    return out;
}

RealField2D to_real(const SpectralField2D& f) {
    auto tmp = to_physical(f);
    RealField2D out(f.grid);
    for (size_t i = 0; i < tmp.a.size(); ++i) out.a[i] = tmp.a[i].real();
    return out;
}

double hermitian_residue(const SpectralField2D& f) {
    const auto& g = f.grid;
    double worst = 0.0, scale = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const cplx a = f.c[g.idx(ix, iy)];
            scale = std::max(scale, std::abs(a));
            const int jx = (g.nx - ix) % g.nx;
            const int jy = (g.ny - iy) % g.ny;
            worst = std::max(worst, std::abs(a - std::conj(f.c[g.idx(jx, jy)])));
        }
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

void enforce_hermitian(SpectralField2D& f) {
    const auto& g = f.grid;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const int jx = (g.nx - ix) % g.nx;
            const int jy = (g.ny - iy) % g.ny;
            const size_t i = g.idx(ix, iy), j = g.idx(jx, jy);
            if (j < i) continue;
            const cplx mean = 0.5 * (f.c[i] + std::conj(f.c[j]));
            f.c[i] = mean;
            f.c[j] = std::conj(mean);
        }
    }
    f.hermitian = true;
}

void apply_dealias(SpectralField2D& f) {
    const auto& g = f.grid;
    const int mx = int(g.nx * g.dealias / 2.0);
    const int my = int(g.ny * g.dealias / 2.0);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            if (std::abs(GridSpec::mode(ix, g.nx)) > mx ||
                std::abs(GridSpec::mode(iy, g.ny)) > my)
                f.c[g.idx(ix, iy)] = cplx(0, 0);
        }
    }
}

double spectral_tail_fraction(const SpectralField2D& f) {
    const auto& g = f.grid;
    const double bx = 0.9 * (g.nx / 2.0), by = 0.9 * (g.ny / 2.0);
    double tail = 0.0, total = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const double e = std::norm(f.c[g.idx(ix, iy)]);
            total += e;
            if (std::abs(GridSpec::mode(ix, g.nx)) > bx ||
                std::abs(GridSpec::mode(iy, g.ny)) > by)
                tail += e;
        }
    }
    return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

double norm_l2(const RealField2D& f) {
    KahanSum s;
    for (double v : f.a) s.add(v * v);
    return std::sqrt(s.value() * f.grid.cell());
}

double norm_sup(const RealField2D& f) {
    double m = 0.0;
    for (double v : f.a) m = std::max(m, std::abs(v));
    return m;
}

double integral(const RealField2D& f) {
    KahanSum s;
    for (double v : f.a) s.add(v);
    return s.value() * f.grid.cell();
}

}  // namespace nv
