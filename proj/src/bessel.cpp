#include "nvlab/bessel.hpp"

#include <algorithm>

namespace nv {

double bessel_j_asymptotic(int m, double z) {
    // Debye expansion written in the variables w = sqrt(z^2 - m^2),
    // q = (m/w)^2, which stay finite down to m = 0 where the expansion
    // reduces to the classical Hankel P/Q series.
    const double md = double(m);
    const double w = std::sqrt((z - md) * (z + md));
    const double beta = std::atan2(w, md);
    const double xi = w - md * beta - 0.25 * pi;
    const double q = (md / w) * (md / w);

    const double a1 = (3.0 + 5.0 * q) / (24.0 * w);
    const double b2 = -(81.0 + q * (462.0 + q * 385.0)) / (1152.0 * w * w);
    const double a3 =
        -(30375.0 + q * (369603.0 + q * (765765.0 + q * 425425.0))) / (414720.0 * w * w * w);

    const double amp = std::sqrt(2.0 / (pi * w));
    return amp * (std::cos(xi) * (1.0 + b2) + std::sin(xi) * (a1 + a3));
}

void bessel_jv_miller(double z, int M, std::vector<double>& out) {
    out.assign(size_t(M) + 1, 0.0);
    if (z <= 1e-280) {
        out[0] = 1.0;
        return;
    }
    int nstart = std::max(bessel_band(z), M + int(12.0 * std::cbrt(double(M) + 1.0)) + 40);

    double jp = 0.0;        // J_{n+1}, unnormalized
    double j = 1e-300;      // J_n
    double even_sum = 0.0;  // J_0 + 2 sum_{k>=1} J_{2k}, accumulated on the way down
    if ((nstart & 1) == 0) even_sum = 2.0 * j;

    for (int n = nstart; n >= 1; --n) {
        double jm = (2.0 * n / z) * j - jp;  // J_{n-1}
        jp = j;
        j = jm;
        const int idx = n - 1;
        if (idx <= M) out[size_t(idx)] = j;
        if ((idx & 1) == 0) even_sum += (idx == 0) ? j : 2.0 * j;
        if (std::abs(j) > 1e250) {
            const double s = 1e-250;
            j *= s;
            jp *= s;
            even_sum *= s;
            const int lo = std::min(idx, M);
            for (int k = lo; k <= M; ++k) out[size_t(k)] *= s;
        }
    }
    const double inv = 1.0 / even_sum;
    for (auto& v : out) v *= inv;
}

void bessel_jv(double z, int M, std::vector<double>& out) {
    if (z < 3000.0 || double(M) > 0.70 * z) {
        bessel_jv_miller(z, M, out);
        return;
    }
    // Seed at the top with the asymptotic values, then march down.
    out.assign(size_t(M) + 1, 0.0);
    double jp = bessel_j_asymptotic(M + 1, z);
    double j = bessel_j_asymptotic(M, z);
    out[size_t(M)] = j;
    for (int n = M; n >= 1; --n) {
        double jm = (2.0 * n / z) * j - jp;
        jp = j;
        j = jm;
        out[size_t(n - 1)] = j;
    }
}

void AngularKernel::set_psi(double psi_in, int capacity) {
    psi = psi_in;
    cos_table.resize(size_t(capacity) + 1);
    for (int m = 0; m <= capacity; ++m)
        cos_table[size_t(m)] = std::cos(std::fmod(3.0 * m * psi_in, two_pi));
}

namespace {

// Cost of producing J_0..J_M(z): O(M) when the asymptotic seeds apply,
// O(band(z)) otherwise.
long jv_cost(double z, int M) {
    if (z < 3000.0 || double(M) > 0.70 * z) return std::max(bessel_band(z), M);
    return M;
}

}  // namespace

double AngularKernel::eval(double z1, double z2, std::vector<double>& scratch1,
                           std::vector<double>& scratch2) const {
    int M = std::min(bessel_band(z1), bessel_band(z2) / 3);
    M = std::min<int>(M, int(cos_table.size()) - 1);
    if (M < 0) M = 0;

    if (z1 + z2 > 3e4 && jv_cost(z1, M) + jv_cost(z2, 3 * M) > 25000) {
        double v;
        if (angular_kernel_stationary(z1, z2, psi, v)) return v;
    }

    bessel_jv(z1, M, scratch1);
    bessel_jv(z2, 3 * M, scratch2);
    double acc = scratch1[0] * scratch2[0];
    for (int m = 1; m <= M; ++m)
        acc += 2.0 * scratch1[size_t(m)] * scratch2[size_t(3 * m)] * cos_table[size_t(m)];
    return two_pi * acc;
}

bool angular_kernel_stationary(double z1, double z2, double psi, double& out) {
    // K = int_0^{2pi} exp(i Phi), Phi = -z1 sin(3t) + z2 sin(t - psi).
    // (Any sign/sin-cos variant of the kernel equals this one.)
    auto d1 = [&](double th) { return -3.0 * z1 * std::cos(3.0 * th) + z2 * std::cos(th - psi); };

    const double scale1 = 3.0 * z1 + z2;               // |Phi'| scale
    const double thin = 14.0 * std::cbrt(scale1);  // complex-saddle suppression threshold

    // Locate the (at most 6) transversal zeros of Phi' by a scan; any
    // grid-local minimum of |Phi'| that dips near zero without a sign change
    // flags a tangential (caustic) pair.
    constexpr int N = 192;
    double va[N];
    for (int j = 0; j < N; ++j) va[j] = d1(two_pi * j / N);

    double roots[12];
    int nroots = 0;
    for (int j = 0; j < N; ++j) {
        const int jn = (j + 1) % N;
        const double a = va[j], b = va[jn];
        if (a == 0.0 || a * b < 0.0) {
            double lo = two_pi * j / N, hi = two_pi * (j + 1) / N;
            double flo = a;
            for (int it = 0; it < 64; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = d1(mid);
                if ((flo <= 0.0) == (fm <= 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            if (nroots < 12) roots[nroots++] = 0.5 * (lo + hi);
        } else {
            const int jp = (j + N - 1) % N;
            if (std::abs(a) < std::abs(va[jp]) && std::abs(a) < std::abs(b) &&
                std::abs(a) < thin)
                return false;  // tangential near-zero: caustic zone
        }
    }
    if (nroots == 0) return false;

    cplx acc(0.0, 0.0);
    for (int k = 0; k < nroots; ++k) {
        const double th = roots[k];
        const double s3 = std::sin(3.0 * th), c3 = std::cos(3.0 * th);
        const double s1 = std::sin(th - psi), c1 = std::cos(th - psi);
        const double phi0 = -z1 * s3 + z2 * s1;
        const double a = 9.0 * z1 * s3 - z2 * s1;          // Phi''
        const double b = 27.0 * z1 * c3 - z2 * c1;         // Phi'''
        const double c = -81.0 * z1 * s3 + z2 * s1;        // Phi''''
        const double corr3 = 5.0 * b * b / (24.0 * a * a * a);
        const double corr4 = c / (8.0 * a * a);
        if (!(std::abs(corr3) < 0.05 && std::abs(corr4) < 0.05)) return false;
        const double sgn = (a > 0.0) ? 1.0 : -1.0;
        const cplx amp = std::sqrt(two_pi / std::abs(a)) *
                         std::polar(1.0, phi0 + sgn * 0.25 * pi);
        acc += amp * (cplx(1.0, 0.0) + cplx(0.0, 1.0) * (corr3 - corr4));
    }
    out = acc.real();  // the kernel is exactly real
    return true;
}

}  // namespace nv
