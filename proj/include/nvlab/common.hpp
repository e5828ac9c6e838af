#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nv {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

/// Fixed energy level of the associated spectral problem. Most operations
/// work at negative energy; the few that admit E = 0 say so explicitly.
struct Energy {
    double value = -1.0;

    Energy() = default;
    explicit Energy(double e) : value(e) {
        if (!std::isfinite(e)) throw std::invalid_argument("Energy: non-finite value");
    }
    double abs() const { return std::abs(value); }
    void require_negative(const char* who) const {
        if (!(value < 0.0)) throw std::domain_error(std::string(who) + ": requires E < 0");
    }
    void require_nonpositive(const char* who) const {
        if (!(value <= 0.0)) throw std::domain_error(std::string(who) + ": requires E <= 0");
    }
};

/// Compensated accumulator for long reductions.
class KahanSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0, c_ = 0.0;
};

class KahanSumC {
  public:
    void add(cplx z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

  private:
    KahanSum re_, im_;
};

/// Quintic smoothstep, C^2 at both ends: 0 at u<=0, 1 at u>=1.
inline double smoothstep5(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

/// Least-squares line fit y ~ a + b x. Returns {a, b, rms residual}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rms = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 points");
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double r2 = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        r2 += r * r;
    }
    f.rms = std::sqrt(r2 / n);
    return f;
}

inline bool nearly_equal(double a, double b, double rel, double abs_floor = 0.0) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

}  // namespace nv
