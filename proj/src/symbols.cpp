#include "nvlab/symbols.hpp"

namespace nv {

cplx multiplier_m(double xi1, double xi2) {
    if (!std::isfinite(xi1) || !std::isfinite(xi2))
        throw std::invalid_argument("multiplier_m: non-finite frequency");
    if (xi1 == 0.0 && xi2 == 0.0) return {0.0, 0.0};
    // (xi1 - i xi2)/(xi1 + i xi2) = (xi1^2 - xi2^2 - 2 i xi1 xi2)/|xi|^2
    const double r2 = xi1 * xi1 + xi2 * xi2;
    return {(xi1 * xi1 - xi2 * xi2) / r2, -2.0 * xi1 * xi2 / r2};
}

SymbolValue symbol_w(double xi1, double xi2, Energy E) {
    if (!std::isfinite(xi1) || !std::isfinite(xi2))
        throw std::invalid_argument("symbol_w: non-finite frequency");
    E.require_nonpositive("symbol_w");
    if (xi1 == 0.0 && xi2 == 0.0) return {0.0, true};
    const double r2 = xi1 * xi1 + xi2 * xi2;
    const double cubic = 2.0 * xi1 * (xi1 * xi1 - 3.0 * xi2 * xi2);
    return {cubic * (1.0 + 3.0 * E.abs() / r2), false};
}

double symbol_p(cplx xi, Energy E) {
    if (xi == cplx(0.0, 0.0)) return 0.0;
    const cplx c = xi * xi * xi;
    const double r2 = std::norm(xi);
    return 2.0 * c.real() * (1.0 - 3.0 * E.value / r2);
}

double sigma(const SpectralPoint& p, Energy E) {
    return p.tau - symbol_w(p.xi1, p.xi2, E).value;
}

double resonance_h(cplx xi, cplx xihat, Energy E) {
    E.require_negative("resonance_h");
    const cplx d = xihat - xi;
    return symbol_w(xihat.real(), xihat.imag(), E).value -
           symbol_w(xi.real(), xi.imag(), E).value -
           symbol_w(d.real(), d.imag(), E).value;
}

namespace {

// Gradient of w at a single point, split the same way the closed-form
// derivative expressions split: a polynomial part and a fractional part
// carrying the |E|/|xi|^2 weights.
//   d w/d xi1 =  6 (xi1^2 - xi2^2)(1 + 3aE/r2) - 12 aE xi1^2 (xi1^2 - 3 xi2^2)/r2^2
//   d w/d xi2 = -12 xi1 xi2 (1 + 3aE/r2)       - 12 aE xi1 xi2 (xi1^2 - 3 xi2^2)/r2^2
// with aE = |E|, r2 = |xi|^2.
double grad_w(double a, double b, double aE, int axis) {
    const double r2 = a * a + b * b;
    const double cub = a * (a * a - 3.0 * b * b);
    if (axis == 1)
        return 6.0 * (a * a - b * b) * (1.0 + 3.0 * aE / r2) -
               12.0 * aE * a * a * (a * a - 3.0 * b * b) / (r2 * r2);
    return -12.0 * a * b * (1.0 + 3.0 * aE / r2) - 12.0 * aE * b * cub / (r2 * r2);
}

}  // namespace

double resonance_dh(cplx xi, cplx xihat, Energy E, int axis) {
    E.require_negative("resonance_dh");
    if (axis != 1 && axis != 2) throw std::invalid_argument("resonance_dh: axis must be 1 or 2");
    const cplx d = xihat - xi;
    if (xi == cplx(0.0, 0.0) || d == cplx(0.0, 0.0))
        throw std::domain_error("resonance_dh: singular point (xi = 0 or xihat = xi)");
    // H = w(xihat) - w(xi) - w(xihat - xi); the xihat term is constant in xi.
    return -grad_w(xi.real(), xi.imag(), E.abs(), axis) +
           grad_w(d.real(), d.imag(), E.abs(), axis);
}

}  // namespace nv
