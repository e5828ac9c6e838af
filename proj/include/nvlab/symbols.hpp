#pragma once

#include "nvlab/common.hpp"

namespace nv {

/// Pointwise symbols of the linearized evolution and of the inversion
/// relation between the potential and its companion field.
///
/// Conventions used throughout:
///   - frequencies are the continuous wavevector (xi1, xi2), identified with
///     the complex number xi = xi1 + i*xi2 where convenient;
///   - every symbol is extended by 0 at xi = 0 (the natural continuous or
///     mean-zero extension); callers that cannot accept the extension check
///     the `at_origin` flag.

struct SpectralPoint {
    double xi1 = 0.0;
    double xi2 = 0.0;
    double tau = 0.0;
};

struct SymbolValue {
    double value = 0.0;
    bool at_origin = false;  // value was filled in by the origin convention
};

/// Ratio (xi1 - i xi2)/(xi1 + i xi2); unit modulus off the origin, 0 at 0.
cplx multiplier_m(double xi1, double xi2);
inline cplx multiplier_m(cplx xi) { return multiplier_m(xi.real(), xi.imag()); }

/// Dispersion symbol in real coordinates,
///   w(xi; E) = 2 (xi1^3 - 3 xi1 xi2^2) (1 + 3|E| / |xi|^2),  E <= 0.
SymbolValue symbol_w(double xi1, double xi2, Energy E);

/// Same symbol through the complex identification,
///   p(xi; E) = (xi^3 + conj(xi)^3) (1 - 3E/|xi|^2).
/// Agrees with symbol_w for E <= 0 to rounding.
double symbol_p(cplx xi, Energy E);

/// sigma(tau, xi) = tau - w(xi).
double sigma(const SpectralPoint& p, Energy E);

/// Resonance function H[xi, xihat] = w(xihat) - w(xi) - w(xihat - xi).
double resonance_h(cplx xi, cplx xihat, Energy E);

/// Closed-form partial derivative of H with respect to xi1 (axis = 1) or
/// xi2 (axis = 2), holding xihat fixed. Requires xi != 0 and xihat != xi.
double resonance_dh(cplx xi, cplx xihat, Energy E, int axis);

}  // namespace nv
