#pragma once

#include <vector>

#include "nvlab/common.hpp"

namespace nv {

/// Bessel J of nonnegative integer orders, tuned for the angular reduction
/// of the oscillatory integrals: we repeatedly need the whole vector
/// J_0(z), ..., J_M(z) at large arguments with M well below z.
///
/// Two generators are used:
///   - Miller's backward recurrence with sum normalization (any z, cost
///     O(max(M, z)));
///   - large-argument Debye/Hankel asymptotics seeding a short backward
///     recurrence (z large, M <= 0.7 z, cost O(M)).
/// bessel_jv picks between them.

/// Single value by the stabilized asymptotic expansion. Requires z >= 3000
/// and m <= ~0.72 z; accuracy ~1e-9 against the oscillation envelope.
double bessel_j_asymptotic(int m, double z);

/// J_0(z), ..., J_M(z) by Miller backward recurrence. Works for any z >= 0.
void bessel_jv_miller(double z, int M, std::vector<double>& out);

/// J_0(z), ..., J_M(z), automatic method choice.
void bessel_jv(double z, int M, std::vector<double>& out);

/// Order beyond which J_m(z) is negligible (< ~1e-14 envelope).
inline int bessel_band(double z) {
    return int(z + 12.0 * std::cbrt(z + 1.0) + 40.0);
}

/// Angular factor of the polar-coordinate oscillatory integrals,
///   K = int_0^{2pi} exp(i [ a g(3 theta) + b g(theta - psi) ]) dtheta,
/// g = sin or cos, |a| = z1, |b| = z2. Expanding both exponentials in
/// Bessel series collapses K, for either g and either sign combination, to
///   K = 2pi [ J0(z1) J0(z2) + 2 sum_{m>=1} J_m(z1) J_{3m}(z2) cos(3 m psi) ],
/// real and pi/3-periodic in psi (the theta -> theta + pi substitution shows
/// K is real; sign flips fold away through J_m(-z) = (-1)^m J_m(z)).
struct AngularKernel {
    std::vector<double> cos_table;  // cos(3 m psi), m = 0..capacity
    double psi = 0.0;

    void set_psi(double psi_in, int capacity);
    double eval(double z1, double z2, std::vector<double>& scratch1,
                std::vector<double>& scratch2) const;
};

/// Stationary-phase evaluation of the same angular integral, used for very
/// large (z1, z2) where the Bessel series is too long. Writes the value and
/// returns false near angular caustics (degenerate stationary points),
/// where the expansion is not trusted and the caller must fall back.
bool angular_kernel_stationary(double z1, double z2, double psi, double& out);

}  // namespace nv
