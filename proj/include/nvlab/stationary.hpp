#pragma once

#include <array>

#include "nvlab/common.hpp"

namespace nv {

/// Stationary-point analysis of the phase
///   S(u, lambda) = -(l^3 + 1/l^3 - lb^3 - 1/lb^3)
///                  + ((l - 1/lb) conj(u) - (lb - 1/l) u) / 2,
/// (l = lambda, lb = conj(lambda)), which is purely imaginary on the
/// lambda plane. The stationary points satisfy a single complex cubic in
/// zeta = lambda^2:
///   3 zeta^3 - (conj(u)/2) zeta^2 + (u/2) zeta - 3 = 0.

enum class Region { INTERIOR, BOUNDARY, EXTERIOR };

struct StationaryAnalysis {
    std::array<cplx, 3> zeta_roots{};    // roots of the cubic, |z0| >= |z1| >= |z2|
    std::array<cplx, 6> lambda_points{}; // +-sqrt of each root (principal branch)
    Region classification = Region::INTERIOR;
    double omega = 0.0;  // exterior: largest |lambda| = 1 + omega
    double phi = 0.0;    // root-argument parameter (see classify rules)
    double max_residual = 0.0;  // |cubic(zeta)| over the returned roots
};

/// Change of variables between the frequency plane and the lambda plane:
///   xi = -i (lambda - 1/conj(lambda)),
/// a bijection from {|lambda| > 1} onto xi != 0 that sends the unit circle
/// to the origin. |xi| = (|lambda|^2 - 1)/|lambda| and the area Jacobian is
/// (|lambda|^4 - 1)/|lambda|^4.
cplx lambda_to_xi(cplx lambda);

/// Inverse on |lambda| >= 1.
cplx xi_to_lambda(cplx xi);

/// Phase S(u, lambda); purely imaginary up to rounding.
cplx phase_S(cplx u, cplx lambda);

/// dS/dlambda = conj(u)/2 - u/(2 l^2) - 3 l^2 + 3/l^4.
cplx phase_S_lambda(cplx u, cplx lambda);

/// d2S/dlambda2 = u/l^3 - 6 l - 12/l^5.
cplx phase_S_lambdalambda(cplx u, cplx lambda);

/// Central-difference Wirtinger derivative of phase_S in lambda, used as an
/// independent check of the closed forms.
cplx phase_S_lambda_fd(cplx u, cplx lambda, double h = 1e-6);

/// Roots of the stationary cubic plus region classification of u against
/// the closed curve u = 6(2 e^{-i phi} + e^{2 i phi}).
StationaryAnalysis solve_stationary(cplx u);

/// |S_lambda(u,l) - (-3/l^4)(l^2 - z0)(l^2 - z1)(l^2 - z2)| with the roots
/// from solve_stationary.
double factorization_residual(cplx u, cplx lambda);

/// Point of the boundary curve at angle phi.
cplx boundary_curve(double phi);

}  // namespace nv
