#pragma once

#include <vector>

#include "nvlab/common.hpp"

namespace nv {

/// Numerical evaluation of the oscillatory integral
///   I(t, u; E) = int_C |xi|^{alpha + i beta} exp(i t Phi(u, xi; E)) dA(xi),
///   Phi = (xi^3 + conj(xi)^3)(1 - 3E/|xi|^2) + Re(conj(u) xi),
/// in two representations: directly over the frequency plane, and (at
/// E = -1) over the exterior of the unit disk in the lambda plane, where
/// the same integral becomes
///   int_{|l|>1} (|l|^2-1)^{a+ib} (|l|^4-1) / |l|^{a+4+ib} e^{t S(u,l)} dA(l).
///
/// The improper integral is made computable by a smooth radial taper
/// (1 on [0,R], 0 beyond R+W) and values are accepted only when they
/// stabilize across a ladder of taper radii.

struct QuadControl {
    double cutoff_radius = 0.0;  // base |xi| taper radius; <= 0 selects automatically
    const char* cutoff_profile = "smoothstep5";
    int panels_radial = 8;    // minimum radial panel count
    int panels_angular = 16;  // minimum angular node count (direct mode)
    bool refine_near_unit_circle = true;
    bool refine_near_stationary = true;
    int richardson_levels = 3;  // taper radii tried; >= 2
    double rel_tol = 1e-3;
    double abs_floor = 1e-9;  // values below this are "converged at the noise floor"
    enum class Angular { AUTO, DIRECT, BESSEL } angular = Angular::AUTO;
    double cycles_per_panel = 7.0;
    int gauss_order = 32;
};

struct OscIntQuery {
    double t = 1.0;
    cplx u{0.0, 0.0};
    Energy E{-1.0};
    double alpha = 0.5;
    double beta = 0.0;
    QuadControl quad{};
};

struct OscIntResult {
    cplx value{0.0, 0.0};
    double stabilization_error = 0.0;
    long long panels_used = 0;  // radial quadrature nodes across all stages
    bool converged = false;
    double cutoff_final = 0.0;  // |xi| taper radius of the accepted stage
};

struct Channel {
    double alpha = 0.5;
    double beta = 0.0;
};

/// Frequency-plane evaluation; requires E < 0, 0 <= alpha < 1, t > 0.
OscIntResult eval_I_xi(const OscIntQuery& q);

/// Lambda-plane evaluation; requires E = -1 exactly.
OscIntResult eval_I_lambda(const OscIntQuery& q);

/// Several (alpha, beta) channels sharing one quadrature geometry.
std::vector<OscIntResult> eval_I_xi_multi(double t, cplx u, Energy E,
                                          const std::vector<Channel>& channels,
                                          const QuadControl& quad);
std::vector<OscIntResult> eval_I_lambda_multi(double t, cplx u,
                                              const std::vector<Channel>& channels,
                                              const QuadControl& quad);

/// Relative difference between I(t, u; E) and its rescaling to E = -1:
///   I(t,u;E) = |E|^{(alpha+2)/2} e^{i (beta/2) ln|E|} I(|E|^{3/2} t, u/|E|; -1).
/// Both sides are evaluated in the frequency plane with matched tapers.
double scaling_identity_check(double t, cplx u, Energy E, double alpha, double beta,
                              const QuadControl& quad = {});

struct DecayFit {
    double alpha = 0.0;
    double exponent = 0.0;  // fitted slope of log|I| against log t
    double constant = 0.0;  // fitted log-intercept
    double rms_residual = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    int n_points = 0;  // converged points used by the fit
};

struct DecayProbe {
    std::vector<DecayFit> fits;                   // one per u
    DecayFit envelope;                            // fit of the pointwise max over u
    std::vector<std::vector<OscIntResult>> table; // [u][t]
    bool bound_ok = false;      // compensated quantity non-increasing up to factor `slack`
    double worst_ratio = 0.0;   // max over u, i<j of comp_j / comp_i
};

inline double large_time_exponent(double alpha) { return (alpha + 3.0) / 4.0 - 0.05; }
inline double small_time_exponent(double alpha) { return (alpha + 2.0) / 3.0; }

/// Evaluates |I| over the t grid for each u (lambda plane, E = -1), fits
/// log|I| vs log t, and checks boundedness of
///   |I(t,u)| t^{comp_exponent} / (1 + |beta|)
/// in the form "non-increasing up to a factor `slack`" along increasing t.
DecayProbe decay_probe(double alpha, double beta, const std::vector<cplx>& u_set,
                       const std::vector<double>& t_grid, Energy E,
                       const QuadControl& quad, double comp_exponent, double slack = 3.0);

/// Several (alpha, beta) channels sharing one quadrature geometry per (u, t);
/// comp_exponents pairs with channels.
std::vector<DecayProbe> decay_probe_channels(const std::vector<Channel>& channels,
                                             const std::vector<cplx>& u_set,
                                             const std::vector<double>& t_grid, Energy E,
                                             const QuadControl& quad,
                                             const std::vector<double>& comp_exponents,
                                             double slack = 3.0);

/// Log-spaced grid helper.
std::vector<double> log_grid(double t_lo, double t_hi, int n);

}  // namespace nv
