#pragma once

#include "nvlab/grid.hpp"

namespace nv {

/// High-energy limit machinery on a periodic (x, Y) grid: the companion-field
/// ansatz in powers of 1/kappa (E = -+kappa^2), residuals of the rescaled
/// system, the limit evolution
///   dv0/dt = 2 dxxx v0 - 12 v0 dx v0 -+ 24 dx^{-1} dYY v0,
/// and the change of variables onto the classical KP form.
///
/// dx^{-1} is the spectral inverse on kx != 0 modes. Fields must satisfy
/// v_hat(0, ky) = 0 for ky != 0 (x-mean constant across Y); a constant
/// overall mean is harmless and is transported exactly.

enum class KpSign { PLUS, MINUS };  // PLUS: E = +kappa^2 (KPI side), MINUS: E = -kappa^2 (KPII side)

struct KpAnsatz {
    GridSpec grid;
    double kappa = 4.0;
    KpSign sign = KpSign::MINUS;
    RealField2D v;           // v0
    RealField2D w1;          // includes the constant -+3 kappa^2 offset
    RealField2D w2;
    RealField2D w1_varying;  // w1 minus the offset, kept at full precision
    double w1_offset = 0.0;
};

/// Checks the x-mean condition; throws std::domain_error when violated.
void require_x_mean_free(const RealField2D& v0, double tol = 1e-10);

KpAnsatz build_ansatz(const RealField2D& v0, double kappa, KpSign sign);

struct AnsatzResiduals {
    double b_residual = 0.0;        // first constraint equation, relative to |dx v0|
    double c_mismatch = 0.0;        // second constraint residual vs its closed form, relative
    double c_norm = 0.0;            // norm of the second constraint residual
    double c_closed_norm = 0.0;     // norm of 6 kappa^{-3} dx^{-2} dYYY v0
};
AnsatzResiduals residual_constraints(const KpAnsatz& a);

/// L2 norm of (d v0/dt given by the limit equation) minus the full evolution
/// right-hand side of the rescaled system on the ansatz fields.
double residual_evolution(const RealField2D& v0, double kappa, KpSign sign);

struct KpStepControl {
    double dt = 2e-3;
    bool check_finite = true;
};
RealField2D evolve_limit(const RealField2D& v0, double T, const KpStepControl& ctl, KpSign sign);

/// Soliton of the y-independent reduction dv/dt = 2 dxxx v - 12 v dx v:
/// v(t, x) = -(c/2) sech^2(sqrt(c)(x + 2 c t)/2)  (speed -2c).
RealField2D kp_soliton_exact(const GridSpec& g, double c, double t);

struct KpMapCheck {
    double residual = 0.0;        // KP-form residual at time step Delta
    double residual_half = 0.0;   // same at Delta/2
    double extrapolated = 0.0;    // Richardson-extrapolated residual
    double scheme_error = 0.0;    // dt-refinement error of the evolution itself
    bool ok = false;              // extrapolated residual <= 10 x scheme error (+ floor)
};
/// Evolves v0 a short time, maps snapshots u(x,y,t) = -v0(-x, 2y, t/2) and
/// measures the discrete residual of
///   du/dt + 6 u dx u + dxxx u = s 3 dx^{-1} dyy u,  s = +1 (PLUS) / -1 (MINUS).
KpMapCheck kp_map_check(const RealField2D& v0, double t1, const KpStepControl& ctl, KpSign sign);

}  // namespace nv
