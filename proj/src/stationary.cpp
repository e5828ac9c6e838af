#include "nvlab/stationary.hpp"

#include <algorithm>

namespace nv {

namespace {

void require_nonzero(cplx lambda, const char* who) {
    if (lambda == cplx(0.0, 0.0)) throw std::domain_error(std::string(who) + ": lambda = 0");
}

cplx cubic_value(cplx u, cplx z) {
    return ((3.0 * z - std::conj(u) * 0.5) * z + u * 0.5) * z - 3.0;
}

cplx cubic_derivative(cplx u, cplx z) {
    return (9.0 * z - std::conj(u)) * z + u * 0.5;
}

// Roots of 3 z^3 + a2 z^2 + a1 z + a0 with complex coefficients, by the
// closed-form resolvent with a branch choice that avoids cancellation,
// then one Newton polish per root.
std::array<cplx, 3> solve_cubic(cplx u) {
    const cplx a2 = -std::conj(u) / 6.0;  // monic: z^3 + a2 z^2 + a1 z + a0
    const cplx a1 = u / 6.0;
    const cplx a0 = cplx(-1.0, 0.0);

    // depressed form t^3 + p t + q, z = t - a2/3
    const cplx shift = a2 / 3.0;
    const cplx p = a1 - a2 * a2 / 3.0;
    const cplx q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;

    const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    cplx r1 = -q / 2.0 + disc;
    cplx r2 = -q / 2.0 - disc;
    cplx big = (std::abs(r1) >= std::abs(r2)) ? r1 : r2;

    std::array<cplx, 3> roots;
    if (std::abs(big) == 0.0) {
        // q = 0 and p = 0: triple root of the depressed cubic
        roots = {-shift, -shift, -shift};
    } else {
        const cplx c = std::pow(big, 1.0 / 3.0);
        const cplx w1(-0.5, 0.8660254037844386467637231707529362);
        const cplx w2 = std::conj(w1);
        for (int k = 0; k < 3; ++k) {
            cplx ck = (k == 0) ? c : (k == 1 ? c * w1 : c * w2);
            roots[k] = ck - p / (3.0 * ck) - shift;
        }
    }

    for (auto& z : roots) {
        for (int it = 0; it < 2; ++it) {
            cplx f = cubic_value(u, z);
            cplx df = cubic_derivative(u, z);
            if (std::abs(df) > 0.0) {
                cplx step = f / df;
                if (std::abs(step) < 0.5 * (1.0 + std::abs(z))) z -= step;
            }
        }
    }
    return roots;
}

}  // namespace

cplx lambda_to_xi(cplx lambda) {
    require_nonzero(lambda, "lambda_to_xi");
    return cplx(0.0, -1.0) * (lambda - 1.0 / std::conj(lambda));
}

cplx xi_to_lambda(cplx xi) {
    if (xi == cplx(0.0, 0.0)) return cplx(1.0, 0.0);
    // |xi| = r - 1/r with r = |lambda| > 1; arg lambda = arg xi + pi/2
    const double a = std::abs(xi);
    const double r = 0.5 * (a + std::sqrt(a * a + 4.0));
    return std::polar(r, std::arg(xi) + pi / 2.0);
}

cplx phase_S(cplx u, cplx lambda) {
    require_nonzero(lambda, "phase_S");
    const cplx lb = std::conj(lambda);
    const cplx l3 = lambda * lambda * lambda;
    const cplx lb3 = lb * lb * lb;
    const cplx cubic = -(l3 + 1.0 / l3 - lb3 - 1.0 / lb3);
    const cplx lin = 0.5 * ((lambda - 1.0 / lb) * std::conj(u) - (lb - 1.0 / lambda) * u);
    return cubic + lin;
}

cplx phase_S_lambda(cplx u, cplx lambda) {
    require_nonzero(lambda, "phase_S_lambda");
    const cplx l2 = lambda * lambda;
    return std::conj(u) * 0.5 - u / (2.0 * l2) - 3.0 * l2 + 3.0 / (l2 * l2);
}

cplx phase_S_lambdalambda(cplx u, cplx lambda) {
    require_nonzero(lambda, "phase_S_lambdalambda");
    const cplx l2 = lambda * lambda;
    const cplx l3 = l2 * lambda;
    return u / l3 - 6.0 * lambda - 12.0 / (l3 * l2);
}

cplx phase_S_lambda_fd(cplx u, cplx lambda, double h) {
    // Wirtinger d/dl = (d/dx - i d/dy)/2 applied to S(u, .)
    const cplx dx = (phase_S(u, lambda + h) - phase_S(u, lambda - h)) / (2.0 * h);
    const cplx dy = (phase_S(u, lambda + cplx(0, h)) - phase_S(u, lambda - cplx(0, h))) / (2.0 * h);
    return 0.5 * (dx - cplx(0, 1) * dy);
}

StationaryAnalysis solve_stationary(cplx u) {
    StationaryAnalysis out;
    auto roots = solve_cubic(u);
    std::sort(roots.begin(), roots.end(),
              [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
    out.zeta_roots = roots;
    for (int j = 0; j < 3; ++j) {
        const cplx s = std::sqrt(roots[j]);
        out.lambda_points[2 * j] = s;
        out.lambda_points[2 * j + 1] = -s;
        out.max_residual = std::max(out.max_residual, std::abs(cubic_value(u, roots[j])));
    }

    const double tol = 1e-7;
    const double utol = tol * (1.0 + std::abs(u));
    const bool all_unit = std::all_of(roots.begin(), roots.end(), [&](cplx z) {
        return std::abs(std::abs(z) - 1.0) <= tol;
    });
    const bool pair01 = std::abs(roots[0] - roots[1]) <= utol;
    const bool pair12 = std::abs(roots[1] - roots[2]) <= utol;
    const bool pair02 = std::abs(roots[0] - roots[2]) <= utol;
    const bool coincident = pair01 || pair12 || pair02;

    if (all_unit && coincident) {
        out.classification = Region::BOUNDARY;
        cplx dbl = pair01 ? roots[0] : (pair12 ? roots[1] : roots[0]);
        out.phi = std::arg(dbl);
        out.omega = 0.0;
    } else if (all_unit) {
        out.classification = Region::INTERIOR;
        out.omega = 0.0;
        out.phi = 0.0;
    } else {
        out.classification = Region::EXTERIOR;
        const double m = std::abs(roots[0]);
        out.omega = std::sqrt(m) - 1.0;
        out.phi = std::arg(roots[0]);
    }
    return out;
}

double factorization_residual(cplx u, cplx lambda) {
    require_nonzero(lambda, "factorization_residual");
    const auto st = solve_stationary(u);
    const cplx l2 = lambda * lambda;
    const cplx prod = (l2 - st.zeta_roots[0]) * (l2 - st.zeta_roots[1]) * (l2 - st.zeta_roots[2]);
    const cplx rhs = -3.0 / (l2 * l2) * prod;
    return std::abs(phase_S_lambda(u, lambda) - rhs);
}

cplx boundary_curve(double phi) {
    return 6.0 * (2.0 * std::polar(1.0, -phi) + std::polar(1.0, 2.0 * phi));
}

}  // namespace nv
