#include <random>

#include "doctest.h"
#include "nvlab/stationary.hpp"
#include "nvlab/symbols.hpp"

using namespace nv;

namespace {

// Direct evaluation of the frequency-plane phase at E = -1,
// Phi = (xi^3 + conj(xi)^3)(1 + 3/|xi|^2) + Re(conj(u) xi).
double phi_xi(cplx u, cplx xi) {
    const cplx c = xi * xi * xi;
    return 2.0 * c.real() * (1.0 + 3.0 / std::norm(xi)) + (std::conj(u) * xi).real();
}

}  // namespace

TEST_CASE("lambda map basics") {
    CHECK_THROWS_AS(lambda_to_xi(cplx(0, 0)), std::domain_error);
    const cplx xi = lambda_to_xi(cplx(2.0, 0.0));
    CHECK(std::abs(xi - cplx(0.0, -1.5)) <= 1e-15);
    // modulus identity |xi| = (|l|^2 - 1)/|l| and inverse round trip
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> rad(1.01, 6.0), ang(0.0, two_pi);
    for (int i = 0; i < 300; ++i) {
        const cplx l = std::polar(rad(rng), ang(rng));
        const cplx x = lambda_to_xi(l);
        const double m = std::abs(l);
        CHECK(std::abs(x) == doctest::Approx((m * m - 1.0) / m).epsilon(1e-13));
        CHECK(std::abs(xi_to_lambda(x) - l) <= 1e-10 * m);
    }
    // unit circle collapses to the origin
    CHECK(std::abs(lambda_to_xi(std::polar(1.0, 0.9))) <= 1e-15);
}

TEST_CASE("lambda map area distortion near lambda = 2") {
    // numerical Jacobian of (Re xi, Im xi) wrt (Re l, Im l) at l = 2
    const cplx l0(2.0, 0.0);
    const double h = 1e-6;
    const cplx fx = (lambda_to_xi(l0 + h) - lambda_to_xi(l0 - h)) / (2 * h);
    const cplx fy = (lambda_to_xi(l0 + cplx(0, h)) - lambda_to_xi(l0 - cplx(0, h))) / (2 * h);
    const double jac = fx.real() * fy.imag() - fx.imag() * fy.real();
    CHECK(jac == doctest::Approx(15.0 / 16.0).epsilon(1e-8));
}

TEST_CASE("phase is purely imaginary and matches the frequency-plane phase") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> rad(1.02, 4.0), ang(0.0, two_pi), ur(-20.0, 20.0);
    for (int i = 0; i < 100; ++i) {
        const cplx l = std::polar(rad(rng), ang(rng));
        const cplx u(ur(rng), ur(rng));
        const cplx S = phase_S(u, l);
        CHECK(std::abs(S.real()) <= 1e-12 * std::abs(S.imag()) + 1e-300);
        const double direct = phi_xi(u, lambda_to_xi(l));
        CHECK(S.imag() == doctest::Approx(direct).epsilon(1e-10));
    }
    CHECK(std::abs(phase_S(cplx(0, 0), cplx(2, 0))) <= 1e-15);
}

TEST_CASE("phase derivative closed forms") {
    CHECK(std::abs(phase_S_lambda(cplx(18, 0), cplx(1, 0))) <= 1e-13);
    // u = 0: stationary at the square roots of the cube roots of unity
    for (int k = 0; k < 3; ++k) {
        const cplx zeta = std::polar(1.0, 2.0 * pi * k / 3.0);
        CHECK(std::abs(phase_S_lambda(cplx(0, 0), std::sqrt(zeta))) <= 1e-13);
    }
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> rad(1.05, 3.0), ang(0.0, two_pi), ur(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const cplx l = std::polar(rad(rng), ang(rng));
        const cplx u(ur(rng), ur(rng));
        const cplx cf = phase_S_lambda(u, l);
        const cplx fd = phase_S_lambda_fd(u, l);
        CHECK(std::abs(cf - fd) <= 1e-6 * (1.0 + std::abs(cf)));
        // second derivative consistent with differences of the first
        const double h = 1e-5;
        const cplx dx = (phase_S_lambda(u, l + h) - phase_S_lambda(u, l - h)) / (2 * h);
        const cplx dy =
            (phase_S_lambda(u, l + cplx(0, h)) - phase_S_lambda(u, l - cplx(0, h))) / (2 * h);
        const cplx fd2 = 0.5 * (dx - cplx(0, 1) * dy);
        CHECK(std::abs(phase_S_lambdalambda(u, l) - fd2) <= 1e-5 * (1.0 + std::abs(fd2)));
    }
}

TEST_CASE("stationary cubic: vertex, edge midpoint, center") {
    const auto a18 = solve_stationary(cplx(18, 0));
    CHECK(a18.classification == Region::BOUNDARY);
    for (const auto& z : a18.zeta_roots) CHECK(std::abs(z - cplx(1, 0)) <= 2e-5);
    CHECK(a18.max_residual <= 1e-8);

    const auto am6 = solve_stationary(cplx(-6, 0));
    CHECK(am6.classification == Region::BOUNDARY);
    int minus = 0, plus = 0;
    for (const auto& z : am6.zeta_roots) {
        if (std::abs(z - cplx(-1, 0)) <= 1e-6) ++minus;
        if (std::abs(z - cplx(1, 0)) <= 1e-6) ++plus;
    }
    CHECK(minus == 2);
    CHECK(plus == 1);
    CHECK(am6.phi == doctest::Approx(pi).epsilon(1e-9));

    const auto a0 = solve_stationary(cplx(0, 0));
    CHECK(a0.classification == Region::INTERIOR);
    for (int k = 0; k < 3; ++k) {
        bool found = false;
        const cplx target = std::polar(1.0, 2.0 * pi * k / 3.0);
        for (const auto& z : a0.zeta_roots) found = found || std::abs(z - target) <= 1e-10;
        CHECK(found);
    }
}

TEST_CASE("vieta invariants on random parameters") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> d(-40.0, 40.0);
    for (int i = 0; i < 10000; ++i) {
        const cplx u(d(rng), d(rng));
        const auto st = solve_stationary(u);
        const cplx prod = st.zeta_roots[0] * st.zeta_roots[1] * st.zeta_roots[2];
        const cplx sum = st.zeta_roots[0] + st.zeta_roots[1] + st.zeta_roots[2];
        CHECK(std::abs(prod - 1.0) <= 1e-9 * (1.0 + std::abs(u)));
        CHECK(std::abs(sum - std::conj(u) / 6.0) <= 1e-9 * (1.0 + std::abs(u)));
        // lambda points square back to the roots
        for (int j = 0; j < 3; ++j) {
            const cplx l = st.lambda_points[2 * j];
            CHECK(std::abs(l * l - st.zeta_roots[j]) <= 1e-9 * (1.0 + std::abs(u)));
            CHECK(st.lambda_points[2 * j + 1] == -l);
        }
    }
}

TEST_CASE("boundary curve root patterns") {
    for (double phi : {0.3, 1.1, 2.5, 4.0, 5.9}) {
        const cplx u = boundary_curve(phi);
        const auto st = solve_stationary(u);
        CHECK(st.classification == Region::BOUNDARY);
        const cplx dbl = std::polar(1.0, phi);
        const cplx smp = std::polar(1.0, -2.0 * phi);
        int near_dbl = 0;
        bool has_smp = false;
        for (const auto& z : st.zeta_roots) {
            if (std::abs(z - dbl) <= 1e-4) ++near_dbl;
            if (std::abs(z - smp) <= 1e-6) has_smp = true;
        }
        CHECK(near_dbl == 2);
        CHECK(has_smp);
    }
    CHECK(std::abs(boundary_curve(0.0) - cplx(18, 0)) <= 1e-12);
    CHECK(std::abs(boundary_curve(pi) - cplx(-6, 0)) <= 1e-12);
    const cplx u23 = boundary_curve(2.0 * pi / 3.0);
    CHECK(std::abs(u23 - 18.0 * std::polar(1.0, -2.0 * pi / 3.0)) <= 1e-12);
}

TEST_CASE("classification symmetry and exterior pattern") {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> d(-60.0, 60.0);
    const cplx rot = std::polar(1.0, 2.0 * pi / 3.0);
    for (int i = 0; i < 2000; ++i) {
        const cplx u(d(rng), d(rng));
        const auto base = solve_stationary(u);
        CHECK(solve_stationary(std::conj(u)).classification == base.classification);
        CHECK(solve_stationary(u * rot).classification == base.classification);
        if (base.classification == Region::EXTERIOR) {
            // moduli come as {m, 1, 1/m} with m > 1
            const double m0 = std::abs(base.zeta_roots[0]);
            const double m1 = std::abs(base.zeta_roots[1]);
            const double m2 = std::abs(base.zeta_roots[2]);
            CHECK(m0 * m2 == doctest::Approx(1.0).epsilon(1e-7));
            CHECK(m1 == doctest::Approx(1.0).epsilon(1e-7));
            CHECK(base.omega == doctest::Approx(std::sqrt(m0) - 1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("compact factorization of the phase derivative") {
    CHECK(factorization_residual(cplx(18, 0), cplx(2, 0)) <= 1e-8);
    CHECK(factorization_residual(cplx(5, 3), 1.3 * std::polar(1.0, 0.7)) <= 1e-8);
    CHECK(factorization_residual(cplx(0, 0), cplx(0, 1)) <= 1e-12);
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> d(-30.0, 30.0), rad(0.3, 4.0), ang(0.0, two_pi);
    for (int i = 0; i < 1000; ++i) {
        const cplx u(d(rng), d(rng));
        const cplx l = std::polar(rad(rng), ang(rng));
        const double res = factorization_residual(u, l);
        const double sl = std::abs(phase_S_lambda(u, l));
        CHECK(res <= 1e-8 * (1.0 + sl));
    }
}
