#include <random>

#include "doctest.h"
#include "nvlab/symbols.hpp"

using namespace nv;

namespace {
const Energy Em1(-1.0);
}

TEST_CASE("multiplier on the axes and at a generic point") {
    CHECK(multiplier_m(1.0, 0.0) == cplx(1.0, 0.0));
    CHECK(multiplier_m(0.0, 1.0) == cplx(-1.0, 0.0));
    // (3 - 4i)/(3 + 4i) = (-7 - 24i)/25
    const cplx m = multiplier_m(3.0, 4.0);
    CHECK(m.real() == doctest::Approx(-7.0 / 25.0).epsilon(1e-15));
    CHECK(m.imag() == doctest::Approx(-24.0 / 25.0).epsilon(1e-15));
    CHECK(multiplier_m(0.0, 0.0) == cplx(0.0, 0.0));
}

TEST_CASE("multiplier is unimodular and even") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = d(rng), b = d(rng);
        if (a == 0.0 && b == 0.0) continue;
        const cplx m = multiplier_m(a, b);
        CHECK(std::abs(std::abs(m) - 1.0) <= 1e-14);
        const cplx me = multiplier_m(-a, -b);
        CHECK(std::abs(m - me) <= 1e-14);
    }
}

TEST_CASE("dispersion symbol values") {
    CHECK(symbol_w(1.0, 0.0, Em1).value == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(symbol_w(0.0, 3.7, Em1).value == 0.0);
    const double w1 = symbol_w(2.0, 1.0, Em1).value;
    const double w2 = symbol_w(-2.0, -1.0, Em1).value;
    CHECK(w1 == doctest::Approx(-w2).epsilon(1e-15));
    CHECK(symbol_w(0.0, 0.0, Em1).at_origin);
}

TEST_CASE("complex form matches the real-coordinate form") {
    CHECK(symbol_p(cplx(1.0, 0.0), Em1) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(symbol_p(cplx(0.0, 1.0), Em1) == doctest::Approx(0.0));
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> d(-4.0, 4.0);
    for (int i = 0; i < 500; ++i) {
        const double a = d(rng), b = d(rng);
        if (a == 0.0 && b == 0.0) continue;
        const double pw = symbol_w(a, b, Em1).value;
        const double pc = symbol_p(cplx(a, b), Em1);
        CHECK(pc == doctest::Approx(pw).epsilon(1e-12));
    }
    // invariance under cube roots of unity
    const cplx xi0(1.0, 0.5);
    const cplx rot = std::polar(1.0, 2.0 * pi / 3.0);
    CHECK(symbol_p(rot * xi0, Em1) == doctest::Approx(symbol_p(xi0, Em1)).epsilon(1e-12));
}

TEST_CASE("symbol is continuous at the origin") {
    for (double r : {1e-1, 1e-3, 1e-6}) {
        for (double th : {0.1, 0.7, 2.0, 4.5}) {
            const double a = r * std::cos(th), b = r * std::sin(th);
            const double w = symbol_w(a, b, Em1).value;
            CHECK(std::abs(w) <= 2.0 * r * r * r + 24.0 * r + 1e-300);
        }
    }
}

TEST_CASE("sigma") {
    CHECK(sigma({1.0, 0.0, 8.0}, Em1) == doctest::Approx(0.0));
    CHECK(sigma({0.0, 1.0, 0.0}, Em1) == doctest::Approx(0.0));
    CHECK(sigma({0.0, 0.0, 5.0}, Em1) == doctest::Approx(5.0));
}

TEST_CASE("resonance function values and symmetry") {
    CHECK(resonance_h(cplx(1, 0), cplx(1, 0), Em1) == doctest::Approx(0.0));
    CHECK(resonance_h(cplx(1, 0), cplx(2, 0), Em1) == doctest::Approx(12.0).epsilon(1e-13));
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const cplx xi(d(rng), d(rng));
        const cplx xh(d(rng), d(rng));
        const double h1 = resonance_h(xi, xh, Em1);
        const double h2 = resonance_h(xh - xi, xh, Em1);
        CHECK(h1 == doctest::Approx(h2).epsilon(1e-10));
    }
}

TEST_CASE("resonance derivative matches finite differences") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    int done = 0;
    while (done < 100) {
        const cplx xi(d(rng), d(rng));
        const cplx xh(d(rng), d(rng));
        if (std::abs(xi) < 0.3 || std::abs(xh - xi) < 0.3) continue;
        for (int axis : {1, 2}) {
            const double h = 1e-5;
            const cplx dv = (axis == 1) ? cplx(h, 0) : cplx(0, h);
            const double fd =
                (resonance_h(xi + dv, xh, Em1) - resonance_h(xi - dv, xh, Em1)) / (2 * h);
            const double cf = resonance_dh(xi, xh, Em1, axis);
            CHECK(std::abs(cf - fd) <= 1e-6 * std::max(1.0, std::abs(cf)));
        }
        ++done;
    }
}

TEST_CASE("resonance derivative symmetric when xihat = 2 xi") {
    const cplx xi(1.0, 1.0);
    const cplx xh = 2.0 * xi;
    // xihat - xi = xi, so swapping the two difference arguments is a no-op
    for (int axis : {1, 2}) {
        const double v = resonance_dh(xi, xh, Em1, axis);
        CHECK(std::isfinite(v));
        // the derivative of H at this symmetric point vanishes
        CHECK(std::abs(v) <= 1e-12);
    }
}

TEST_CASE("fractional kernel bound") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        const double a = d(rng), b = d(rng);
        if (a == 0.0 && b == 0.0) continue;
        CHECK(std::abs(a * b / (a * a + b * b)) <= 0.5 + 1e-15);
    }
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(symbol_w(1.0, 0.0, Energy(0.5)), std::domain_error);
    CHECK_THROWS_AS(resonance_h(cplx(1, 0), cplx(2, 0), Energy(0.0)), std::domain_error);
    CHECK_THROWS_AS(resonance_dh(cplx(0, 0), cplx(1, 0), Em1, 1), std::domain_error);
    CHECK_THROWS_AS(resonance_dh(cplx(1, 0), cplx(1, 0), Em1, 2), std::domain_error);
}
