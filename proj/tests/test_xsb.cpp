#include <random>

#include "doctest.h"
#include "nvlab/symbols.hpp"
#include "nvlab/xsb.hpp"

using namespace nv;

namespace {

SpaceTimeGrid stg(int nt = 16, int nsp = 16) {
    SpaceTimeGrid g;
    g.nt = nt;
    g.nx = g.ny = nsp;
    g.T = 8.0;
    g.Lx = g.Ly = 12.0;
    return g;
}

// real-valued random band-limited space-time field, band <= n/4 per axis
SpaceTimeField random_field(const SpaceTimeGrid& g, uint64_t seed) {
    SpaceTimeField f(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const int bt = g.nt / 4, bs = g.nx / 4;
    for (int mt = -bt; mt <= bt; ++mt)
        for (int mx = -bs; mx <= bs; ++mx)
            for (int my = -bs; my <= bs; ++my) {
                const double amp = std::exp(-0.2 * (mt * mt + mx * mx + my * my));
                const cplx c = amp * cplx(d(rng), d(rng));
                for (int it = 0; it < g.nt; ++it)
                    for (int iy = 0; iy < g.ny; ++iy)
                        for (int ix = 0; ix < g.nx; ++ix) {
                            const double ph = two_pi * (double(mt * it) / g.nt +
                                                        double(mx * ix) / g.nx +
                                                        double(my * iy) / g.ny);
                            f.a[g.idx(it, ix, iy)] += (c * std::polar(1.0, ph)).real();
                        }
            }
    return f;
}

}  // namespace

TEST_CASE("cutoff profile and telescoping partition") {
    CHECK(CutoffSpec::phi_tilde(0.3) == 1.0);
    CHECK(CutoffSpec::phi_tilde(1.1) == 0.0);
    CHECK(CutoffSpec::phi(0.5) == 1.0);  // phi_tilde(1/2) - phi_tilde(1)
    CHECK(CutoffSpec::phi_shell(0.5 * 8.0, 8.0) == 1.0);
    CHECK(CutoffSpec::phi_shell(0.5 * 8.0, 32.0) == 0.0);
    for (double s : {0.0, 0.3, 1.0, 7.7, 123.4, 5.1e3, 9.9e5}) {
        double sum = 0.0;
        for (double N = 1.0; N <= double(1 << 21); N *= 2.0) sum += CutoffSpec::phi_shell(s, N);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("spatial shells: single-mode weights and partition of unity") {
    auto g = stg();
    const Energy E(-1.0);
    // pick the spatial mode and the dyadic N with |xi| = |E|^{1/2} N / 2
    // exactly: use N = |xi| * 2 with the E normalization
    SpaceTimeField f(g);
    const int mx = 2, my = 1;
    for (int it = 0; it < g.nt; ++it)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                f.a[g.idx(it, ix, iy)] =
                    std::polar(1.0, g.kx(mx) * g.x(ix) + g.ky(my) * g.y(iy));
    const double kmod = std::hypot(g.kx(mx), g.ky(my));
    const double N = 2.0 * kmod;  // shell where the weight is exactly 1
    auto pf = project_PN(f, N, E);
    double worst = 0.0;
    for (size_t i = 0; i < f.a.size(); ++i) worst = std::max(worst, std::abs(pf.a[i] - f.a[i]));
    CHECK(worst <= 1e-12);
    auto pf4 = project_PN(f, 4.0 * N, E);
    for (const auto& z : pf4.a) CHECK(std::abs(z) <= 1e-13);

    // partition of unity on a band-limited field
    auto r = random_field(stg(8, 16), 5);
    SpaceTimeField sum(r.grid);
    for (double Nsh = 1.0; Nsh <= 64.0; Nsh *= 2.0) {
        auto piece = project_PN(r, Nsh, E);
        for (size_t i = 0; i < sum.a.size(); ++i) sum.a[i] += piece.a[i];
    }
    double w2 = 0.0, scale = 0.0;
    for (size_t i = 0; i < sum.a.size(); ++i) {
        w2 = std::max(w2, std::abs(sum.a[i] - r.a[i]));
        scale = std::max(scale, std::abs(r.a[i]));
    }
    CHECK(w2 <= 1e-12 * scale);

    // disjoint supports: P_N P_{N'} = 0 for N/N' >= 4
    auto p2 = project_PN(project_PN(r, 8.0, E), 2.0, E);
    for (const auto& z : p2.a) CHECK(std::abs(z) <= 1e-13 * scale);
}

TEST_CASE("modulation shells concentrate the free flow at L = 1") {
    auto g = stg();
    const Energy E(-1.0);
    // mode exp(i(k.x - w(k) t)) has sigma = 0 exactly when w(k) matches a
    // tau lattice point; force that by tuning T... instead check that the
    // L = 1 shell passes it and distant shells kill it
    const int mx = 1, my = 1;
    const double wv = symbol_w(g.kx(mx), g.ky(my), E).value;
    SpaceTimeGrid g2 = g;
    g2.T = two_pi / std::max(std::abs(wv), 1e-9);  // tau resolution hits w exactly
    SpaceTimeField f(g2);
    for (int it = 0; it < g2.nt; ++it)
        for (int iy = 0; iy < g2.ny; ++iy)
            for (int ix = 0; ix < g2.nx; ++ix)
                f.a[g2.idx(it, ix, iy)] = std::polar(
                    1.0, g2.kx(mx) * g2.x(ix) + g2.ky(my) * g2.y(iy) - wv * g2.t(it));
    auto q1 = project_QL(f, 1.0, E);
    double keep = 0.0;
    for (size_t i = 0; i < f.a.size(); ++i) keep = std::max(keep, std::abs(q1.a[i] - f.a[i]));
    CHECK(keep <= 1e-12);
    auto q64 = project_QL(f, 64.0, E);
    for (const auto& z : q64.a) CHECK(std::abs(z) <= 1e-13);

    // partition of unity over modulation shells
    auto r = random_field(stg(8, 16), 6);
    SpaceTimeField sum(r.grid);
    bool done = false;
    for (double L = 1.0; L <= double(1 << 22) && !done; L *= 2.0) {
        auto piece = project_QL(r, L, E);
        for (size_t i = 0; i < sum.a.size(); ++i) sum.a[i] += piece.a[i];
    }
    double worst = 0.0, scale = 0.0;
    for (size_t i = 0; i < sum.a.size(); ++i) {
        worst = std::max(worst, std::abs(sum.a[i] - r.a[i]));
        scale = std::max(scale, std::abs(r.a[i]));
    }
    CHECK(worst <= 1e-11 * scale);
}

TEST_CASE("energy rescaling moves a fixed mode across modulation shells") {
    auto g = stg();
    const int mx = 2;
    const double tau0 = g.tau(3);
    SpaceTimeField f(g);
    for (int it = 0; it < g.nt; ++it)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                f.a[g.idx(it, ix, iy)] =
                    std::polar(1.0, g.kx(mx) * g.x(ix) - tau0 * g.t(it));

    // projection weight equals the scalar shell weight of this (tau, xi)
    const Energy E1(-1.0);
    const double s1 = std::abs(tau0 - symbol_w(g.kx(mx), 0.0, E1).value);
    for (double L : {1.0, 4.0, 16.0, 64.0}) {
        auto q = project_QL(f, L, E1);
        double got = 0.0;
        for (const auto& z : q.a) got = std::max(got, std::abs(z));
        CHECK(got == doctest::Approx(CutoffSpec::phi_shell(s1, L)).epsilon(1e-10).scale(1.0));
    }

    // quadrupling |E| moves the dominant modulation shell of the same mode
    auto dominant = [&](Energy E) {
        const double sg = std::abs(tau0 - symbol_w(g.kx(mx), 0.0, E).value) *
                          std::pow(E.abs(), -1.5);
        double best = -1.0, bestL = 0.0;
        for (double L = 1.0; L <= 4096.0; L *= 2.0) {
            const double w = CutoffSpec::phi_shell(sg, L);
            if (w > best) {
                best = w;
                bestL = L;
            }
        }
        return bestL;
    };
    CHECK(dominant(Energy(-1.0)) != dominant(Energy(-4.0)));
}

TEST_CASE("weighted norm: zero field, L2 reduction, single-mode closed form") {
    auto g = stg();
    XsbSpec spec;
    spec.s = 0.75;
    spec.b = 0.4;
    spec.E = Energy(-1.0);

    SpaceTimeField z(g);
    z.windowed = true;
    CHECK(xsb_norm(z, spec).plain == 0.0);

    // s = b = 0 equals the plain space-time L2 norm
    auto r = random_field(g, 7);
    r.windowed = true;  // treat as already windowed for the identity
    XsbSpec l2;
    l2.s = 0.0;
    l2.b = 0.0;
    KahanSum ss;
    for (const auto& v : r.a) ss.add(std::norm(v));
    const double ref = std::sqrt(ss.value() * g.cell());
    CHECK(xsb_norm(r, l2).plain == doctest::Approx(ref).epsilon(1e-12));
    CHECK(xsb_norm(r, l2).energy_normalized == doctest::Approx(ref).epsilon(1e-12));

    // Hann-windowed single mode: exactly three tau bins
    SpaceTimeField m(g);
    m.window.kind = TimeWindow::Kind::HANN;
    const int mx = 2, my = 1, mt = 2;
    const double tau0 = g.tau(mt);
    for (int it = 0; it < g.nt; ++it)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                m.a[g.idx(it, ix, iy)] = std::polar(
                    1.0, g.kx(mx) * g.x(ix) + g.ky(my) * g.y(iy) - tau0 * g.t(it));
    apply_window(m);
    const double kmod = std::hypot(g.kx(mx), g.ky(my));
    const double om = two_pi / g.T;
    auto br = [](double x) { return std::sqrt(1.0 + x * x); };
    auto sg = [&](double tau) {
        return tau - symbol_w(g.kx(mx), g.ky(my), spec.E).value;
    };
    const double hand =
        std::sqrt(g.volume() * std::pow(br(kmod), 2.0 * spec.s) *
                  (0.25 * std::pow(br(sg(tau0)), 2.0 * spec.b) +
                   0.0625 * std::pow(br(sg(tau0 - om)), 2.0 * spec.b) +
                   0.0625 * std::pow(br(sg(tau0 + om)), 2.0 * spec.b)));
    CHECK(xsb_norm(m, spec).plain == doctest::Approx(hand).epsilon(1e-10));

    // monotone in s and b when high modes are present
    XsbSpec more = spec;
    more.s = spec.s + 0.3;
    CHECK(xsb_norm(m, more).plain >= xsb_norm(m, spec).plain);
    more = spec;
    more.b = spec.b + 0.3;
    CHECK(xsb_norm(m, more).plain >= xsb_norm(m, spec).plain);
}

TEST_CASE("bilinear ratio: symmetry, one-mode hand value, grid stability") {
    auto g = stg(16, 16);
    XsbSpec spec;
    spec.s = 0.75;
    spec.eps = 0.05;
    spec.E = Energy(-1.0);

    auto v = random_field(g, 11);
    auto w = random_field(g, 12);
    const double r1 = bilinear_ratio(v, w, spec);
    const double r2 = bilinear_ratio(w, v, spec);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
    CHECK(std::isfinite(r1));
    CHECK(r1 > 0.0);

    // one-mode inputs: the product is a single mode and every norm has a
    // closed form through the window-bin algebra
    SpaceTimeField a(g), b(g);
    a.window.kind = b.window.kind = TimeWindow::Kind::HANN;
    const double k1x = g.kx(1), k2x = g.kx(2);
    for (int it = 0; it < g.nt; ++it)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                a.a[g.idx(it, ix, iy)] = std::polar(1.0, k1x * g.x(ix));
                b.a[g.idx(it, ix, iy)] = std::polar(1.0, k2x * g.x(ix));
            }
    const double got = bilinear_ratio(a, b, spec);
    // dz of the product mode multiplies by |xi|/2 = (k1x + k2x)/2 in modulus
    // (xi2 = 0); ratio = |k|/2 * N_num / (N_a N_b) with each N the windowed
    // one-mode norm
    auto one_mode_norm = [&](double kx, double bexp, double win_pow) {
        // Hann^win_pow window bins: win_pow = 1 -> (1/2, 1/4); 2 -> (3/8, 1/4, 1/16)
        std::vector<std::pair<int, double>> bins;
        if (win_pow == 1.0)
            bins = {{0, 0.5}, {1, -0.25}, {-1, -0.25}};
        else
            bins = {{0, 0.375}, {1, -0.25}, {-1, -0.25}, {2, 0.0625}, {-2, 0.0625}};
        const double om2 = two_pi / g.T;
        double s2 = 0.0;
        for (auto [m2, c] : bins) {
            const double tau = m2 * om2;  // symmetric bins: sign pairs with its mirror
            const double sig = tau - symbol_w(kx, 0.0, spec.E).value;
            s2 += c * c * std::pow(1.0 + sig * sig, bexp);
        }
        return std::sqrt(g.volume() * std::pow(1.0 + kx * kx, spec.s) * s2);
    };
    const double num = 0.5 * (k1x + k2x) *
                       one_mode_norm(k1x + k2x, -0.5 - 2.0 * spec.eps, 2.0);
    const double den = one_mode_norm(k1x, 0.5 + spec.eps, 1.0) *
                       one_mode_norm(k2x, 0.5 + spec.eps, 1.0);
    CHECK(got == doctest::Approx(num / den).epsilon(1e-9));
}

TEST_CASE("bilinear ratio is stable under grid doubling") {
    XsbSpec spec;
    spec.s = 0.75;
    spec.eps = 0.05;
    spec.E = Energy(-1.0);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    auto coarse = stg(16, 16);
    auto fine = stg(32, 32);
    for (int trial = 0; trial < 3; ++trial) {
        // one fixed random mode set, band-limited to the coarse grid / 4
        struct Mode {
            int mt, mx, my;
            cplx c;
        };
        std::vector<Mode> modes;
        for (int mt = -2; mt <= 2; ++mt)
            for (int mx = -2; mx <= 2; ++mx)
                for (int my = -2; my <= 2; ++my)
                    modes.push_back({mt, mx, my,
                                     std::exp(-0.3 * (mt * mt + mx * mx + my * my)) *
                                         cplx(d(rng), d(rng))});
        auto build = [&](const SpaceTimeGrid& g) {
            SpaceTimeField f(g);
            for (const auto& m : modes)
                for (int it = 0; it < g.nt; ++it)
                    for (int iy = 0; iy < g.ny; ++iy)
                        for (int ix = 0; ix < g.nx; ++ix) {
                            const double ph =
                                two_pi * (double(m.mt * it) / g.nt + double(m.mx * ix) / g.nx +
                                          double(m.my * iy) / g.ny);
                            f.a[g.idx(it, ix, iy)] += (m.c * std::polar(1.0, ph)).real();
                        }
            return f;
        };
        auto vc = build(coarse), wc = build(coarse);
        auto vf = build(fine), wf = build(fine);
        const double rc = bilinear_ratio(vc, wc, spec);
        const double rf = bilinear_ratio(vf, wf, spec);
        CHECK(std::abs(rf - rc) <= 0.10 * rc);
    }
}

TEST_CASE("resonance region probe") {
    const auto rep = resonance_region_probe(1.0, 16.0, 1.0, 1.0, Energy(-1.0), 100000, 99);
    CHECK(rep.members > 0);
    CHECK(rep.min_derivative_ratio > 0.0);
    const auto rep2 = resonance_region_probe(1.0, 32.0, 1.0, 1.0, Energy(-1.0), 400000, 99);
    // measure shrinks roughly like 1/Nhat^2 (within a factor 4)
    const double shrink = rep.measure_estimate / std::max(rep2.measure_estimate, 1e-300);
    CHECK(shrink >= 1.0);
    CHECK(shrink <= 16.0);
    // deterministic under the seed
    const auto rep3 = resonance_region_probe(1.0, 16.0, 1.0, 1.0, Energy(-1.0), 100000, 99);
    CHECK(rep3.measure_estimate == rep.measure_estimate);
    CHECK(rep3.members == rep.members);
    CHECK_THROWS_AS(resonance_region_probe(8.0, 8.0, 1.0, 1.0, Energy(-1.0), 10, 1),
                    std::invalid_argument);
}
