// Command-line front end: every operation of the library behind explicit,
// scriptable subcommands with JSON config, deterministic CSV/JSON artifacts
// and a manifest per run.

#include <array>
#include <filesystem>
#include <fstream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "nvlab/io.hpp"
#include "nvlab/kp.hpp"
#include "nvlab/oscint.hpp"
#include "nvlab/solver.hpp"
#include "nvlab/stationary.hpp"
#include "nvlab/suite.hpp"
#include "nvlab/symbols.hpp"
#include "nvlab/xsb.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTolerance = 2;

json load_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            std::ifstream f(argv[i + 1]);
            if (!f) throw CLI::ValidationError("--config", "cannot open config file");
            json j;
            f >> j;
            return j;
        }
    return json::object();
}

template <typename T>
T cfg_or(const json& cfg, const std::string& key, T def) {
    return cfg.contains(key) ? cfg.at(key).get<T>() : def;
}

void emit_manifest(const std::string& out_dir, const json& resolved) {
    fs::create_directories(out_dir);
    write_manifest(out_dir + "/manifest.json", resolved.dump());
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

const char* region_name(Region r) {
    switch (r) {
        case Region::INTERIOR: return "INTERIOR";
        case Region::BOUNDARY: return "BOUNDARY";
        default: return "EXTERIOR";
    }
}

// closed-form blow-up initial data: v = -2 Lap log F through the exact
// derivatives of the polynomial F
RealField2D blowup_field(const GridSpec& g, double a, double c, double d) {
    RealField2D v(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix), y = g.y(iy);
            const double r2 = x * x + y * y;
            const double F = a + c * (x * x * x + y * y * y) + d * r2 * r2;
            if (!(F > 0.0))
                throw std::domain_error("blowup preset: F must stay positive on the grid");
            const double Fx = 3.0 * c * x * x + 4.0 * d * r2 * x;
            const double Fy = 3.0 * c * y * y + 4.0 * d * r2 * y;
            const double Fxx = 6.0 * c * x + 4.0 * d * (r2 + 2.0 * x * x);
            const double Fyy = 6.0 * c * y + 4.0 * d * (r2 + 2.0 * y * y);
            v.at(ix, iy) =
                -2.0 * ((Fxx + Fyy) / F - (Fx * Fx + Fy * Fy) / (F * F));
        }
    return v;
}

int run_symbol(const json& cfg, double xi1, double xi2, double tau, double E,
               const std::string& out) {
    json res;
    res["multiplier"] = complex_json(multiplier_m(xi1, xi2));
    res["w"] = symbol_w(xi1, xi2, Energy(E)).value;
    res["p"] = symbol_p(cplx(xi1, xi2), Energy(E));
    res["sigma"] = sigma({xi1, xi2, tau}, Energy(E));
    std::printf("%s\n", res.dump(2).c_str());
    if (!out.empty()) {
        emit_manifest(out, cfg);
        write_text_file(out + "/symbol.json", res.dump(2) + "\n");
    }
    return kExitOk;
}

int run_roots(const json& cfg, cplx u, const std::string& out) {
    const auto st = solve_stationary(u);
    json res;
    res["u"] = complex_json(u);
    res["zeta_roots"] = json::array();
    for (const auto& z : st.zeta_roots) res["zeta_roots"].push_back(complex_json(z));
    res["lambda_points"] = json::array();
    for (const auto& l : st.lambda_points) res["lambda_points"].push_back(complex_json(l));
    res["classification"] = region_name(st.classification);
    res["omega"] = st.omega;
    res["phi"] = st.phi;
    res["max_residual"] = st.max_residual;
    std::printf("%s\n", res.dump(2).c_str());
    if (!out.empty()) {
        emit_manifest(out, cfg);
        write_text_file(out + "/roots.json", res.dump(2) + "\n");
    }
    return kExitOk;
}

void push_oscint_row(CsvTable& t, double time, cplx u, double E, double alpha, double beta,
                     const OscIntResult& r) {
    t.add_row({time, u.real(), u.imag(), E, alpha, beta, r.value.real(), r.value.imag(),
               std::abs(r.value), r.stabilization_error});
}

int run_oscint(const json& cfg, double t, cplx u, double E, double alpha, double beta,
               const std::string& plane, double rel_tol, int levels, const std::string& out) {
    OscIntQuery q;
    q.t = t;
    q.u = u;
    q.E = Energy(E);
    q.alpha = alpha;
    q.beta = beta;
    q.quad.rel_tol = rel_tol;
    q.quad.richardson_levels = levels;

    CsvTable table(
        {"t", "u_re", "u_im", "E", "alpha", "beta", "I_re", "I_im", "abs_I", "stab_err"});
    bool converged = true;
    if (plane == "xi" || plane == "both") {
        const auto r = eval_I_xi(q);
        push_oscint_row(table, t, u, E, alpha, beta, r);
        converged = converged && r.converged;
    }
    if (plane == "lambda" || plane == "both") {
        const auto r = eval_I_lambda(q);
        push_oscint_row(table, t, u, E, alpha, beta, r);
        converged = converged && r.converged;
    }
    std::printf("%s", table.str().c_str());
    if (!out.empty()) {
        emit_manifest(out, cfg);
        table.write(out + "/oscint.csv");
    }
    return converged ? kExitOk : kExitTolerance;
}

int run_decay(const json& cfg, double alpha, double beta, double t_lo, double t_hi, int nt,
              std::vector<std::string> u_list, bool small_t, double slack,
              const std::string& out) {
    if (u_list.empty()) u_list = {"0,0", "18,0", "-6,0", "1,1", "100,0"};
    std::vector<cplx> u_set;
    for (const auto& s : u_list) {
        const auto comma = s.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--u", "expected re,im");
        u_set.emplace_back(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
    }
    if (small_t && t_lo == 1.0 && t_hi == 1000.0) {
        t_lo = 1e-3;
        t_hi = 1.0;
    }
    const double expnt = small_t ? small_time_exponent(alpha) : large_time_exponent(alpha);
    QuadControl quad;
    const auto probe =
        decay_probe(alpha, beta, u_set, log_grid(t_lo, t_hi, nt), Energy(-1.0), quad, expnt,
                    slack);

    CsvTable table(
        {"t", "u_re", "u_im", "E", "alpha", "beta", "I_re", "I_im", "abs_I", "stab_err"});
    bool converged = true;
    const auto grid_t = log_grid(t_lo, t_hi, nt);
    for (size_t iu = 0; iu < u_set.size(); ++iu)
        for (size_t it = 0; it < grid_t.size(); ++it) {
            const auto& r = probe.table[iu][it];
            push_oscint_row(table, grid_t[it], u_set[iu], -1.0, alpha, beta, r);
            converged = converged && r.converged;
        }
    json fits;
    fits["comp_exponent"] = expnt;
    fits["slack"] = slack;
    fits["bound_ok"] = probe.bound_ok;
    fits["worst_ratio"] = probe.worst_ratio;
    fits["per_u"] = json::array();
    for (size_t iu = 0; iu < u_set.size(); ++iu) {
        const auto& f = probe.fits[iu];
        fits["per_u"].push_back({{"u", complex_json(u_set[iu])},
                                 {"exponent", f.exponent},
                                 {"log_constant", f.constant},
                                 {"rms_residual", f.rms_residual},
                                 {"n_points", f.n_points}});
    }
    fits["envelope_exponent"] = probe.envelope.exponent;
    std::printf("%s", table.str().c_str());
    std::printf("%s\n", fits.dump(2).c_str());
    if (!out.empty()) {
        emit_manifest(out, cfg);
        table.write(out + "/decay.csv");
        write_text_file(out + "/decay_fits.json", fits.dump(2) + "\n");
    }
    return (probe.bound_ok && converged) ? kExitOk : kExitTolerance;
}

int run_evolve(const json& cfg, const std::string& preset, int nx, int ny, double Lx, double Ly,
               double E, double T, double dt, double amp, double sigma_p, double c_sol, int mx,
               int my, double ba, double bc, double bd, int n_snapshots, int sample_every,
               const std::string& out) {
    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    g.Lx = Lx;
    g.Ly = Ly;
    RealField2D v0(g);
    if (preset == "gaussian") {
        v0 = preset_gaussian(g, amp, sigma_p);
    } else if (preset == "kdv_soliton") {
        v0 = preset_kdv_soliton(g, c_sol);
    } else if (preset == "single_mode") {
        v0 = preset_single_mode(g, mx, my, amp);
    } else if (preset == "blowup") {
        v0 = blowup_field(g, ba, bc, bd);
    } else if (preset == "zero") {
        v0 = RealField2D(g);
    } else {
        throw CLI::ValidationError("--preset", "unknown preset " + preset);
    }

    emit_manifest(out, cfg);
    NVState s(g, v0, Energy(E));
    CsvTable inv_table({"t", "l1", "mass_re", "mass_im", "energy_re", "energy_im"});
    auto sample = [&](const NVState& st) {
        const auto inv = invariants(st);
        inv_table.add_row({st.t, inv.l1_integral, inv.mass.real(), inv.mass.imag(),
                           inv.energy.real(), inv.energy.imag()});
    };
    sample(s);
    write_snapshot(out + "/snapshot_0000", s.v, s.t, E);

    const long nsteps = long(std::llround(T / dt));
    if (nsteps > 0 && std::abs(nsteps * dt - T) > 1e-9 * std::max(1.0, T))
        std::fprintf(stderr, "note: T adjusted to %ld steps of dt\n", nsteps);
    StepControl ctl;
    ctl.dt = dt;
    Etdrk4 stepper(g, Energy(E), dt);
    const long snap_stride =
        (n_snapshots > 1) ? std::max<long>(1, nsteps / (n_snapshots - 1)) : nsteps + 1;
    int snap_id = 1;
    int status = kExitOk;
    try {
        for (long k = 1; k <= nsteps; ++k) {
            stepper.step(s, ctl);
            if (sample_every > 0 && (k % sample_every == 0 || k == nsteps)) sample(s);
            if (k % snap_stride == 0 || k == nsteps) {
                char name[64];
                std::snprintf(name, sizeof(name), "/snapshot_%04d", snap_id++);
                write_snapshot(out + name, s.v, s.t, E);
            }
        }
    } catch (const NanDetected& e) {
        std::fprintf(stderr, "aborted: %s (last finite state retained)\n", e.what());
        status = kExitTolerance;
    }
    inv_table.write(out + "/invariants.csv");
    std::printf("%s", inv_table.str().c_str());
    return status;
}

int run_invariants(const json& cfg, const std::string& snapshot, const std::string& out) {
    const auto snap = read_snapshot(snapshot);
    NVState s(snap.field.grid, snap.field, Energy(snap.E));
    s.t = snap.time;
    const auto inv = invariants(s);
    json res;
    res["t"] = s.t;
    res["l1"] = inv.l1_integral;
    res["mass"] = complex_json(inv.mass);
    res["energy"] = complex_json(inv.energy);
    res["energy_conj_paired"] = complex_json(inv.energy_conj_paired);
    std::printf("%s\n", res.dump(2).c_str());
    if (!out.empty()) {
        emit_manifest(out, cfg);
        CsvTable t({"t", "l1", "mass_re", "mass_im", "energy_re", "energy_im"});
        t.add_row({s.t, inv.l1_integral, inv.mass.real(), inv.mass.imag(), inv.energy.real(),
                   inv.energy.imag()});
        t.write(out + "/invariants.csv");
    }
    return kExitOk;
}

int run_bilinear(const json& cfg, double s_exp, double eps, double E, int samples,
                 uint64_t seed, int nt, int nsp, double T, double L, const std::string& out) {
    SpaceTimeGrid g;
    g.nt = nt;
    g.nx = g.ny = nsp;
    g.T = T;
    g.Lx = g.Ly = L;
    XsbSpec spec;
    spec.s = s_exp;
    spec.eps = eps;
    spec.E = Energy(E);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    char gridname[48];
    std::snprintf(gridname, sizeof(gridname), "%dx%dx%d", g.nt, g.nx, g.ny);

    CsvTable table({"sample_id", "s", "eps", "E", "ratio", "grid"});
    for (int k = 0; k < samples; ++k) {
        SpaceTimeField v(g), w(g);
        for (int mt = -2; mt <= 2; ++mt)
            for (int mx = -2; mx <= 2; ++mx)
                for (int my = -2; my <= 2; ++my) {
                    const double a = std::exp(-0.3 * (mt * mt + mx * mx + my * my));
                    const cplx cv = a * cplx(d(rng), d(rng));
                    const cplx cw = a * cplx(d(rng), d(rng));
                    for (int it = 0; it < g.nt; ++it)
                        for (int iy = 0; iy < g.ny; ++iy)
                            for (int ix = 0; ix < g.nx; ++ix) {
                                const double ph =
                                    two_pi * (double(mt * it) / g.nt + double(mx * ix) / g.nx +
                                              double(my * iy) / g.ny);
                                const cplx e = std::polar(1.0, ph);
                                v.a[g.idx(it, ix, iy)] += (cv * e).real();
                                w.a[g.idx(it, ix, iy)] += (cw * e).real();
                            }
                }
        const double ratio = bilinear_ratio(v, w, spec);
        table.add_row_mixed({std::to_string(k), fmt_g17(s_exp), fmt_g17(eps), fmt_g17(E),
                             fmt_g17(ratio), gridname});
    }
    std::printf("%s", table.str().c_str());
    if (!out.empty()) {
        emit_manifest(out, cfg);
        table.write(out + "/bilinear.csv");
    }
    return kExitOk;
}

int run_resonance(const json& cfg, double N, double Nhat, double L, double Lhat, double E,
                  long samples, uint64_t seed, const std::string& out) {
    const auto rep = resonance_region_probe(N, Nhat, L, Lhat, Energy(E), samples, seed);
    json res;
    res["N"] = rep.N;
    res["Nhat"] = rep.Nhat;
    res["L"] = rep.L;
    res["Lhat"] = rep.Lhat;
    res["E"] = rep.E;
    res["samples"] = rep.samples;
    res["members"] = rep.members;
    res["measure_estimate"] = rep.measure_estimate;
    res["min_derivative_ratio"] = rep.min_derivative_ratio;
    res["flagged"] = rep.flagged;
    std::printf("%s\n", res.dump(2).c_str());
    if (!out.empty()) {
        emit_manifest(out, cfg);
        write_text_file(out + "/resonance.json", res.dump(2) + "\n");
    }
    return kExitOk;
}

int run_kplimit(const json& cfg, std::vector<double> kappas, const std::string& sign_s, int nx,
                int ny, double Lx, double Ly, uint64_t seed, double evolve_T,
                const std::string& out) {
    if (kappas.empty()) kappas = {4.0, 8.0, 16.0, 32.0};
    const KpSign sign = (sign_s == "plus") ? KpSign::PLUS : KpSign::MINUS;
    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    g.Lx = Lx;
    g.Ly = Ly;
    RealField2D v0(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int mx = 1; mx <= 4; ++mx)
        for (int my = -3; my <= 3; ++my) {
            const double a = 0.25 * d(rng) * std::exp(-0.3 * (mx * mx + my * my));
            const double ph = pi * d(rng);
            for (int iy = 0; iy < g.ny; ++iy)
                for (int ix = 0; ix < g.nx; ++ix)
                    v0.at(ix, iy) += a * std::cos(two_pi * mx * g.x(ix) / g.Lx +
                                                  two_pi * my * g.y(iy) / g.Ly + ph);
        }
    KpStepControl ctl;
    if (evolve_T > 0.0) v0 = evolve_limit(v0, evolve_T, ctl, sign);

    std::vector<double> lk, lr;
    std::vector<std::array<double, 3>> rows;
    for (double kappa : kappas) {
        auto a = build_ansatz(v0, kappa, sign);
        const auto rc = residual_constraints(a);
        const double ra = residual_evolution(v0, kappa, sign);
        rows.push_back({rc.b_residual, rc.c_norm, ra});
        lk.push_back(std::log(kappa));
        lr.push_back(std::log(std::max(ra, 1e-300)));
    }
    const double slope = (lk.size() >= 2) ? fit_line(lk, lr).slope
                                          : std::numeric_limits<double>::quiet_NaN();
    CsvTable table({"kappa", "res_b2b", "res_b2c", "res_b2a", "slope_fit"});
    for (size_t i = 0; i < kappas.size(); ++i)
        table.add_row({kappas[i], rows[i][0], rows[i][1], rows[i][2], slope});
    std::printf("%s", table.str().c_str());
    if (!out.empty()) {
        emit_manifest(out, cfg);
        table.write(out + "/kplimit.csv");
    }
    return kExitOk;
}

int run_suite(const json& cfg, const std::string& only_s, const std::string& out) {
    std::vector<int> only;
    size_t pos = 0;
    while (pos < only_s.size()) {
        size_t comma = only_s.find(',', pos);
        if (comma == std::string::npos) comma = only_s.size();
        only.push_back(std::stoi(only_s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    const auto rep = run_acceptance(only);
    std::printf("%s: %zu criteria\n", rep.all_pass ? "ALL PASS" : "FAILURES PRESENT",
                rep.results.size());
    if (!out.empty()) {
        emit_manifest(out, cfg);
        write_text_file(out + "/suite_report.json", suite_report_json(rep));
    }
    return rep.all_pass ? kExitOk : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
    json cfg;
    try {
        cfg = load_config(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }

    CLI::App app{"numerical laboratory for a fixed-energy dispersive system"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config; flags override its keys");

    // symbol
    auto* sym = app.add_subcommand("symbol", "evaluate the pointwise symbols");
    double xi1 = cfg_or(cfg, "xi1", 1.0), xi2 = cfg_or(cfg, "xi2", 0.0);
    double tau = cfg_or(cfg, "tau", 0.0), E = cfg_or(cfg, "E", -1.0);
    std::string out = cfg_or<std::string>(cfg, "out", "");
    sym->add_option("--xi1", xi1);
    sym->add_option("--xi2", xi2);
    sym->add_option("--tau", tau);
    sym->add_option("--E", E);
    sym->add_option("--out", out);

    // roots
    auto* rt = app.add_subcommand("roots", "stationary-point cubic and classification");
    double u_re = cfg_or(cfg, "u_re", 18.0), u_im = cfg_or(cfg, "u_im", 0.0);
    rt->add_option("--u-re", u_re);
    rt->add_option("--u-im", u_im);
    rt->add_option("--u", u_re, "real part shorthand");
    rt->add_option("--out", out);

    // oscint
    auto* oi = app.add_subcommand("oscint", "oscillatory integral at one query point");
    double t = cfg_or(cfg, "t", 1.0), alpha = cfg_or(cfg, "alpha", 0.5);
    double beta = cfg_or(cfg, "beta", 0.0), rel_tol = cfg_or(cfg, "rel_tol", 1e-3);
    int levels = cfg_or(cfg, "levels", 3);
    std::string plane = cfg_or<std::string>(cfg, "plane", "xi");
    oi->add_option("--t", t);
    oi->add_option("--u-re", u_re);
    oi->add_option("--u-im", u_im);
    oi->add_option("--E", E);
    oi->add_option("--alpha", alpha);
    oi->add_option("--beta", beta);
    oi->add_option("--plane", plane)->check(CLI::IsMember({"xi", "lambda", "both"}));
    oi->add_option("--rel-tol", rel_tol);
    oi->add_option("--levels", levels);
    oi->add_option("--out", out);

    // decay
    auto* dc = app.add_subcommand("decay", "decay-law probe over a time grid");
    double t_lo = cfg_or(cfg, "t_lo", 1.0), t_hi = cfg_or(cfg, "t_hi", 1000.0);
    int nt = cfg_or(cfg, "nt", 8);
    double slack = cfg_or(cfg, "slack", 3.0);
    bool small_t = cfg_or(cfg, "small_t", false);
    std::vector<std::string> u_list = cfg_or(cfg, "u_list", std::vector<std::string>{});
    dc->add_option("--alpha", alpha);
    dc->add_option("--beta", beta);
    dc->add_option("--t-lo", t_lo);
    dc->add_option("--t-hi", t_hi);
    dc->add_option("--nt", nt);
    dc->add_option("--u", u_list, "repeatable: re,im");
    dc->add_flag("--small-t", small_t, "probe the small-time exponent window");
    dc->add_option("--slack", slack);
    dc->add_option("--out", out);

    // evolve
    auto* ev = app.add_subcommand("evolve", "pseudo-spectral evolution run");
    std::string preset = cfg_or<std::string>(cfg, "preset", "gaussian");
    int nx = cfg_or(cfg, "nx", 128), ny = cfg_or(cfg, "ny", 128);
    double Lx = cfg_or(cfg, "Lx", 30.0), Ly = cfg_or(cfg, "Ly", 30.0);
    double T = cfg_or(cfg, "T", 1.0), dt = cfg_or(cfg, "dt", 2e-3);
    double amp = cfg_or(cfg, "amp", 1.0), sigma_p = cfg_or(cfg, "sigma", 1.5);
    double c_sol = cfg_or(cfg, "c", 1.0);
    int mx = cfg_or(cfg, "mx", 1), my = cfg_or(cfg, "my", 2);
    double ba = cfg_or(cfg, "a", 1.0), bc = cfg_or(cfg, "blow_c", 1.0),
           bd = cfg_or(cfg, "d", 1.0);
    int n_snapshots = cfg_or(cfg, "snapshots", 2), sample_every = cfg_or(cfg, "sample_every", 50);
    std::string ev_out = cfg_or<std::string>(cfg, "out", "nvlab_run");
    ev->add_option("--preset", preset)
        ->check(CLI::IsMember({"gaussian", "kdv_soliton", "single_mode", "blowup", "zero"}));
    ev->add_option("--nx", nx);
    ev->add_option("--ny", ny);
    ev->add_option("--Lx", Lx);
    ev->add_option("--Ly", Ly);
    ev->add_option("--E", E);
    ev->add_option("--T", T);
    ev->add_option("--dt", dt);
    ev->add_option("--amp", amp);
    ev->add_option("--sigma", sigma_p);
    ev->add_option("--c", c_sol);
    ev->add_option("--mx", mx);
    ev->add_option("--my", my);
    ev->add_option("--blow-a", ba);
    ev->add_option("--blow-c", bc);
    ev->add_option("--blow-d", bd);
    ev->add_option("--snapshots", n_snapshots);
    ev->add_option("--sample-every", sample_every);
    ev->add_option("--out", ev_out);

    // invariants
    auto* iv = app.add_subcommand("invariants", "conserved quantities of a stored snapshot");
    std::string snapshot = cfg_or<std::string>(cfg, "snapshot", "");
    iv->add_option("--snapshot", snapshot)->required();
    iv->add_option("--out", out);

    // bilinear
    auto* bl = app.add_subcommand("bilinear", "bilinear smoothing ratio samples");
    double s_exp = cfg_or(cfg, "s", 0.75), eps = cfg_or(cfg, "eps", 0.05);
    int samples = cfg_or(cfg, "samples", 20);
    uint64_t seed = cfg_or<uint64_t>(cfg, "seed", 2024);
    int bnt = cfg_or(cfg, "bnt", 16), bnsp = cfg_or(cfg, "bnsp", 16);
    double bT = cfg_or(cfg, "T_window", 8.0), bL = cfg_or(cfg, "L_box", 12.0);
    bl->add_option("--s", s_exp);
    bl->add_option("--eps", eps);
    bl->add_option("--E", E);
    bl->add_option("--samples", samples);
    bl->add_option("--seed", seed);
    bl->add_option("--nt", bnt);
    bl->add_option("--nsp", bnsp);
    bl->add_option("--T", bT);
    bl->add_option("--L", bL);
    bl->add_option("--out", out);

    // resonance
    auto* rs = app.add_subcommand("resonance", "resonance-region Monte Carlo probe");
    double N = cfg_or(cfg, "N", 1.0), Nhat = cfg_or(cfg, "Nhat", 16.0);
    double Lsh = cfg_or(cfg, "L", 1.0), Lhat = cfg_or(cfg, "Lhat", 1.0);
    long rsamples = cfg_or<long>(cfg, "rsamples", 100000);
    rs->add_option("--N", N);
    rs->add_option("--Nhat", Nhat);
    rs->add_option("--L", Lsh);
    rs->add_option("--Lhat", Lhat);
    rs->add_option("--E", E);
    rs->add_option("--samples", rsamples);
    rs->add_option("--seed", seed);
    rs->add_option("--out", out);

    // kplimit
    auto* kp = app.add_subcommand("kplimit", "high-energy ansatz residual sweep");
    std::vector<double> kappas = cfg_or(cfg, "kappas", std::vector<double>{});
    std::string sign_s = cfg_or<std::string>(cfg, "sign", "minus");
    int knx = cfg_or(cfg, "knx", 128), kny = cfg_or(cfg, "kny", 32);
    double kLx = cfg_or(cfg, "kLx", 40.0), kLy = cfg_or(cfg, "kLy", 20.0);
    double evolve_T = cfg_or(cfg, "evolve_T", 0.1);
    kp->add_option("--kappa", kappas, "repeatable dyadic kappa values");
    kp->add_option("--sign", sign_s)->check(CLI::IsMember({"plus", "minus"}));
    kp->add_option("--nx", knx);
    kp->add_option("--ny", kny);
    kp->add_option("--Lx", kLx);
    kp->add_option("--Ly", kLy);
    kp->add_option("--seed", seed);
    kp->add_option("--evolve-T", evolve_T);
    kp->add_option("--out", out);

    // suite
    auto* su = app.add_subcommand("suite", "run the acceptance battery");
    std::string only_s = cfg_or<std::string>(cfg, "only", "");
    su->add_option("--only", only_s, "comma-separated criterion ids");
    su->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    // resolved configuration echo for the manifest
    json resolved = cfg;
    resolved["subcommand"] = app.get_subcommands().front()->get_name();

    try {
        if (sym->parsed()) return run_symbol(resolved, xi1, xi2, tau, E, out);
        if (rt->parsed()) return run_roots(resolved, cplx(u_re, u_im), out);
        if (oi->parsed())
            return run_oscint(resolved, t, cplx(u_re, u_im), E, alpha, beta, plane, rel_tol,
                              levels, out);
        if (dc->parsed())
            return run_decay(resolved, alpha, beta, t_lo, t_hi, nt, u_list, small_t, slack, out);
        if (ev->parsed())
            return run_evolve(resolved, preset, nx, ny, Lx, Ly, E, T, dt, amp, sigma_p, c_sol,
                              mx, my, ba, bc, bd, n_snapshots, sample_every, ev_out);
        if (iv->parsed()) return run_invariants(resolved, snapshot, out);
        if (bl->parsed())
            return run_bilinear(resolved, s_exp, eps, E, samples, seed, bnt, bnsp, bT, bL, out);
        if (rs->parsed())
            return run_resonance(resolved, N, Nhat, Lsh, Lhat, E, rsamples, seed, out);
        if (kp->parsed())
            return run_kplimit(resolved, kappas, sign_s, knx, kny, kLx, kLy, seed, evolve_T,
                               out);
        if (su->parsed()) return run_suite(resolved, only_s, out);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error (precondition): %s\n", e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error (precondition): %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitTolerance;
    }
    return kExitUsage;
}
