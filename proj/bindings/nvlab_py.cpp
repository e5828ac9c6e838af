// Python bindings for the main operations; fields cross the boundary as
// numpy arrays of shape (ny, nx) indexed [iy, ix].

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nvlab/kp.hpp"
#include "nvlab/oscint.hpp"
#include "nvlab/solver.hpp"
#include "nvlab/stationary.hpp"
#include "nvlab/suite.hpp"
#include "nvlab/symbols.hpp"
#include "nvlab/xsb.hpp"

namespace py = pybind11;
using namespace nv;

namespace {

GridSpec grid_of(const py::array& a, double Lx, double Ly) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-d array (ny, nx)");
    GridSpec g;
    g.ny = int(a.shape(0));
    g.nx = int(a.shape(1));
    g.Lx = Lx;
    g.Ly = Ly;
    g.validate();
    return g;
}

RealField2D to_field(const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
                     double Lx, double Ly) {
    RealField2D f(grid_of(a, Lx, Ly));
    std::copy(a.data(), a.data() + f.a.size(), f.a.begin());
    return f;
}

py::array_t<double> from_field(const RealField2D& f) {
    py::array_t<double> out({f.grid.ny, f.grid.nx});
    std::copy(f.a.begin(), f.a.end(), out.mutable_data());
    return out;
}

py::array_t<cplx> from_cfield(const ComplexField2D& f) {
    py::array_t<cplx> out({f.grid.ny, f.grid.nx});
    std::copy(f.a.begin(), f.a.end(), out.mutable_data());
    return out;
}

py::dict result_dict(const OscIntResult& r) {
    py::dict d;
    d["value"] = r.value;
    d["stabilization_error"] = r.stabilization_error;
    d["converged"] = r.converged;
    d["cutoff"] = r.cutoff_final;
    return d;
}

const char* region_name(Region r) {
    switch (r) {
        case Region::INTERIOR: return "INTERIOR";
        case Region::BOUNDARY: return "BOUNDARY";
        default: return "EXTERIOR";
    }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "numerical laboratory for a fixed-energy dispersive integrable system";

    // pointwise symbols
    m.def("multiplier_m", [](double x1, double x2) { return multiplier_m(x1, x2); });
    m.def("symbol_w",
          [](double x1, double x2, double E) { return symbol_w(x1, x2, Energy(E)).value; });
    m.def("symbol_p", [](cplx xi, double E) { return symbol_p(xi, Energy(E)); });
    m.def("sigma",
          [](double tau, double x1, double x2, double E) {
              return sigma({x1, x2, tau}, Energy(E));
          });
    m.def("resonance_h",
          [](cplx xi, cplx xihat, double E) { return resonance_h(xi, xihat, Energy(E)); });
    m.def("resonance_dh", [](cplx xi, cplx xihat, double E, int axis) {
        return resonance_dh(xi, xihat, Energy(E), axis);
    });

    // stationary machinery
    m.def("lambda_to_xi", &lambda_to_xi);
    m.def("xi_to_lambda", &xi_to_lambda);
    m.def("phase_S", &phase_S);
    m.def("phase_S_lambda", &phase_S_lambda);
    m.def("boundary_curve", &boundary_curve);
    m.def("factorization_residual", &factorization_residual);
    m.def("solve_stationary", [](cplx u) {
        const auto st = solve_stationary(u);
        py::dict d;
        d["zeta_roots"] = std::vector<cplx>(st.zeta_roots.begin(), st.zeta_roots.end());
        d["lambda_points"] =
            std::vector<cplx>(st.lambda_points.begin(), st.lambda_points.end());
        d["classification"] = region_name(st.classification);
        d["omega"] = st.omega;
        d["phi"] = st.phi;
        d["max_residual"] = st.max_residual;
        return d;
    });

    // oscillatory integrals
    m.def(
        "eval_I_xi",
        [](double t, cplx u, double E, double alpha, double beta, double rel_tol) {
            OscIntQuery q;
            q.t = t;
            q.u = u;
            q.E = Energy(E);
            q.alpha = alpha;
            q.beta = beta;
            q.quad.rel_tol = rel_tol;
            return result_dict(eval_I_xi(q));
        },
        py::arg("t"), py::arg("u"), py::arg("E") = -1.0, py::arg("alpha") = 0.5,
        py::arg("beta") = 0.0, py::arg("rel_tol") = 1e-3);
    m.def(
        "eval_I_lambda",
        [](double t, cplx u, double alpha, double beta, double rel_tol) {
            OscIntQuery q;
            q.t = t;
            q.u = u;
            q.alpha = alpha;
            q.beta = beta;
            q.quad.rel_tol = rel_tol;
            return result_dict(eval_I_lambda(q));
        },
        py::arg("t"), py::arg("u"), py::arg("alpha") = 0.5, py::arg("beta") = 0.0,
        py::arg("rel_tol") = 1e-3);
    m.def(
        "scaling_identity_check",
        [](double t, cplx u, double E, double alpha, double beta) {
            return scaling_identity_check(t, u, Energy(E), alpha, beta);
        },
        py::arg("t"), py::arg("u"), py::arg("E"), py::arg("alpha") = 0.5,
        py::arg("beta") = 0.0);

    // spectral solver
    m.def(
        "compute_w",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v, double Lx,
           double Ly) { return from_cfield(compute_w(to_field(v, Lx, Ly))); },
        py::arg("v"), py::arg("Lx"), py::arg("Ly"));
    m.def(
        "nv_rhs",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v, double Lx,
           double Ly, double E) {
            NVState s(grid_of(v, Lx, Ly), to_field(v, Lx, Ly), Energy(E));
            return from_field(nv_rhs(s));
        },
        py::arg("v"), py::arg("Lx"), py::arg("Ly"), py::arg("E") = -1.0);
    m.def(
        "evolve",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v, double Lx,
           double Ly, double E, double T, double dt, bool linear_only) {
            NVState s(grid_of(v, Lx, Ly), to_field(v, Lx, Ly), Energy(E));
            StepControl ctl;
            ctl.dt = dt;
            ctl.linear_only = linear_only;
            return from_field(evolve(s, T, ctl).v);
        },
        py::arg("v"), py::arg("Lx"), py::arg("Ly"), py::arg("E"), py::arg("T"),
        py::arg("dt") = 2e-3, py::arg("linear_only") = false);
    m.def(
        "invariants",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v, double Lx,
           double Ly, double E) {
            NVState s(grid_of(v, Lx, Ly), to_field(v, Lx, Ly), Energy(E));
            const auto inv = invariants(s);
            py::dict d;
            d["l1"] = inv.l1_integral;
            d["mass"] = inv.mass;
            d["energy"] = inv.energy;
            d["energy_conj_paired"] = inv.energy_conj_paired;
            return d;
        },
        py::arg("v"), py::arg("Lx"), py::arg("Ly"), py::arg("E") = -1.0);
    m.def(
        "apply_propagator",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v, double Lx,
           double Ly, double E, double t) {
            return from_field(apply_propagator(to_field(v, Lx, Ly), Energy(E), t));
        },
        py::arg("v"), py::arg("Lx"), py::arg("Ly"), py::arg("E"), py::arg("t"));
    m.def(
        "preset_gaussian",
        [](int nx, int ny, double Lx, double Ly, double amp, double sigma) {
            GridSpec g;
            g.nx = nx;
            g.ny = ny;
            g.Lx = Lx;
            g.Ly = Ly;
            return from_field(preset_gaussian(g, amp, sigma));
        },
        py::arg("nx"), py::arg("ny"), py::arg("Lx"), py::arg("Ly"), py::arg("amp") = 1.0,
        py::arg("sigma") = 1.5);
    m.def(
        "kdv_soliton",
        [](int nx, int ny, double Lx, double Ly, double c, double E, double t) {
            GridSpec g;
            g.nx = nx;
            g.ny = ny;
            g.Lx = Lx;
            g.Ly = Ly;
            return from_field(kdv_soliton_exact(g, c, Energy(E), t));
        },
        py::arg("nx"), py::arg("ny"), py::arg("Lx"), py::arg("Ly"), py::arg("c") = 1.0,
        py::arg("E") = -1.0, py::arg("t") = 0.0);
    m.def("blowup_residual",
          [](double a, double c, double d, int n, double box, double window) {
              return blowup_residual({a, c, d}, n, box, window);
          },
          py::arg("a") = 1.0, py::arg("c") = 1.0, py::arg("d") = 1.0, py::arg("n") = 1024,
          py::arg("box") = 20.0, py::arg("window") = 5.0);

    // shell toolbox
    m.def("phi_tilde", &CutoffSpec::phi_tilde);
    m.def("phi_shell", &CutoffSpec::phi_shell);

    // high-energy limit
    m.def(
        "kp_evolve_limit",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v, double Lx,
           double Ly, double T, double dt, const std::string& sign) {
            KpStepControl ctl;
            ctl.dt = dt;
            return from_field(evolve_limit(to_field(v, Lx, Ly), T, ctl,
                                           sign == "plus" ? KpSign::PLUS : KpSign::MINUS));
        },
        py::arg("v"), py::arg("Lx"), py::arg("Ly"), py::arg("T"), py::arg("dt") = 2e-3,
        py::arg("sign") = "minus");
    m.def(
        "kp_residual_evolution",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v, double Lx,
           double Ly, double kappa, const std::string& sign) {
            return residual_evolution(to_field(v, Lx, Ly), kappa,
                                      sign == "plus" ? KpSign::PLUS : KpSign::MINUS);
        },
        py::arg("v"), py::arg("Lx"), py::arg("Ly"), py::arg("kappa"),
        py::arg("sign") = "minus");

    // acceptance battery
    m.def(
        "run_acceptance",
        [](const std::vector<int>& only, bool verbose) {
            const auto rep = run_acceptance(only, verbose);
            py::list out;
            for (const auto& r : rep.results) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["details"] = r.details;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("only") = std::vector<int>{}, py::arg("verbose") = false);
}
