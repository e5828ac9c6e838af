#pragma once

#include <functional>
#include <vector>

#include "nvlab/common.hpp"

namespace nv {

/// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

const GaussRule& gauss_legendre(int order);

struct Panel {
    double a = 0.0;
    double b = 0.0;
};

struct PanelOptions {
    double cycles_per_panel = 7.0;  // resolved oscillation per GL-32 panel
    int order = 32;
    double max_width_fraction = 0.125;  // no panel wider than this fraction of the span
    double edge_start = 1e-7;           // width of the first panel at a graded edge
    double edge_growth = 1.6;
};

/// Split [lo, hi] into panels sized against a local oscillation frequency
/// (radians per unit length). Edges listed in `graded` get geometrically
/// growing panels to resolve algebraic endpoint singularities.
std::vector<Panel> build_panels(double lo, double hi,
                                const std::function<double(double)>& freq,
                                const std::vector<double>& graded,
                                const PanelOptions& opt);

/// Number of threads to use for embarrassingly parallel loops; reads
/// NVLAB_THREADS, defaults to hardware concurrency.
int worker_threads();

/// Deterministic parallel map-reduce over panel indices: results are
/// accumulated in index order regardless of scheduling.
void parallel_for_ordered(int n, const std::function<void(int)>& work);

}  // namespace nv
