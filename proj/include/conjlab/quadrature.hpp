#pragma once

#include <functional>
#include <vector>

#include "conjlab/linalg.hpp"

namespace conjlab {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

struct QuadResultVec {
    Vec value;
    double error_estimate = 0.0;
    long evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (G7,K15) on [a, b]. Worst interval is
/// bisected until the summed error estimate meets max(abs_tol, rel_tol*|I|).
/// Throws QuadratureFailure when the interval budget runs out first.
QuadResult quad_adaptive(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol = 0.0, int max_intervals = 4000);

QuadResultVec quad_adaptive_vec(const std::function<Vec(double)>& f, int dim, double a,
                                double b, double abs_tol, double rel_tol = 0.0,
                                int max_intervals = 4000);

/// Adaptive quadrature with the domain pre-split at the given interior points
/// (integrand kinks); points outside (a, b) are ignored.
QuadResult quad_adaptive_split(const std::function<double(double)>& f, double a, double b,
                               const std::vector<double>& split_points, double abs_tol,
                               double rel_tol = 0.0, int max_intervals = 4000);

}  // namespace conjlab
