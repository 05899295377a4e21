#pragma once

#include <Eigen/Dense>

namespace conjlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double t) const { return t >= lo && t <= hi; }
};

/// Spectral norm. Closed forms for n <= 2, the trigonometric symmetric
/// eigenvalue formula for n = 3, power iteration on A^T A above that.
double op_norm(const Mat& a);

/// Matrix exponential by scaling and squaring (diagonal fast path).
Mat expm(const Mat& a);

/// max_i ||P^2 - P|| entrywise residual.
double projection_residual(const Mat& p);

/// rank via column-pivoted LU with a fixed relative threshold.
int matrix_rank(const Mat& a, double rel_tol = 1e-10);

}  // namespace conjlab
