#include "conjlab/linalg.hpp"

#include <cmath>

namespace conjlab {

namespace {

// Largest eigenvalue of a symmetric PSD 3x3 via the trigonometric method.
double sym3_max_eig(const Mat& b) {
    const double p1 = b(0, 1) * b(0, 1) + b(0, 2) * b(0, 2) + b(1, 2) * b(1, 2);
    const double q = b.trace() / 3.0;
    if (p1 == 0.0) return std::max({b(0, 0), b(1, 1), b(2, 2)});
    const double p2 = (b(0, 0) - q) * (b(0, 0) - q) + (b(1, 1) - q) * (b(1, 1) - q) +
                      (b(2, 2) - q) * (b(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat m = (b - q * Mat::Identity(3, 3)) / p;
    double r = m.determinant() / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi);
}

double power_max_eig(const Mat& b) {
    Vec v = Vec::Ones(b.rows());
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 500; ++it) {
        Vec w = b * v;
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        w /= nw;
        const double next = w.dot(b * w);
        if (std::abs(next - lambda) <= 1e-14 * std::max(1.0, std::abs(next)) && it > 3) {
            return next;
        }
        lambda = next;
        v = w;
    }
    return lambda;
}

}  // namespace

double op_norm(const Mat& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 1) return std::abs(a(0, 0));
    if (n == 2) {
        // singular values of [[a,b],[c,d]] from the Frobenius norm and determinant
        const double s1 = a.squaredNorm();
        const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        const double disc = std::sqrt(std::max(0.0, s1 * s1 - 4.0 * det * det));
        return std::sqrt(0.5 * (s1 + disc));
    }
    Mat b = a.transpose() * a;
    const double lam = (n == 3) ? sym3_max_eig(b) : power_max_eig(b);
    return std::sqrt(std::max(0.0, lam));
}

Mat expm(const Mat& a) {
    const int n = static_cast<int>(a.rows());
    bool diagonal = true;
    for (int i = 0; i < n && diagonal; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && a(i, j) != 0.0) { diagonal = false; break; }
    if (diagonal) {
        Mat e = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) e(i, i) = std::exp(a(i, i));
        return e;
    }
    // scale so the Taylor series converges fast, then square back
    const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    double scale = 1.0;
    while (nrm * scale > 0.25) { scale *= 0.5; ++s; }
    Mat b = a * scale;
    Mat term = Mat::Identity(n, n);
    Mat sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18 * sum.cwiseAbs().maxCoeff()) break;
    }
    for (int k = 0; k < s; ++k) sum = sum * sum;
    return sum;
}

double projection_residual(const Mat& p) {
    return (p * p - p).cwiseAbs().maxCoeff();
}

int matrix_rank(const Mat& a, double rel_tol) {
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(rel_tol);
    return static_cast<int>(lu.rank());
}

}  // namespace conjlab
