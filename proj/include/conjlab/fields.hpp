#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conjlab/linalg.hpp"
#include "conjlab/modulus.hpp"

namespace conjlab {

using ParamMap = std::map<std::string, double>;

/// Time-dependent coefficient A(t). Kinds form a closed catalog: a constant
/// matrix, a piecewise-linear diagonal table (clamped outside its range), or a
/// named builtin with scalar parameters. The uniform bound M is grid-sampled
/// over a declared window and reported with the step used.
class MatrixField {
public:
    static MatrixField constant(Mat a);
    /// entries[i] holds the samples of the i-th diagonal entry.
    static MatrixField diagonal_table(std::vector<double> times,
                                      std::vector<std::vector<double>> entries);
    /// Builtins: "sin_diag" {amp} -> diag(-1 - amp sin t, 1);
    ///           "shear" {amp, omega} -> [[-1, amp cos(omega t)], [0, 1]].
    static MatrixField builtin(const std::string& name, const ParamMap& params);

    int dim() const;
    Mat at(double t) const;
    bool is_constant() const;
    bool is_diagonal() const;
    /// Exact integral of diagonal entry i over [s, t] when the kind admits one
    /// (diagonal table, sin_diag); nullopt otherwise.
    std::optional<double> diagonal_integral(int i, double s, double t) const;

    struct BoundM {
        double value = 0.0;
        double grid_step = 0.0;
    };
    BoundM bound_M(Interval window, double grid_step = 1e-2) const;

    const std::string& kind() const;

private:
    struct Impl;
    explicit MatrixField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Perturbation f(t, x) with its bound modulus mu and Lipschitz modulus r.
/// local_radius < inf marks a field defined only on that closed ball.
class NonlinearField {
public:
    static NonlinearField zero(int dim);
    /// Builtins:
    ///   "planar_sine" {sigma}            sigma (sin x2, sin x1), mu = sigma*sqrt(2), r = sigma
    ///   "unit_ball_local" {epsilon}      the piecewise +-eps x / +-eps x^3 field on [-1,1]^2
    ///   "scalar_time" {epsilon, delta, box} 1-d blend field of x' = -x + f(t,x)
    ///   "sawtooth_sine" {c}              mu(t) sin(x), mu the sawtooth modulus
    static NonlinearField builtin(const std::string& name, const ParamMap& params);
    static NonlinearField custom(int dim, std::function<Vec(double, const Vec&)> eval,
                                 ScalarModulus mu, ScalarModulus r,
                                 std::string kind = "custom",
                                 double local_radius = std::numeric_limits<double>::infinity());

    int dim() const;
    Vec at(double t, const Vec& x) const;
    const ScalarModulus& mu() const;
    const ScalarModulus& r() const;
    double local_radius() const;
    bool is_zero() const;
    const std::string& kind() const;

private:
    struct Impl;
    explicit NonlinearField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Freeze a ball-local field along rays: F(t, x) inside the ball of the given
/// radius, F(t, radius * x/||x||) outside. Doubles the Lipschitz modulus.
NonlinearField radial_extend(const NonlinearField& inner, double radius);

}  // namespace conjlab
