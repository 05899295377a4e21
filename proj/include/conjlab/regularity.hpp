#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conjlab/linalg.hpp"

namespace conjlab {

/// p = 1 + 2 K^2 theta_tilde / (1 - K theta_tilde). Throws HypothesisViolated
/// when K theta_tilde >= 1.
double theoretical_p(double K, double theta_tilde);

struct TheoreticalConstants {
    std::optional<double> lambda;  // set when the lambda condition is feasible
    double beta = 0.0;
    double q = 0.0;  // 1 + lambda when lambda is set
    double tau_coefficient = 0.0;  // 1 / (M + C_mu)
    bool lambda_feasible = false;
    bool beta_feasible = false;
    bool third_feasible = false;
    bool all_feasible() const { return lambda_feasible && beta_feasible && third_feasible; }
    std::string note;
};

/// The three smallness conditions behind the Hoelder exponent: lambda is set
/// 1% above its lower bound, beta at 0.9x the feasible cap (the alpha/(M+C_mu)
/// ceiling and the bisection root of the third condition at equality).
/// Infeasibility (notably alpha >= M, or C_r = 0) is flagged, never patched.
TheoreticalConstants theoretical_beta_lambda(double K, double alpha, double M,
                                             double C_mu, double C_r);

/// ln(1/d) / (M + C_mu) for 0 < d < 1.
double tau_scale(double M, double C_mu, double d);

using PointMap = std::function<Vec(const Vec&)>;

/// Produces the k-th sample pair at the given separation scale.
using PairSampler = std::function<std::pair<Vec, Vec>(double scale, std::uint64_t k)>;

struct RegularityEstimate {
    double exponent = 0.0;      // fitted (Hoelder) or fixed at 1 (Lipschitz)
    double constant = 0.0;      // max ratio (Lipschitz) or exp(intercept) (Hoelder)
    double log_constant = 0.0;
    double fit_residual = 0.0;  // rms residual of the log-log fit
    bool flat_map = false;      // all increments vanished; exponent undefined
    std::vector<std::pair<double, double>> per_scale;  // (scale, max increment)
    Interval scale_range{0.0, 0.0};
};

/// Max of ||F(x) - F(xbar)|| / d over pairs at each scale d; the constant is
/// the overall max ratio and the exponent is fixed at 1.
RegularityEstimate lipschitz_estimate(const PointMap& map, const PairSampler& sampler,
                                      const std::vector<double>& scales,
                                      int pairs_per_scale);

/// Least-squares slope of log(max increment) against log(scale); requires at
/// least 4 scales spanning two decades. Fits the upper envelope, not means.
RegularityEstimate holder_estimate(const PointMap& map, const PairSampler& sampler,
                                   const std::vector<double>& scales,
                                   int pairs_per_scale);

/// Pairs inside an axis box: random base point, separation mixing random
/// directions with axis-aligned ones and origin-anchored pairs.
PairSampler box_pair_sampler(Vec lo, Vec hi, std::uint64_t seed);

/// Pairs (0, d u) with u a mix of coordinate directions (both signs) and
/// random unit vectors.
PairSampler origin_anchored_sampler(int dim, std::uint64_t seed);

}  // namespace conjlab
