#include "conjlab/regularity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "conjlab/errors.hpp"
#include "conjlab/rng.hpp"

namespace conjlab {

double theoretical_p(double K, double theta_tilde) {
    if (!(K > 0.0) || theta_tilde < 0.0) throw InvalidArgument("need K > 0, theta >= 0");
    if (!(K * theta_tilde < 1.0))
        throw HypothesisViolated("K theta_tilde >= 1: Lipschitz constant undefined");
    return 1.0 + 2.0 * K * K * theta_tilde / (1.0 - K * theta_tilde);
}

TheoreticalConstants theoretical_beta_lambda(double K, double alpha, double M,
                                             double C_mu, double C_r) {
    if (!(M > 0.0)) throw InvalidArgument("M must be positive");
    if (!(K > 0.0) || !(alpha > 0.0) || C_mu < 0.0 || C_r < 0.0)
        throw InvalidArgument("bad constants");
    TheoreticalConstants out;
    out.tau_coefficient = 1.0 / (M + C_mu);

    // lambda > 3/(1-e^{-alpha}) + 3/(2(1-e^{alpha-M})); needs alpha < M
    if (alpha < M) {
        const double lo =
            3.0 / (1.0 - std::exp(-alpha)) + 3.0 / (2.0 * (1.0 - std::exp(alpha - M)));
        out.lambda = 1.01 * lo;
        out.q = 1.0 + *out.lambda;
        out.lambda_feasible = true;
    } else {
        out.note += "lambda condition infeasible: 1 - e^{alpha-M} <= 0; ";
    }

    const double cap = alpha / (M + C_mu);
    auto third = [&](double beta) {
        return 2.0 * K * C_r / (1.0 - std::exp(-(alpha - M * beta)));
    };
    double beta_star = alpha / M;  // no constraint from the third condition
    if (C_r > 0.0) {
        if (third(0.0) >= 1.0 / 3.0) {
            out.note += "third condition infeasible even at beta = 0; ";
            out.beta = 0.0;
            return out;
        }
        // bisection for third(beta) = 1/3 on (0, alpha/M); third is increasing
        double lo = 0.0, hi = alpha / M * (1.0 - 1e-12);
        if (third(hi) < 1.0 / 3.0) {
            beta_star = hi;
        } else {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (third(mid) < 1.0 / 3.0 ? lo : hi) = mid;
            }
            beta_star = lo;
        }
        out.third_feasible = true;
    } else {
        out.note += "C_r = 0: the third condition requires strict positivity; ";
    }

    out.beta = 0.9 * std::min(cap, beta_star);
    out.beta_feasible = out.beta > 0.0 && out.beta < 1.0;
    if (!(out.beta < 1.0)) {
        out.beta = std::min(out.beta, 0.999);
        out.note += "beta clamped below 1; ";
    }
    return out;
}

double tau_scale(double M, double C_mu, double d) {
    if (!(d > 0.0 && d < 1.0)) throw InvalidArgument("distance must lie in (0,1)");
    return std::log(1.0 / d) / (M + C_mu);
}

namespace {

std::vector<std::pair<double, double>> scan_scales(const PointMap& map,
                                                   const PairSampler& sampler,
                                                   const std::vector<double>& scales,
                                                   int pairs_per_scale) {
    if (scales.empty()) throw InvalidArgument("need at least one scale");
    if (!std::is_sorted(scales.begin(), scales.end()))
        throw InvalidArgument("scales must be sorted");
    for (double d : scales)
        if (!(d > 0.0)) throw InvalidArgument("scales must be positive");
    std::vector<std::pair<double, double>> per_scale;
    per_scale.reserve(scales.size());
    for (double d : scales) {
        double worst = 0.0;
        for (int k = 0; k < pairs_per_scale; ++k) {
            const auto [x, xbar] = sampler(d, static_cast<std::uint64_t>(k));
            worst = std::max(worst, (map(x) - map(xbar)).norm());
        }
        per_scale.emplace_back(d, worst);
    }
    return per_scale;
}

}  // namespace

RegularityEstimate lipschitz_estimate(const PointMap& map, const PairSampler& sampler,
                                      const std::vector<double>& scales,
                                      int pairs_per_scale) {
    RegularityEstimate est;
    est.per_scale = scan_scales(map, sampler, scales, pairs_per_scale);
    est.exponent = 1.0;
    est.scale_range = {scales.front(), scales.back()};
    for (const auto& [d, inc] : est.per_scale)
        est.constant = std::max(est.constant, inc / d);
    est.log_constant = est.constant > 0.0 ? std::log(est.constant) : 0.0;
    est.flat_map = est.constant == 0.0;
    return est;
}

RegularityEstimate holder_estimate(const PointMap& map, const PairSampler& sampler,
                                   const std::vector<double>& scales,
                                   int pairs_per_scale) {
    if (scales.size() < 4) throw InvalidArgument("need >= 4 scales");
    if (!(scales.back() >= 100.0 * scales.front()))
        throw InvalidArgument("scales must span at least two decades");
    RegularityEstimate est;
    est.per_scale = scan_scales(map, sampler, scales, pairs_per_scale);
    est.scale_range = {scales.front(), scales.back()};

    std::vector<double> lx, ly;
    for (const auto& [d, inc] : est.per_scale) {
        if (inc <= 0.0) continue;
        lx.push_back(std::log(d));
        ly.push_back(std::log(inc));
    }
    if (lx.size() < 2) {
        est.flat_map = true;
        return est;
    }
    const size_t m = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = m * sxx - sx * sx;
    est.exponent = (m * sxy - sx * sy) / denom;
    est.log_constant = (sy - est.exponent * sx) / m;
    est.constant = std::exp(est.log_constant);
    double ss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double r = ly[i] - (est.log_constant + est.exponent * lx[i]);
        ss += r * r;
    }
    est.fit_residual = std::sqrt(ss / m);
    return est;
}

PairSampler box_pair_sampler(Vec lo, Vec hi, std::uint64_t seed) {
    if (lo.size() != hi.size()) throw InvalidArgument("box bounds size mismatch");
    const int dim = static_cast<int>(lo.size());
    return [lo, hi, dim, seed](double scale, std::uint64_t k) {
        Rng rng = Rng::fork(seed ^ std::bit_cast<std::uint64_t>(scale), k);
        for (int attempt = 0; attempt < 128; ++attempt) {
            Vec dir;
            const std::uint64_t mode = k % 4;
            if (mode == 0) {
                dir = Vec::Zero(dim);
                dir[static_cast<int>((k / 4) % dim)] = (k % 8 < 4) ? 1.0 : -1.0;
            } else {
                dir = rng.unit_vector(dim);
            }
            Vec base(dim);
            if (mode == 1) {
                base = Vec::Zero(dim);  // origin-anchored
            } else {
                for (int i = 0; i < dim; ++i) base[i] = rng.uniform(lo[i], hi[i]);
            }
            Vec other = base + scale * dir;
            bool inside = true;
            for (int i = 0; i < dim; ++i)
                inside = inside && other[i] >= lo[i] && other[i] <= hi[i] &&
                         base[i] >= lo[i] && base[i] <= hi[i];
            if (inside) return std::make_pair(base, other);
        }
        // fall back to an axis pair from the lower corner
        Vec base = lo, other = lo;
        other[0] += scale;
        return std::make_pair(base, other);
    };
}

PairSampler origin_anchored_sampler(int dim, std::uint64_t seed) {
    return [dim, seed](double scale, std::uint64_t k) {
        const Vec zero = Vec::Zero(dim);
        const std::uint64_t axis_modes = 2 * static_cast<std::uint64_t>(dim);
        if (k < axis_modes) {
            Vec other = zero;
            other[static_cast<int>(k / 2)] = (k % 2 == 0 ? 1.0 : -1.0) * scale;
            return std::make_pair(zero, other);
        }
        Rng rng = Rng::fork(seed ^ std::bit_cast<std::uint64_t>(scale), k);
        Vec other = scale * rng.unit_vector(dim);
        return std::make_pair(zero, Vec(other));
    };
}

}  // namespace conjlab
