#pragma once

#include <vector>

#include "conjlab/dichotomy.hpp"

namespace conjlab {

/// Uniform grid over a window [a, b] with four Gauss-Legendre nodes per cell
/// and precomputed kernel matrices, so the two-sided Green integral
///
///   int_a^u U(u,s)P(s) phi(s) ds  -  int_u^b U(u,s)(I-P(s)) phi(s) ds
///
/// is evaluated at every grid node in O(cells) per sweep via the semigroup
/// recursion. Projections are re-applied at each step to keep the stable and
/// unstable accumulators in their invariant families.
class GreenWindow {
public:
    GreenWindow(const GreenKernel& kernel, double a, double b, int cells);
    /// Explicit (possibly graded) node array; strictly increasing, >= 5 nodes.
    GreenWindow(const GreenKernel& kernel, std::vector<double> nodes);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& gauss_times() const { return gauss_t_; }
    int cells() const { return cells_; }
    int dim() const { return dim_; }
    double a() const { return nodes_.front(); }
    double b() const { return nodes_.back(); }

    /// phi sampled at gauss_times() -> Green integral at every node.
    std::vector<Vec> sweep(const std::vector<Vec>& phi_gauss) const;

    /// Node table -> values at the Gauss nodes (4-point Lagrange stencils).
    std::vector<Vec> interpolate_to_gauss(const std::vector<Vec>& node_vals) const;

    /// U(u_i, a) v along the grid, re-projected onto the stable family.
    std::vector<Vec> propagate_stable_from_left(const Vec& v) const;
    /// U(u_i, b) v along the grid, re-projected onto the unstable family.
    std::vector<Vec> propagate_unstable_from_right(const Vec& v) const;

    const Mat& node_projection(int i) const { return p_node_[static_cast<size_t>(i)]; }

private:
    int cells_ = 0;
    int dim_ = 0;
    std::vector<double> nodes_;
    std::vector<double> gauss_t_;
    std::vector<Mat> e_fwd_;        // U(u_{i+1}, u_i)
    std::vector<Mat> e_bwd_;        // U(u_i, u_{i+1})
    std::vector<Mat> kp_;           // 4 per cell: U(u_{i+1}, s_ij) P(s_ij) w_ij
    std::vector<Mat> kq_;           // 4 per cell: U(u_i, s_ij) (I-P(s_ij)) w_ij
    std::vector<Mat> p_node_;
    std::vector<double> lagrange_;  // 4 coefficients per gauss node
    std::vector<int> stencil_;      // stencil start per cell
};

}  // namespace conjlab
