#include "conjlab/green_window.hpp"

#include <algorithm>
#include <cmath>

#include "conjlab/errors.hpp"

namespace conjlab {

namespace {

constexpr double kGx[4] = {-0.8611363115940526, -0.3399810435848563,
                           0.3399810435848563, 0.8611363115940526};
constexpr double kGw[4] = {0.3478548451374538, 0.6521451548625461,
                           0.6521451548625461, 0.3478548451374538};

}  // namespace

GreenWindow::GreenWindow(const GreenKernel& kernel, double a, double b, int cells)
    : GreenWindow(kernel, [&] {
          if (!(b > a) || cells < 4) throw InvalidArgument("bad Green window");
          std::vector<double> nodes(static_cast<size_t>(cells) + 1);
          for (int i = 0; i <= cells; ++i) nodes[i] = a + (b - a) * i / cells;
          nodes.back() = b;
          return nodes;
      }()) {}

GreenWindow::GreenWindow(const GreenKernel& kernel, std::vector<double> nodes)
    : dim_(kernel.dim()), nodes_(std::move(nodes)) {
    if (nodes_.size() < 5 || !std::is_sorted(nodes_.begin(), nodes_.end()))
        throw InvalidArgument("bad Green window nodes");
    cells_ = static_cast<int>(nodes_.size()) - 1;

    const auto& flow = kernel.flow();
    const Mat eye = Mat::Identity(dim_, dim_);

    p_node_.resize(nodes_.size());
    for (size_t i = 0; i < nodes_.size(); ++i) p_node_[i] = kernel.projection(nodes_[i]);

    gauss_t_.resize(4 * static_cast<size_t>(cells_));
    e_fwd_.resize(cells_);
    e_bwd_.resize(cells_);
    kp_.resize(4 * static_cast<size_t>(cells_));
    kq_.resize(4 * static_cast<size_t>(cells_));
    for (int i = 0; i < cells_; ++i) {
        const double lo = nodes_[i], hi = nodes_[i + 1];
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        e_fwd_[i] = flow.U(hi, lo);
        e_bwd_[i] = flow.U(lo, hi);
        for (int j = 0; j < 4; ++j) {
            const double s = mid + half * kGx[j];
            const double w = half * kGw[j];
            gauss_t_[4 * i + j] = s;
            const Mat p = kernel.projection(s);
            kp_[4 * i + j] = flow.U(hi, s) * p * w;
            kq_[4 * i + j] = flow.U(lo, s) * (eye - p) * w;
        }
    }

    // 4-point Lagrange stencils from node values to Gauss nodes
    stencil_.resize(cells_);
    lagrange_.resize(16 * static_cast<size_t>(cells_));
    for (int i = 0; i < cells_; ++i) {
        int s0 = std::clamp(i - 1, 0, cells_ - 3);
        stencil_[i] = s0;
        for (int j = 0; j < 4; ++j) {
            const double x = gauss_t_[4 * i + j];
            for (int m = 0; m < 4; ++m) {
                double lm = 1.0;
                for (int l = 0; l < 4; ++l) {
                    if (l == m) continue;
                    lm *= (x - nodes_[s0 + l]) / (nodes_[s0 + m] - nodes_[s0 + l]);
                }
                lagrange_[16 * i + 4 * j + m] = lm;
            }
        }
    }
}

std::vector<Vec> GreenWindow::interpolate_to_gauss(const std::vector<Vec>& node_vals) const {
    std::vector<Vec> out(gauss_t_.size(), Vec::Zero(dim_));
    for (int i = 0; i < cells_; ++i) {
        const int s0 = stencil_[i];
        for (int j = 0; j < 4; ++j) {
            Vec v = Vec::Zero(dim_);
            for (int m = 0; m < 4; ++m)
                v += lagrange_[16 * i + 4 * j + m] * node_vals[s0 + m];
            out[4 * i + j] = std::move(v);
        }
    }
    return out;
}

std::vector<Vec> GreenWindow::sweep(const std::vector<Vec>& phi_gauss) const {
    const size_t n_nodes = nodes_.size();
    std::vector<Vec> stable(n_nodes, Vec::Zero(dim_));
    std::vector<Vec> unstable(n_nodes, Vec::Zero(dim_));
    for (int i = 0; i < cells_; ++i) {
        Vec acc = e_fwd_[i] * stable[i];
        for (int j = 0; j < 4; ++j) acc += kp_[4 * i + j] * phi_gauss[4 * i + j];
        stable[i + 1] = p_node_[i + 1] * acc;
    }
    for (int i = cells_ - 1; i >= 0; --i) {
        Vec acc = e_bwd_[i] * unstable[i + 1];
        for (int j = 0; j < 4; ++j) acc += kq_[4 * i + j] * phi_gauss[4 * i + j];
        unstable[i] = acc - p_node_[i] * acc;
    }
    std::vector<Vec> out(n_nodes);
    for (size_t i = 0; i < n_nodes; ++i) out[i] = stable[i] - unstable[i];
    return out;
}

std::vector<Vec> GreenWindow::propagate_stable_from_left(const Vec& v) const {
    std::vector<Vec> out(nodes_.size());
    out[0] = p_node_[0] * v;
    for (int i = 0; i < cells_; ++i) out[i + 1] = p_node_[i + 1] * (e_fwd_[i] * out[i]);
    return out;
}

std::vector<Vec> GreenWindow::propagate_unstable_from_right(const Vec& v) const {
    std::vector<Vec> out(nodes_.size());
    Vec tail = v - p_node_[cells_] * v;
    out[cells_] = tail;
    for (int i = cells_ - 1; i >= 0; --i) {
        Vec w = e_bwd_[i] * out[i + 1];
        out[i] = w - p_node_[i] * w;
    }
    return out;
}

}  // namespace conjlab
