#ifndef HN_GRID_HPP
#define HN_GRID_HPP

#include <vector>

#include "hn/geometry.hpp"
#include "hn/symfun.hpp"

// Logically rectangular (s, theta) grid mapped onto a star-shaped convex body
// by x = s * rho(theta) * (cos theta, sin theta), s in (0, 1]. Radial layers
// sit at s_i = (i - 1/2) h so there is no node at the pole; through-origin
// stencils close ring 1 by interpolating along the opposite ray. Boundary
// nodes (s = 1) coincide with the body's boundary frames.

namespace hn {

/// Sparse linear functional over nodal values.
using Stencil = std::vector<std::pair<int, double>>;

double apply_stencil(const Stencil& st, const std::vector<double>& u);

class MappedGrid {
 public:
  MappedGrid(const ConvexBody2D& body, int n_s, int n_theta);

  const ConvexBody2D& body() const { return body_; }
  int n_s() const { return n_s_; }
  int n_theta() const { return n_theta_; }
  int num_nodes() const { return n_s_ * n_theta_; }
  /// i in 1..n_s (ring, 1 = innermost, n_s = boundary), j in 0..n_theta-1.
  int index(int i, int j) const { return (i - 1) * n_theta_ + j; }
  int ring(int idx) const { return idx / n_theta_ + 1; }
  int column(int idx) const { return idx % n_theta_; }
  bool is_boundary(int idx) const { return ring(idx) == n_s_; }

  Vec2 node(int idx) const { return nodes_[idx]; }
  double s_of_ring(int i) const { return (i - 0.5) * h_s_; }
  double theta_of_column(int j) const { return j * h_theta_; }
  double h_s() const { return h_s_; }
  double h_theta() const { return h_theta_; }

  /// Volume quadrature weight of a node (cell measure in physical space).
  double weight(int idx) const { return weights_[idx]; }

  const Stencil& grad_x(int idx) const { return grad_x_[idx]; }
  const Stencil& grad_y(int idx) const { return grad_y_[idx]; }
  const Stencil& hess_xx(int idx) const { return hess_xx_[idx]; }
  const Stencil& hess_xy(int idx) const { return hess_xy_[idx]; }
  const Stencil& hess_yy(int idx) const { return hess_yy_[idx]; }

  /// Boundary frame of column j (only meaningful for boundary nodes).
  const BoundaryFrame& frame(int j) const { return frames_[j]; }

  SymMatrix hessian_at(const std::vector<double>& u, int idx) const;
  Vec2 gradient_at(const std::vector<double>& u, int idx) const;
  /// Outward normal derivative at boundary node (i = n_s, column j).
  double normal_derivative_at(const std::vector<double>& u, int j) const;
  Stencil normal_derivative_stencil(int j) const;

  double integrate_nodal(const std::vector<double>& values) const;
  /// Volume-weighted mean.
  double mean(const std::vector<double>& u) const;
  double domain_volume() const { return total_weight_; }
  /// Shift u in place so its volume-weighted mean is zero.
  void make_mean_zero(std::vector<double>& u) const;

  double sup_gradient(const std::vector<double>& u) const;

 private:
  ConvexBody2D body_;
  int n_s_, n_theta_;
  double h_s_, h_theta_;
  std::vector<Vec2> nodes_;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
  std::vector<BoundaryFrame> frames_;
  std::vector<Stencil> grad_x_, grad_y_, hess_xx_, hess_xy_, hess_yy_;

  void build_stencils();
};

}  // namespace hn

#endif  // HN_GRID_HPP
