#ifndef HN_GEOMETRY_HPP
#define HN_GEOMETRY_HPP

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hn/report.hpp"

// Uniformly convex planar bodies given by a radial function rho(theta),
// boundary frames (normal, curvature, arclength weights), quadrature, and
// closed forms for balls in any dimension.

namespace hn {

using Vec2 = std::array<double, 2>;

struct BoundaryFrame {
  double theta;
  Vec2 point;
  Vec2 nu;          // outward unit normal
  Vec2 tangent;     // unit tangent (counterclockwise)
  double kappa;     // boundary curvature (2D second fundamental form)
  double ds_weight; // arclength quadrature weight
};

/// Star-shaped (w.r.t. the origin) uniformly convex planar body defined by an
/// analytic radial function. Immutable after construction.
class ConvexBody2D {
 public:
  /// Finite cosine/sine series rho = c0 + sum a_m cos(m t) + b_m sin(m t).
  /// Keys of `am`/`bm` are the mode numbers m >= 1.
  static ConvexBody2D fourier(double c0, const std::map<int, double>& am = {},
                              const std::map<int, double>& bm = {});
  static ConvexBody2D circle(double R);
  /// Ellipse with semi-axes a, b via its exact radial function.
  static ConvexBody2D ellipse(double a, double b);
  /// Perturbed disk rho = 1 + delta*cos(m theta).
  static ConvexBody2D perturbed_disk(double delta, int m);

  double rho(double theta) const { return rho_(theta); }
  double drho(double theta) const { return drho_(theta); }
  double ddrho(double theta) const { return ddrho_(theta); }

  Vec2 point(double theta) const;
  Vec2 normal(double theta) const;
  Vec2 tangent_unit(double theta) const;
  double curvature(double theta) const;
  /// |r'(theta)| = sqrt(rho^2 + rho'^2), the arclength density.
  double speed(double theta) const;

  double min_curvature() const { return min_curvature_; }
  double min_rho() const { return min_rho_; }
  const std::string& description() const { return description_; }
  /// True when the radial series is a pure constant (circle family).
  bool is_circle() const { return is_circle_; }
  double circle_radius() const { return circle_radius_; }

  ConvexBody2D scaled(double t) const;

  std::vector<BoundaryFrame> boundary_frames(int M) const;

  /// Enclosed area via (1/2) integral of rho^2 dtheta.
  double volume(int M = 512) const;
  /// Perimeter.
  double area(int M = 512) const;
  /// integral over the boundary of sigma_k(h) dmu; in 2D only k in {0,1}.
  double curvature_integral(int k, int M = 512) const;

  /// Quadrature of an interior integrand g(x,y): Gauss-Legendre in the radial
  /// fraction, trapezoid in theta.
  double integrate_interior(const std::function<double(double, double)>& g,
                            int n_radial = 48, int M = 512) const;
  double integrate_boundary(const std::function<double(const BoundaryFrame&)>& g,
                            int M = 512) const;

 private:
  ConvexBody2D() = default;
  void validate();

  std::function<double(double)> rho_, drho_, ddrho_;
  std::string description_;
  bool is_circle_ = false;
  double circle_radius_ = 0.0;
  double min_curvature_ = 0.0;
  double min_rho_ = 0.0;
};

/// Ball of radius R in dimension n; closed-form volumes, areas and curvature
/// integrals.
struct BallGeometry {
  int n;
  double R;

  BallGeometry(int n_, double R_);

  static double unit_ball_volume(int n);

  double volume() const;
  double area() const;
  /// integral of sigma_k(h) over the sphere: C(n-1,k) R^{-k} * area.
  double curvature_integral(int k) const;
};

/// Normalized quermassintegral ratio chain. Ratios are indexed by k from -1
/// (volume) to n-2; each equals R on a ball and is non-decreasing in k.
InequalityReport quermassintegral_chain(const ConvexBody2D& body, int M = 1024);
InequalityReport quermassintegral_chain(const BallGeometry& ball);

}  // namespace hn

#endif  // HN_GEOMETRY_HPP
