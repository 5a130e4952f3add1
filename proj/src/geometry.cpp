#include "hn/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hn/symfun.hpp"

namespace hn {

namespace {

constexpr double kPi = std::numbers::pi;

// Nodes/weights for Gauss-Legendre on [0,1], computed once per order by
// Newton iteration on Legendre polynomials.
struct GaussRule {
  std::vector<double> x, w;
};

GaussRule gauss_legendre_01(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // initial guess (Chebyshev-like) on [-1,1]
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    rule.x[i] = 0.5 * (1.0 + t);
    rule.w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
  return rule;
}

}  // namespace

InequalityReport InequalityReport::make(std::string name, double lhs, double rhs,
                                        double tol_eq) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
  r.relative_slack = r.slack / scale;
  r.equality = std::fabs(r.relative_slack) < tol_eq;
  return r;
}

ConvexBody2D ConvexBody2D::fourier(double c0, const std::map<int, double>& am,
                                   const std::map<int, double>& bm) {
  ConvexBody2D b;
  auto a = am;
  auto bb = bm;
  b.rho_ = [c0, a, bb](double t) {
    double r = c0;
    for (auto& [m, v] : a) r += v * std::cos(m * t);
    for (auto& [m, v] : bb) r += v * std::sin(m * t);
    return r;
  };
  b.drho_ = [a, bb](double t) {
    double r = 0;
    for (auto& [m, v] : a) r -= v * m * std::sin(m * t);
    for (auto& [m, v] : bb) r += v * m * std::cos(m * t);
    return r;
  };
  b.ddrho_ = [a, bb](double t) {
    double r = 0;
    for (auto& [m, v] : a) r -= v * m * m * std::cos(m * t);
    for (auto& [m, v] : bb) r -= v * m * m * std::sin(m * t);
    return r;
  };
  bool pure = true;
  for (auto& [m, v] : am)
    if (v != 0.0) pure = false;
  for (auto& [m, v] : bm)
    if (v != 0.0) pure = false;
  b.is_circle_ = pure;
  b.circle_radius_ = pure ? c0 : 0.0;
  std::ostringstream os;
  os << "fourier:c0=" << c0;
  for (auto& [m, v] : am) os << ",a" << m << "=" << v;
  for (auto& [m, v] : bm) os << ",b" << m << "=" << v;
  b.description_ = os.str();
  b.validate();
  return b;
}

ConvexBody2D ConvexBody2D::circle(double R) { return fourier(R); }

ConvexBody2D ConvexBody2D::ellipse(double a, double b) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("ellipse: semi-axes must be positive");
  ConvexBody2D body;
  body.rho_ = [a, b](double t) {
    double g = b * b * std::cos(t) * std::cos(t) + a * a * std::sin(t) * std::sin(t);
    return a * b / std::sqrt(g);
  };
  body.drho_ = [a, b](double t) {
    double g = b * b * std::cos(t) * std::cos(t) + a * a * std::sin(t) * std::sin(t);
    double dg = (a * a - b * b) * std::sin(2 * t);
    return -0.5 * a * b * dg * std::pow(g, -1.5);
  };
  body.ddrho_ = [a, b](double t) {
    double g = b * b * std::cos(t) * std::cos(t) + a * a * std::sin(t) * std::sin(t);
    double dg = (a * a - b * b) * std::sin(2 * t);
    double d2g = 2.0 * (a * a - b * b) * std::cos(2 * t);
    return a * b * (0.75 * dg * dg * std::pow(g, -2.5) - 0.5 * d2g * std::pow(g, -1.5));
  };
  body.is_circle_ = (a == b);
  body.circle_radius_ = (a == b) ? a : 0.0;
  std::ostringstream os;
  os << "ellipse:" << a << "," << b;
  body.description_ = os.str();
  body.validate();
  return body;
}

ConvexBody2D ConvexBody2D::perturbed_disk(double delta, int m) {
  return fourier(1.0, {{m, delta}});
}

void ConvexBody2D::validate() {
  const int N = 4096;
  min_rho_ = 1e300;
  min_curvature_ = 1e300;
  double worst_theta = 0.0;
  for (int i = 0; i < N; ++i) {
    double t = 2 * kPi * i / N;
    double r = rho_(t);
    if (r < min_rho_) min_rho_ = r;
    double kap = curvature(t);
    if (kap < min_curvature_) {
      min_curvature_ = kap;
      worst_theta = t;
    }
  }
  if (min_rho_ <= 0) {
    throw std::invalid_argument("ConvexBody2D: radial function not positive (" +
                                description_ + ")");
  }
  // degenerate-but-convex bodies (curvature touching zero) are admitted up to
  // round-off; rho = 1 + 0.1 cos(3t) is the canonical borderline case
  if (min_curvature_ < -1e-9 * (1.0 + 1.0 / min_rho_)) {
    std::ostringstream os;
    os << "ConvexBody2D: not uniformly convex, curvature " << min_curvature_
       << " at theta=" << worst_theta << " (" << description_ << ")";
    throw std::invalid_argument(os.str());
  }
}

Vec2 ConvexBody2D::point(double t) const {
  double r = rho_(t);
  return {r * std::cos(t), r * std::sin(t)};
}

double ConvexBody2D::speed(double t) const {
  double r = rho_(t), dr = drho_(t);
  return std::sqrt(r * r + dr * dr);
}

Vec2 ConvexBody2D::tangent_unit(double t) const {
  double r = rho_(t), dr = drho_(t);
  double c = std::cos(t), s = std::sin(t);
  double sp = speed(t);
  return {(dr * c - r * s) / sp, (dr * s + r * c) / sp};
}

Vec2 ConvexBody2D::normal(double t) const {
  Vec2 tu = tangent_unit(t);
  return {tu[1], -tu[0]};
}

double ConvexBody2D::curvature(double t) const {
  double r = rho_(t), dr = drho_(t), ddr = ddrho_(t);
  double num = r * r + 2 * dr * dr - r * ddr;
  double den = std::pow(r * r + dr * dr, 1.5);
  return num / den;
}

ConvexBody2D ConvexBody2D::scaled(double t) const {
  if (t <= 0) throw std::invalid_argument("scaled: factor must be positive");
  ConvexBody2D b = *this;
  auto rho = rho_;
  auto drho = drho_;
  auto ddrho = ddrho_;
  b.rho_ = [rho, t](double th) { return t * rho(th); };
  b.drho_ = [drho, t](double th) { return t * drho(th); };
  b.ddrho_ = [ddrho, t](double th) { return t * ddrho(th); };
  b.circle_radius_ *= t;
  b.min_rho_ *= t;
  b.min_curvature_ /= t;
  b.description_ += " (scaled)";
  return b;
}

std::vector<BoundaryFrame> ConvexBody2D::boundary_frames(int M) const {
  if (M < 16) throw std::invalid_argument("boundary_frames: need M >= 16");
  std::vector<BoundaryFrame> frames(M);
  const double h = 2 * kPi / M;
  for (int j = 0; j < M; ++j) {
    double t = j * h;
    BoundaryFrame& f = frames[j];
    f.theta = t;
    f.point = point(t);
    f.nu = normal(t);
    f.tangent = tangent_unit(t);
    f.kappa = curvature(t);
    f.ds_weight = speed(t) * h;
  }
  return frames;
}

double ConvexBody2D::volume(int M) const {
  double acc = 0;
  const double h = 2 * kPi / M;
  for (int j = 0; j < M; ++j) {
    double r = rho_(j * h);
    acc += 0.5 * r * r * h;
  }
  return acc;
}

double ConvexBody2D::area(int M) const {
  double acc = 0;
  const double h = 2 * kPi / M;
  for (int j = 0; j < M; ++j) acc += speed(j * h) * h;
  return acc;
}

double ConvexBody2D::curvature_integral(int k, int M) const {
  if (k < 0 || k >= 2) throw std::domain_error("curvature_integral: 2D supports k in {0,1}");
  if (k == 0) return area(M);
  double acc = 0;
  const double h = 2 * kPi / M;
  for (int j = 0; j < M; ++j) acc += curvature(j * h) * speed(j * h) * h;
  return acc;
}

double ConvexBody2D::integrate_interior(const std::function<double(double, double)>& g,
                                        int n_radial, int M) const {
  GaussRule rule = gauss_legendre_01(n_radial);
  double acc = 0;
  const double h = 2 * kPi / M;
  for (int j = 0; j < M; ++j) {
    double t = j * h;
    double r = rho_(t), c = std::cos(t), s = std::sin(t);
    double col = 0;
    for (int q = 0; q < n_radial; ++q) {
      double sfrac = rule.x[q];
      col += rule.w[q] * sfrac * g(sfrac * r * c, sfrac * r * s);
    }
    acc += col * r * r * h; // |det J| = s * rho^2
  }
  return acc;
}

double ConvexBody2D::integrate_boundary(
    const std::function<double(const BoundaryFrame&)>& g, int M) const {
  double acc = 0;
  for (const auto& f : boundary_frames(M)) acc += g(f) * f.ds_weight;
  return acc;
}

BallGeometry::BallGeometry(int n_, double R_) : n(n_), R(R_) {
  if (n < 2 || R <= 0) throw std::invalid_argument("BallGeometry: need n >= 2, R > 0");
}

double BallGeometry::unit_ball_volume(int n) {
  return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double BallGeometry::volume() const { return unit_ball_volume(n) * std::pow(R, n); }

double BallGeometry::area() const {
  return n * unit_ball_volume(n) * std::pow(R, n - 1);
}

double BallGeometry::curvature_integral(int k) const {
  if (k < 0 || k >= n) throw std::domain_error("curvature_integral: need 0 <= k <= n-1");
  return binomial(n - 1, k) * std::pow(R, -k) * area();
}

namespace {

InequalityReport chain_from_ratios(const std::vector<std::pair<int, double>>& ratios,
                                   std::string name) {
  // ratios[j] = (V_{n-1-k}(Omega)/V_{n-1-k}(B))^{1/(n-1-k)} indexed by k;
  // the chain asserts the ratio is non-decreasing in k.
  double min_slack = 1e300;
  double lhs = 0, rhs = 0;
  for (size_t j = 1; j < ratios.size(); ++j) {
    double s = ratios[j].second - ratios[j - 1].second;
    if (s < min_slack) {
      min_slack = s;
      lhs = ratios[j].second;
      rhs = ratios[j - 1].second;
    }
  }
  InequalityReport r = InequalityReport::make(std::move(name), lhs, rhs, 1e-10);
  for (auto& [k, v] : ratios) {
    r.details.emplace_back("ratio_k" + std::to_string(k), v);
  }
  r.details.emplace_back("min_pairwise_slack", min_slack);
  return r;
}

}  // namespace

InequalityReport quermassintegral_chain(const ConvexBody2D& body, int M) {
  // n = 2: k = -1 gives sqrt(Vol/pi), k = 0 gives perimeter/(2 pi).
  std::vector<std::pair<int, double>> ratios;
  ratios.emplace_back(-1, std::sqrt(body.volume(M) / kPi));
  ratios.emplace_back(0, body.area(M) / (2 * kPi));
  InequalityReport r = chain_from_ratios(ratios, "quermassintegral-chain");
  r.resolution.emplace_back("boundary_nodes", M);
  return r;
}

InequalityReport quermassintegral_chain(const BallGeometry& ball) {
  const int n = ball.n;
  BallGeometry unit(n, 1.0);
  std::vector<std::pair<int, double>> ratios;
  ratios.emplace_back(-1, std::pow(ball.volume() / unit.volume(), 1.0 / n));
  for (int k = 0; k <= n - 2; ++k) {
    double v = ball.curvature_integral(k) / unit.curvature_integral(k);
    ratios.emplace_back(k, std::pow(v, 1.0 / (n - 1 - k)));
  }
  return chain_from_ratios(ratios, "quermassintegral-chain");
}

}  // namespace hn
