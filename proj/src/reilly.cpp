#include "hn/reilly.hpp"

#include <cmath>

namespace hn {

namespace {

constexpr double kTolEqClosedForm = 1e-6;
constexpr double kTolEqGrid = 1e-3;

double sigma2x2(const Eigen::Matrix2d& H, int k) {
  switch (k) {
    case 0: return 1.0;
    case 1: return H.trace();
    case 2: return H.determinant();
    default: throw std::domain_error("sigma2x2: k out of range");
  }
}

Eigen::Matrix2d newton2x2(const Eigen::Matrix2d& H, int k) {
  if (k == 0) return Eigen::Matrix2d::Identity();
  if (k == 1) return H.trace() * Eigen::Matrix2d::Identity() - H;
  throw std::domain_error("newton2x2: k out of range");
}

Eigen::Matrix2d grid_hessian(const MappedGrid& grid, const std::vector<double>& u,
                             int idx) {
  Eigen::Matrix2d H;
  H(0, 0) = apply_stencil(grid.hess_xx(idx), u);
  H(0, 1) = H(1, 0) = apply_stencil(grid.hess_xy(idx), u);
  H(1, 1) = apply_stencil(grid.hess_yy(idx), u);
  return H;
}

// Boundary remainder density at one boundary point. Tangential dimension is
// n - 1 = 1 here, so the mixed Newton tensor with one or more arguments
// vanishes and only T_0 = 1 survives (k = 1).
double third_term_density(int k, double u_t, double u_n, double kappa) {
  double acc = 0;
  for (int i = 0; i <= k - 1; ++i) {
    double tensor;
    if (k - 1 == 0) {
      tensor = 1.0;  // T_0 over the 1-dim tangent space
    } else {
      tensor = 0.0;  // T_{k-1}, k-1 >= 1, of 1x1 matrices is identically zero
    }
    acc += (double(i) + 1.0) / k * tensor * u_t * kappa * u_t *
           std::pow(u_n, k - i - 1);
  }
  return acc;
}

}  // namespace

BoundaryHessianSplit boundary_split_at(const BoundaryFrame& frame,
                                       const Vec2& grad,
                                       const Eigen::Matrix2d& hess) {
  Eigen::Matrix2d R;  // columns: tangent, normal
  R << frame.tangent[0], frame.nu[0], frame.tangent[1], frame.nu[1];
  const Eigen::Matrix2d Hf = R.transpose() * hess * R;
  const double u_t = grad[0] * frame.tangent[0] + grad[1] * frame.tangent[1];
  const double u_n = grad[0] * frame.nu[0] + grad[1] * frame.nu[1];
  Eigen::Matrix2d B;
  B << frame.kappa * u_n, -frame.kappa * u_t, -frame.kappa * u_t, 0.0;
  BoundaryHessianSplit split{frame.theta, SymMatrix(Hf - B), SymMatrix(B)};
  return split;
}

std::vector<BoundaryHessianSplit> boundary_split(const MappedGrid& grid,
                                                 const SolveReport& sol) {
  std::vector<BoundaryHessianSplit> out;
  out.reserve(grid.n_theta());
  for (int j = 0; j < grid.n_theta(); ++j) {
    const int idx = grid.index(grid.n_s(), j);
    out.push_back(boundary_split_at(grid.frame(j), grid.gradient_at(sol.u, idx),
                                    grid_hessian(grid, sol.u, idx)));
  }
  return out;
}

std::vector<BoundaryHessianSplit> boundary_split(const ConvexBody2D& body,
                                                 const AnalyticField2D& u, int M) {
  std::vector<BoundaryHessianSplit> out;
  for (const auto& f : body.boundary_frames(M)) {
    out.push_back(boundary_split_at(f, u.grad(f.point[0], f.point[1]),
                                    u.hess(f.point[0], f.point[1])));
  }
  return out;
}

InequalityReport reilly_identity(const ConvexBody2D& body, const AnalyticField2D& u,
                                 int k, int M, int n_radial) {
  if (k + 1 > 2) throw std::domain_error("reilly_identity: k+1 exceeds dimension");
  const double lhs = (k + 1) * body.integrate_interior(
                                   [&](double x, double y) {
                                     return sigma2x2(u.hess(x, y), k + 1);
                                   },
                                   n_radial, M);
  const double rhs = body.integrate_boundary(
      [&](const BoundaryFrame& fr) {
        const Eigen::Matrix2d T = newton2x2(u.hess(fr.point[0], fr.point[1]), k);
        const Vec2 g = u.grad(fr.point[0], fr.point[1]);
        const Eigen::Vector2d flux = T * Eigen::Vector2d(g[0], g[1]);
        return flux[0] * fr.nu[0] + flux[1] * fr.nu[1];
      },
      M);
  InequalityReport r = InequalityReport::make("reilly-identity", lhs, rhs, kTolEqClosedForm);
  r.resolution.emplace_back("boundary_nodes", M);
  r.resolution.emplace_back("radial_nodes", n_radial);
  return r;
}

InequalityReport reilly_identity(const MappedGrid& grid, const SolveReport& sol,
                                 int k) {
  if (k + 1 > 2) throw std::domain_error("reilly_identity: k+1 exceeds dimension");
  std::vector<double> sig(grid.num_nodes());
  for (int idx = 0; idx < grid.num_nodes(); ++idx) {
    sig[idx] = sigma2x2(grid_hessian(grid, sol.u, idx), k + 1);
  }
  const double lhs = (k + 1) * grid.integrate_nodal(sig);
  double rhs = 0;
  for (int j = 0; j < grid.n_theta(); ++j) {
    const int idx = grid.index(grid.n_s(), j);
    const Eigen::Matrix2d T = newton2x2(grid_hessian(grid, sol.u, idx), k);
    const Vec2 g = grid.gradient_at(sol.u, idx);
    const Eigen::Vector2d flux = T * Eigen::Vector2d(g[0], g[1]);
    const BoundaryFrame& fr = grid.frame(j);
    rhs += (flux[0] * fr.nu[0] + flux[1] * fr.nu[1]) * fr.ds_weight;
  }
  InequalityReport r = InequalityReport::make("reilly-identity", lhs, rhs, kTolEqGrid);
  r.resolution.emplace_back("n_s", grid.n_s());
  r.resolution.emplace_back("n_theta", grid.n_theta());
  return r;
}

double third_term_III(const MappedGrid& grid, const SolveReport& sol, int k) {
  double acc = 0;
  for (int j = 0; j < grid.n_theta(); ++j) {
    const int idx = grid.index(grid.n_s(), j);
    const Vec2 g = grid.gradient_at(sol.u, idx);
    const BoundaryFrame& fr = grid.frame(j);
    const double u_t = g[0] * fr.tangent[0] + g[1] * fr.tangent[1];
    const double u_n = g[0] * fr.nu[0] + g[1] * fr.nu[1];
    acc += third_term_density(k, u_t, u_n, fr.kappa) * fr.ds_weight;
  }
  return acc;
}

double third_term_III(const ConvexBody2D& body, const AnalyticField2D& u, int k,
                      int M) {
  return body.integrate_boundary(
      [&](const BoundaryFrame& fr) {
        const Vec2 g = u.grad(fr.point[0], fr.point[1]);
        const double u_t = g[0] * fr.tangent[0] + g[1] * fr.tangent[1];
        const double u_n = g[0] * fr.nu[0] + g[1] * fr.nu[1];
        return third_term_density(k, u_t, u_n, fr.kappa);
      },
      M);
}

InequalityReport reilly_inequality(const MappedGrid& grid, const SolveReport& sol,
                                   int k, double c) {
  if (!(c > 0)) throw std::invalid_argument("reilly_inequality: need c > 0");
  if (k + 1 > 2) throw std::domain_error("reilly_inequality: k+1 exceeds dimension");
  std::vector<double> sig(grid.num_nodes());
  for (int idx = 0; idx < grid.num_nodes(); ++idx) {
    sig[idx] = sigma2x2(grid_hessian(grid, sol.u, idx), k + 1);
  }
  const double lhs = (k + 1) * grid.integrate_nodal(sig);
  double rhs = 0;
  for (int j = 0; j < grid.n_theta(); ++j) {
    const BoundaryFrame& fr = grid.frame(j);
    const double sk = (k == 0) ? 1.0 : fr.kappa;  // sigma_k(h), 1-dim h
    rhs += sk * std::pow(c, k + 1) * fr.ds_weight;
  }
  InequalityReport r = InequalityReport::make("reilly-inequality", lhs, rhs, kTolEqGrid);
  const double third = third_term_III(grid, sol, k);
  r.details.emplace_back("III", third);
  r.details.emplace_back("ledger_mismatch", lhs - rhs - third);
  r.resolution.emplace_back("n_s", grid.n_s());
  r.resolution.emplace_back("n_theta", grid.n_theta());
  return r;
}

InequalityReport reilly_inequality_ball(const BallGeometry& ball, int k) {
  if (k + 1 > ball.n) throw std::domain_error("reilly_inequality_ball: k+1 exceeds dimension");
  // u = |x|^2/2, c = R: both sides are n C(n-1,k) omega_n R^n.
  const double lhs = (k + 1) * binomial(ball.n, k + 1) * ball.volume();
  const double rhs = ball.curvature_integral(k) * std::pow(ball.R, k + 1);
  InequalityReport r = InequalityReport::make("reilly-inequality", lhs, rhs, kTolEqClosedForm);
  r.details.emplace_back("III", 0.0);
  return r;
}

InequalityReport af_inequality(const ConvexBody2D& body, int k, int M) {
  if (k < 1 || k > 1) throw std::domain_error("af_inequality: 2D body supports k = 1");
  const double area = body.area(M);
  const double vol = body.volume(M);
  const double curv = body.curvature_integral(k, M);
  const double lhs = std::pow(area, k + 1);
  const double rhs = std::pow(2.0, k) / binomial(1, k) * std::pow(vol, k) * curv;
  InequalityReport r = InequalityReport::make("alexandrov-fenchel", lhs, rhs, kTolEqClosedForm);
  r.resolution.emplace_back("boundary_nodes", M);
  return r;
}

InequalityReport af_inequality(const BallGeometry& ball, int k) {
  if (k < 1 || k > ball.n - 1) throw std::domain_error("af_inequality: need 1 <= k <= n-1");
  const double lhs = std::pow(ball.area(), k + 1);
  const double rhs = std::pow(double(ball.n), k) / binomial(ball.n - 1, k) *
                     std::pow(ball.volume(), k) * ball.curvature_integral(k);
  return InequalityReport::make("alexandrov-fenchel", lhs, rhs, kTolEqClosedForm);
}

InequalityReport minkowski_inequality(const ConvexBody2D& body, int M) {
  InequalityReport r = af_inequality(body, 1, M);
  r.name = "minkowski";
  return r;
}

InequalityReport minkowski_inequality(const BallGeometry& ball) {
  InequalityReport r = af_inequality(ball, 1);
  r.name = "minkowski";
  return r;
}

std::pair<InequalityReport, InequalityReport> nm_bridge_checks(
    const MappedGrid& grid, const SolveReport& sol, int k) {
  if (k != 1) throw std::domain_error("nm_bridge_checks: 2D boundary needs k = 1");
  const double c = sol.lambda;
  if (!(c > 0)) throw std::invalid_argument("nm_bridge_checks: missing positive lambda");
  const double n = 2.0;
  double curv = 0, area = 0;
  for (int j = 0; j < grid.n_theta(); ++j) {
    curv += grid.frame(j).kappa * grid.frame(j).ds_weight;
    area += grid.frame(j).ds_weight;
  }
  const double vol = grid.domain_volume();

  InequalityReport first = InequalityReport::make(
      "nm-bridge-first", (k + 1) * binomial(2, k + 1) * vol,
      std::pow(c, k + 1) * curv, kTolEqGrid);

  std::vector<double> integ(grid.num_nodes());
  for (int idx = 0; idx < grid.num_nodes(); ++idx) {
    const double sk = sigma2x2(grid_hessian(grid, sol.u, idx), k);
    integ[idx] = std::pow(std::max(sk, 0.0) / binomial(2, k), 1.0 / k);
  }
  InequalityReport second = InequalityReport::make(
      "nm-bridge-second", c * area / n, grid.integrate_nodal(integ), kTolEqGrid);
  first.resolution.emplace_back("n_theta", grid.n_theta());
  second.resolution.emplace_back("n_s", grid.n_s());
  return {first, second};
}

std::pair<InequalityReport, InequalityReport> nm_bridge_checks_ball(
    const BallGeometry& ball, int k) {
  const double c = ball.R;
  InequalityReport first = InequalityReport::make(
      "nm-bridge-first", (k + 1) * binomial(ball.n, k + 1) * ball.volume(),
      std::pow(c, k + 1) * ball.curvature_integral(k), kTolEqClosedForm);
  InequalityReport second = InequalityReport::make(
      "nm-bridge-second", c * ball.area() / ball.n, ball.volume(), kTolEqClosedForm);
  return {first, second};
}

}  // namespace hn
