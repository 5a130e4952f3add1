#include "hn/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hn {

namespace {

// 2x2 closed forms; the grid is planar so n = 2 throughout the solver.
double sigma2x2(const Eigen::Matrix2d& H, int k) {
  switch (k) {
    case 0: return 1.0;
    case 1: return H(0, 0) + H(1, 1);
    case 2: return H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0);
    default: throw std::domain_error("sigma2x2: k out of range");
  }
}

Eigen::Matrix2d newton2x2(const Eigen::Matrix2d& H, int k) {
  if (k == 0) return Eigen::Matrix2d::Identity();
  if (k == 1) return (H(0, 0) + H(1, 1)) * Eigen::Matrix2d::Identity() - H;
  throw std::domain_error("newton2x2: k out of range");
}

bool admissible2x2(const Eigen::Matrix2d& H, int k, double tol) {
  const double m = 0.5 * (H(0, 0) + H(1, 1));
  const double d = std::hypot(0.5 * (H(0, 0) - H(1, 1)), H(0, 1));
  const double l1 = m - d, l2 = m + d;
  const double s1 = l1 + l2, s2 = l1 * l2;
  if (s1 <= -tol * (1.0 + std::fabs(l1) + std::fabs(l2))) return false;
  if (k >= 2 && s2 <= -tol * (1.0 + std::fabs(l1 * l2))) return false;
  return true;
}

Eigen::Matrix2d hessian2x2(const MappedGrid& grid, const std::vector<double>& u,
                           int idx) {
  Eigen::Matrix2d H;
  H(0, 0) = apply_stencil(grid.hess_xx(idx), u);
  H(0, 1) = H(1, 0) = apply_stencil(grid.hess_xy(idx), u);
  H(1, 1) = apply_stencil(grid.hess_yy(idx), u);
  return H;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double boundary_mean(const MappedGrid& grid, const std::vector<double>& vals_by_column) {
  double num = 0, den = 0;
  for (int j = 0; j < grid.n_theta(); ++j) {
    num += grid.frame(j).ds_weight * vals_by_column[j];
    den += grid.frame(j).ds_weight;
  }
  return num / den;
}

struct AssembledSystem {
  Eigen::SparseMatrix<double> J;
  Eigen::VectorXd rhs;  // -residual
};

// Shared residual/Jacobian assembly. Augmented mode appends the unknown
// lambda and a volume-mean bordering row.
class Discretization {
 public:
  Discretization(const MappedGrid& grid, int k, const Field& f, const Field& phi)
      : grid_(grid), k_(k) {
    const int N = grid.num_nodes();
    f_vals_.resize(N);
    for (int idx = 0; idx < N; ++idx) {
      const Vec2 x = grid.node(idx);
      f_vals_[idx] = f(x[0], x[1]);
      if (!(f_vals_[idx] > 0.0)) {
        std::ostringstream os;
        os << "solver: f must be positive, got " << f_vals_[idx] << " at ("
           << x[0] << ", " << x[1] << ")";
        throw std::invalid_argument(os.str());
      }
    }
    phi_vals_.resize(grid.n_theta());
    for (int j = 0; j < grid.n_theta(); ++j) {
      const Vec2 x = grid.node(grid.index(grid.n_s(), j));
      phi_vals_[j] = phi(x[0], x[1]);
    }
  }

  // eps >= 0; augmented: lambda is an unknown and eps is ignored.
  std::vector<double> residual(const std::vector<double>& u, double eps,
                               bool augmented, double lambda) const {
    const int N = grid_.num_nodes();
    std::vector<double> r(augmented ? N + 1 : N);
    for (int idx = 0; idx < N; ++idx) {
      if (grid_.is_boundary(idx)) {
        const int j = grid_.column(idx);
        const double un = grid_.normal_derivative_at(u, j);
        r[idx] = augmented ? un - lambda - phi_vals_[j]
                           : un + eps * u[idx] - phi_vals_[j];
      } else {
        r[idx] = sigma2x2(hessian2x2(grid_, u, idx), k_) - f_vals_[idx];
      }
    }
    if (augmented) r[N] = grid_.mean(u);
    return r;
  }

  AssembledSystem assemble(const std::vector<double>& u,
                           const std::vector<double>& r, double eps,
                           bool augmented) const {
    const int N = grid_.num_nodes();
    const int dim = augmented ? N + 1 : N;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(N) * 14);
    for (int idx = 0; idx < N; ++idx) {
      if (grid_.is_boundary(idx)) {
        const int j = grid_.column(idx);
        for (const auto& [q, w] : grid_.normal_derivative_stencil(j)) {
          trip.emplace_back(idx, q, w);
        }
        if (augmented) {
          trip.emplace_back(idx, N, -1.0);
        } else {
          trip.emplace_back(idx, idx, eps);
        }
      } else {
        const Eigen::Matrix2d T = newton2x2(hessian2x2(grid_, u, idx), k_ - 1);
        for (const auto& [q, w] : grid_.hess_xx(idx)) trip.emplace_back(idx, q, T(0, 0) * w);
        for (const auto& [q, w] : grid_.hess_xy(idx)) trip.emplace_back(idx, q, 2.0 * T(0, 1) * w);
        for (const auto& [q, w] : grid_.hess_yy(idx)) trip.emplace_back(idx, q, T(1, 1) * w);
      }
    }
    if (augmented) {
      const double vol = grid_.domain_volume();
      for (int idx = 0; idx < N; ++idx) {
        trip.emplace_back(N, idx, grid_.weight(idx) / vol);
      }
    }
    AssembledSystem sys;
    sys.J.resize(dim, dim);
    sys.J.setFromTriplets(trip.begin(), trip.end());
    sys.rhs.resize(dim);
    for (int i = 0; i < dim; ++i) sys.rhs[i] = -r[i];
    return sys;
  }

  const MappedGrid& grid() const { return grid_; }
  int k() const { return k_; }
  double max_f() const { return *std::max_element(f_vals_.begin(), f_vals_.end()); }
  const std::vector<double>& phi_vals() const { return phi_vals_; }

 private:
  const MappedGrid& grid_;
  int k_;
  std::vector<double> f_vals_;
  std::vector<double> phi_vals_;
};

bool admissible_field(const MappedGrid& grid, const std::vector<double>& u, int k,
                      double tol) {
  for (int idx = 0; idx < grid.num_nodes(); ++idx) {
    if (!admissible2x2(hessian2x2(grid, u, idx), k, tol)) return false;
  }
  return true;
}

// Core damped Newton loop shared by the eps-mode and augmented solves.
// z holds nodal values (plus lambda in augmented mode).
int newton_loop(const Discretization& disc, std::vector<double>& z, double eps,
                bool augmented, const NewtonOptions& opts) {
  const MappedGrid& grid = disc.grid();
  const int N = grid.num_nodes();
  auto split = [&](const std::vector<double>& zz) {
    return std::vector<double>(zz.begin(), zz.begin() + N);
  };
  std::vector<double> u = split(z);
  double lambda = augmented ? z[N] : 0.0;
  std::vector<double> r = disc.residual(u, eps, augmented, lambda);
  double rn = inf_norm(r);
  // rounding floor of the residual: second-derivative stencils amplify nodal
  // rounding by ~1/h^2, so a stall there is convergence, not failure
  const double h = grid.h_s();
  // the eps-mode system approaches the singular pure-Neumann operator as
  // eps -> 0, inflating the attainable floor by ~1/eps
  const double cond_eps = augmented ? 1.0 : 1.0 + 5e-2 / std::max(eps, 1e-12);
  const double floor_tol = opts.tol * (1.0 + 1.0 / (h * h)) * cond_eps;
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    if (rn < opts.tol) break;
    AssembledSystem sys = disc.assemble(u, r, eps, augmented);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(sys.J);
    lu.factorize(sys.J);
    if (lu.info() != Eigen::Success) {
      throw NonConvergenceError("solver: singular Jacobian");
    }
    Eigen::VectorXd delta = lu.solve(sys.rhs);

    double t = 1.0;
    bool accepted = false;
    bool cone_blocked = false;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
      std::vector<double> z_trial = z;
      for (size_t i = 0; i < z.size(); ++i) z_trial[i] += t * delta[static_cast<int>(i)];
      std::vector<double> u_trial = split(z_trial);
      const double lam_trial = augmented ? z_trial[N] : 0.0;
      if (!admissible_field(grid, u_trial, disc.k(), opts.cone_tol)) {
        cone_blocked = true;
        t *= 0.5;
        continue;
      }
      std::vector<double> r_trial = disc.residual(u_trial, eps, augmented, lam_trial);
      const double rn_trial = inf_norm(r_trial);
      if (rn_trial < rn * (1.0 - 1e-4 * t) || rn_trial < opts.tol) {
        z = std::move(z_trial);
        u = std::move(u_trial);
        lambda = lam_trial;
        r = std::move(r_trial);
        rn = rn_trial;
        accepted = true;
        break;
      }
      cone_blocked = false;
      t *= 0.5;
    }
    if (!accepted) {
      if (cone_blocked) {
        throw ConeBreakdownError("solver: admissibility unrecoverable in line search");
      }
      if (rn < floor_tol) break;
      std::ostringstream os;
      os << "solver: line search stalled at residual " << rn;
      throw NonConvergenceError(os.str());
    }
  }
  if (rn >= opts.tol && rn >= floor_tol) {
    std::ostringstream os;
    os << "solver: no convergence after " << iter << " iterations, residual " << rn;
    throw NonConvergenceError(os.str());
  }
  return iter;
}

}  // namespace

double SolveReport::u_min() const { return *std::min_element(u.begin(), u.end()); }
double SolveReport::u_max() const { return *std::max_element(u.begin(), u.end()); }

std::vector<double> residual(const MappedGrid& grid, const SolveProblem& p,
                             const std::vector<double>& u) {
  Discretization disc(grid, p.k, p.f, p.phi);
  return disc.residual(u, p.eps, false, 0.0);
}

std::vector<double> quadratic_initial_guess(const MappedGrid& grid, int k,
                                            const Field& f) {
  double fmax = 0;
  for (int idx = 0; idx < grid.num_nodes(); ++idx) {
    const Vec2 x = grid.node(idx);
    fmax = std::max(fmax, f(x[0], x[1]));
  }
  const double A = 0.5 * std::pow(fmax / binomial(2, k), 1.0 / k);
  std::vector<double> u(grid.num_nodes());
  for (int idx = 0; idx < grid.num_nodes(); ++idx) {
    const Vec2 x = grid.node(idx);
    u[idx] = A * (x[0] * x[0] + x[1] * x[1]);
  }
  return u;
}

bool all_hessians_admissible(const MappedGrid& grid, const std::vector<double>& u,
                             int k, double tol) {
  return admissible_field(grid, u, k, tol);
}

namespace {

// Eps-mode solve keeping the raw (un-shifted) iterate, which the warm starts
// of the continuation need.
SolveReport solve_eps_raw(const MappedGrid& grid, const SolveProblem& p,
                          const NewtonOptions& opts,
                          const std::vector<double>* warm_start) {
  if (!(p.eps > 0)) throw std::invalid_argument("newton_solve_eps: need eps > 0");
  if (p.k < 1 || p.k > 2) throw std::domain_error("newton_solve_eps: planar grid supports k in {1,2}");
  Discretization disc(grid, p.k, p.f, p.phi);
  std::vector<double> u =
      warm_start ? *warm_start : quadratic_initial_guess(grid, p.k, p.f);
  SolveReport rep;
  rep.newton_iters = newton_loop(disc, u, p.eps, false, opts);
  rep.residual_norm = inf_norm(disc.residual(u, p.eps, false, 0.0));

  std::vector<double> minus_eps_u(grid.n_theta());
  for (int j = 0; j < grid.n_theta(); ++j) {
    minus_eps_u[j] = -p.eps * u[grid.index(grid.n_s(), j)];
  }
  rep.lambda = boundary_mean(grid, minus_eps_u);
  rep.eps_trace.push_back({p.eps, rep.lambda, grid.sup_gradient(u)});
  rep.admissible = admissible_field(grid, u, p.k, opts.cone_tol);
  rep.u = std::move(u);
  return rep;
}

}  // namespace

SolveReport newton_solve_eps(const MappedGrid& grid, const SolveProblem& p,
                             const NewtonOptions& opts,
                             const std::vector<double>* warm_start) {
  SolveReport rep = solve_eps_raw(grid, p, opts, warm_start);
  grid.make_mean_zero(rep.u);
  return rep;
}

std::vector<double> default_eps_schedule(double eps0, int stages) {
  std::vector<double> s(stages);
  for (int j = 0; j < stages; ++j) s[j] = eps0 * std::pow(2.0, -j);
  return s;
}

SolveReport continuation_solve(const MappedGrid& grid, int k, const Field& f,
                               const Field& phi,
                               const std::vector<double>& schedule,
                               const NewtonOptions& opts) {
  if (schedule.size() < 2) {
    throw std::invalid_argument("continuation_solve: need at least two eps stages");
  }
  for (size_t j = 1; j < schedule.size(); ++j) {
    if (!(schedule[j] < schedule[j - 1]) || !(schedule[j] > 0)) {
      throw std::invalid_argument("continuation_solve: schedule must decrease to 0");
    }
  }
  SolveReport rep;
  std::vector<double> warm;
  std::vector<double> u_prev, u_last;  // mean-zero fields of the last two stages
  double lam_prev = 0, lam_last = 0;
  for (size_t j = 0; j < schedule.size(); ++j) {
    SolveProblem p{k, f, phi, schedule[j]};
    SolveReport stage = solve_eps_raw(grid, p, opts, warm.empty() ? nullptr : &warm);
    warm = stage.u;  // raw iterate; the boundary condition depends on the shift

    rep.newton_iters += stage.newton_iters;
    rep.residual_norm = stage.residual_norm;
    rep.admissible = stage.admissible;
    rep.eps_trace.push_back(stage.eps_trace.front());

    if (rep.eps_trace.size() >= 3) {
      const size_t m = rep.eps_trace.size();
      const double d1 = std::fabs(rep.eps_trace[m - 1].lambda_eps -
                                  rep.eps_trace[m - 2].lambda_eps);
      const double d0 = std::fabs(rep.eps_trace[m - 2].lambda_eps -
                                  rep.eps_trace[m - 3].lambda_eps);
      const double noise = 1e-8 * (1.0 + std::fabs(rep.eps_trace[m - 1].lambda_eps));
      if (d1 > 4.0 * d0 + noise) {
        throw ContinuationDivergenceError("continuation_solve: lambda_eps sequence not Cauchy");
      }
    }
    grid.make_mean_zero(stage.u);
    u_prev = std::move(u_last);
    u_last = std::move(stage.u);
    lam_prev = lam_last;
    lam_last = rep.eps_trace.back().lambda_eps;
  }
  // Richardson in eps on the last two stages (halving schedule assumed for the
  // weights; general ratio handled below).
  const size_t m = rep.eps_trace.size();
  const double e1 = rep.eps_trace[m - 2].eps, e2 = rep.eps_trace[m - 1].eps;
  const double w2 = e1 / (e1 - e2), w1 = -e2 / (e1 - e2);
  rep.lambda = w2 * lam_last + w1 * lam_prev;
  rep.u.resize(grid.num_nodes());
  for (int i = 0; i < grid.num_nodes(); ++i) {
    rep.u[i] = w2 * u_last[i] + w1 * u_prev[i];
  }
  grid.make_mean_zero(rep.u);
  return rep;
}

SolveReport augmented_solve(const MappedGrid& grid, int k, const Field& f,
                            const Field& phi, const NewtonOptions& opts,
                            AugmentedInit init) {
  if (k < 1 || k > 2) throw std::domain_error("augmented_solve: planar grid supports k in {1,2}");
  Discretization disc(grid, k, f, phi);
  const int N = grid.num_nodes();
  std::vector<double> u0 = quadratic_initial_guess(grid, k, f);
  if (init == AugmentedInit::LaplaceSolution && k > 1) {
    // start from the Laplace-case solution of sigma_1 = n (f/C(n,k))^{1/k}
    Field f1(
        [f, k](double x, double y) {
          return 2.0 * std::pow(f(x, y) / binomial(2, k), 1.0 / k);
        },
        "derived-laplace-init");
    SolveReport lap = augmented_solve(grid, 1, f1, phi, opts, AugmentedInit::Quadratic);
    // blend toward the quadratic comparison function until k-admissible
    for (double t = 1.0; t > 1e-3; t *= 0.5) {
      std::vector<double> blend(N);
      for (int i = 0; i < N; ++i) blend[i] = t * lap.u[i] + (1 - t) * u0[i];
      if (admissible_field(grid, blend, k, opts.cone_tol)) {
        u0 = std::move(blend);
        break;
      }
    }
  }
  std::vector<double> z = u0;
  z.push_back(lambda_lower_bound(grid.body(), k, f, phi));
  SolveReport rep;
  rep.newton_iters = newton_loop(disc, z, 0.0, true, opts);
  rep.lambda = z[N];
  rep.u.assign(z.begin(), z.begin() + N);
  rep.residual_norm = inf_norm(disc.residual(rep.u, 0.0, true, rep.lambda));
  rep.admissible = admissible_field(grid, rep.u, k, opts.cone_tol);
  grid.make_mean_zero(rep.u);
  return rep;
}

double lambda_lower_bound(const ConvexBody2D& body, int k, const Field& f,
                          const Field& phi) {
  const int n = 2;
  const double cnk = binomial(n, k);
  const double bulk = body.integrate_interior(
      [&](double x, double y) { return std::pow(f(x, y) / cnk, 1.0 / k); });
  const double bdry = body.integrate_boundary(
      [&](const BoundaryFrame& fr) { return phi(fr.point[0], fr.point[1]); });
  return (n * bulk - bdry) / body.area();
}

namespace {

// 8-point Gauss-Legendre on [a,b].
double gauss8(const std::function<double(double)>& g, double a, double b) {
  static const double xs[4] = {0.1834346424956498, 0.5255324099163290,
                               0.7966664774136267, 0.9602898564975363};
  static const double ws[4] = {0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = 0;
  for (int i = 0; i < 4; ++i) {
    acc += ws[i] * (g(c - h * xs[i]) + g(c + h * xs[i]));
  }
  return acc * h;
}

}  // namespace

double RadialSolution::du_at(double rr) const {
  if (rr <= r.front()) return du.front() * (rr / std::max(r.front(), 1e-300));
  if (rr >= r.back()) return du.back();
  const double h = r[1] - r[0];
  const size_t i = std::min(r.size() - 2, static_cast<size_t>(rr / h));
  const double t = (rr - r[i]) / h;
  return (1 - t) * du[i] + t * du[i + 1];
}

RadialSolution radial_solve(int n, int k, double R,
                            const std::function<double(double)>& f, double phi_R,
                            int mesh) {
  if (n < 2 || k < 1 || k > n || R <= 0) {
    throw std::invalid_argument("radial_solve: bad (n, k, R)");
  }
  RadialSolution sol;
  sol.n = n;
  sol.k = k;
  sol.R = R;
  const double h = R / mesh;
  sol.r.resize(mesh + 1);
  sol.du.resize(mesh + 1);
  sol.u.resize(mesh + 1);
  const double coef = k / binomial(n - 1, k - 1);
  auto integrand = [&](double s) { return std::pow(s, n - 1) * f(s); };
  double inner = 0.0;
  sol.r[0] = 0;
  sol.du[0] = 0;
  for (int i = 1; i <= mesh; ++i) {
    const double a = (i - 1) * h, b = i * h;
    inner += gauss8(integrand, a, b);
    if (inner < 0) throw std::runtime_error("radial_solve: negative integrand under root");
    sol.r[i] = b;
    sol.du[i] = std::pow(coef * inner * std::pow(b, k - n), 1.0 / k);
  }
  // u by cumulative trapezoid of du on the fine mesh (du is C^1, mesh is fine)
  sol.u[0] = 0;
  for (int i = 1; i <= mesh; ++i) {
    sol.u[i] = sol.u[i - 1] + 0.5 * h * (sol.du[i - 1] + sol.du[i]);
  }
  sol.lambda = sol.du[mesh] - phi_R;
  // normalize to volume-weighted mean zero over the ball
  double num = 0, den = 0;
  for (int i = 0; i <= mesh; ++i) {
    const double w = std::pow(sol.r[i], n - 1) * ((i == 0 || i == mesh) ? 0.5 : 1.0);
    num += w * sol.u[i];
    den += w;
  }
  const double mean = num / den;
  for (double& v : sol.u) v -= mean;
  return sol;
}

DivergenceCheck divergence_free_check(const MappedGrid& grid,
                                      const std::vector<double>& u, int k) {
  if (k < 0 || k > 1) throw std::domain_error("divergence_free_check: planar k in {0,1}");
  const int N = grid.num_nodes();
  std::vector<double> t11(N), t12(N), t22(N);
  for (int idx = 0; idx < N; ++idx) {
    const Eigen::Matrix2d T = newton2x2(hessian2x2(grid, u, idx), k);
    t11[idx] = T(0, 0);
    t12[idx] = T(0, 1);
    t22[idx] = T(1, 1);
  }
  DivergenceCheck out;
  // stay away from the pole (angular truncation there is O(h^2/s)) and from
  // the one-sided boundary closure
  for (int i = 2; i <= grid.n_s() - 2; ++i) {
    if (grid.s_of_ring(i) < 0.2) continue;
    for (int j = 0; j < grid.n_theta(); ++j) {
      const int idx = grid.index(i, j);
      const double d1 = apply_stencil(grid.grad_x(idx), t11) +
                        apply_stencil(grid.grad_y(idx), t12);
      const double d2 = apply_stencil(grid.grad_x(idx), t12) +
                        apply_stencil(grid.grad_y(idx), t22);
      out.max_divergence = std::max({out.max_divergence, std::fabs(d1), std::fabs(d2)});
    }
  }
  return out;
}

}  // namespace hn
