#ifndef HN_SOLVER_HPP
#define HN_SOLVER_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hn/fields.hpp"
#include "hn/grid.hpp"

// Discretization and damped-Newton continuation for the perturbed Neumann
// problem sigma_k(D^2 u) = f in Omega, u_nu = -eps u + phi on the boundary,
// plus the eps -> 0 limit extraction of the classical pair (lambda, u) and a
// direct augmented solve used as a cross-check.

namespace hn {

struct SolveProblem {
  int k = 1;
  Field f;
  Field phi;
  double eps = 0.0;
};

struct EpsStage {
  double eps;
  double lambda_eps;
  double grad_sup;
};

struct SolveReport {
  std::vector<double> u;  // volume-weighted mean-zero
  double lambda = 0.0;
  double residual_norm = 0.0;
  int newton_iters = 0;
  bool admissible = false;
  std::vector<EpsStage> eps_trace;

  double u_min() const;
  double u_max() const;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iters = 60;
  int max_backtracks = 30;
  double cone_tol = 1e-12;
};

class ConeBreakdownError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ContinuationDivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One residual entry per node: interior sigma_k(D^2 u) - f, boundary
/// u_nu + eps u - phi.
std::vector<double> residual(const MappedGrid& grid, const SolveProblem& p,
                             const std::vector<double>& u);

/// Quadratic comparison initializer u0 = A |x|^2 with
/// A = (max f / C(n,k))^{1/k} / 2.
std::vector<double> quadratic_initial_guess(const MappedGrid& grid, int k,
                                            const Field& f);

/// Damped Newton for fixed eps > 0. Line search accepts a step only when the
/// residual norm decreases and every nodal Hessian stays in the relaxed
/// Gamma_k^+ cone.
SolveReport newton_solve_eps(const MappedGrid& grid, const SolveProblem& p,
                             const NewtonOptions& opts = {},
                             const std::vector<double>* warm_start = nullptr);

/// Default schedule eps_j = eps0 * 2^{-j}, j = 0..stages-1.
std::vector<double> default_eps_schedule(double eps0 = 0.5, int stages = 11);

/// Solves the perturbed problem along a decreasing eps schedule with warm
/// starts; the classical pair (lambda, u) is extrapolated from the last two
/// stages.
SolveReport continuation_solve(const MappedGrid& grid, int k, const Field& f,
                               const Field& phi,
                               const std::vector<double>& schedule,
                               const NewtonOptions& opts = {});

enum class AugmentedInit { Quadratic, LaplaceSolution };

/// Direct solve of the classical problem: unknowns (u, lambda), boundary rows
/// u_nu - lambda - phi, one bordering row enforcing mean-zero u.
SolveReport augmented_solve(const MappedGrid& grid, int k, const Field& f,
                            const Field& phi, const NewtonOptions& opts = {},
                            AugmentedInit init = AugmentedInit::Quadratic);

/// lambda * Area >= n * int (f/C(n,k))^{1/k} - int phi; returns the bound.
double lambda_lower_bound(const ConvexBody2D& body, int k, const Field& f,
                          const Field& phi);

/// Semi-analytic radial reference: r^{n-k} (u')^k =
/// (k / C(n-1,k-1)) int_0^r s^{n-1} f(s) ds.
struct RadialSolution {
  int n = 0, k = 0;
  double R = 0.0;
  double lambda = 0.0;  // u'(R) - phi(R)
  std::vector<double> r, u, du;
  double du_at(double rr) const;  // linear interpolation on the fine mesh
};

RadialSolution radial_solve(int n, int k, double R,
                            const std::function<double(double)>& f,
                            double phi_R = 0.0, int mesh = 4096);

struct DivergenceCheck {
  double max_divergence = 0.0;
};

/// Max over safely-interior nodes of |sum_j d_j [T_k]_{ij}(D^2 u)| with nested
/// finite differences.
DivergenceCheck divergence_free_check(const MappedGrid& grid,
                                      const std::vector<double>& u, int k);

/// Relaxed admissibility test of a nodal Hessian field.
bool all_hessians_admissible(const MappedGrid& grid, const std::vector<double>& u,
                             int k, double tol);

}  // namespace hn

#endif  // HN_SOLVER_HPP
