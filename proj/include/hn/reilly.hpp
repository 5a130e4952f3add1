#ifndef HN_REILLY_HPP
#define HN_REILLY_HPP

#include <functional>
#include <utility>
#include <vector>

#include "hn/geometry.hpp"
#include "hn/grid.hpp"
#include "hn/report.hpp"
#include "hn/solver.hpp"
#include "hn/symfun.hpp"

// Verification of the Reilly-type divergence identity/inequality and the
// Alexandrov-Fenchel and Minkowski families on computed solutions and on
// closed-form ball data.

namespace hn {

/// Analytic scalar field with exact gradient and Hessian, for checks that do
/// not need a PDE solve.
struct AnalyticField2D {
  std::function<double(double, double)> value;
  std::function<Vec2(double, double)> grad;
  std::function<Eigen::Matrix2d(double, double)> hess;
};

/// Gauss-Weingarten split of a boundary Hessian in the adapted frame
/// (tangent first, normal second): full = A_part + B_part, where B_part
/// carries the curvature terms and has exact zero in the normal-normal slot.
struct BoundaryHessianSplit {
  double theta;
  SymMatrix A_part;
  SymMatrix B_part;
};

BoundaryHessianSplit boundary_split_at(const BoundaryFrame& frame,
                                       const Vec2& grad,
                                       const Eigen::Matrix2d& hess);

std::vector<BoundaryHessianSplit> boundary_split(const MappedGrid& grid,
                                                 const SolveReport& sol);
std::vector<BoundaryHessianSplit> boundary_split(const ConvexBody2D& body,
                                                 const AnalyticField2D& u, int M);

/// (k+1) int_Omega sigma_{k+1}(D^2 u) vs the boundary flux
/// int [T_k]_{ij}(D^2 u) u_i nu_j dmu. An exact identity; the report's slack
/// is pure discretization error.
InequalityReport reilly_identity(const ConvexBody2D& body, const AnalyticField2D& u,
                                 int k, int M = 512, int n_radial = 48);
InequalityReport reilly_identity(const MappedGrid& grid, const SolveReport& sol,
                                 int k);

/// Prop-4.1-type inequality for constant Neumann data c > 0:
/// (k+1) int sigma_{k+1}(D^2 u) >= int sigma_k(h) c^{k+1}.
/// details carry the boundary remainder III and the identity ledger.
InequalityReport reilly_inequality(const MappedGrid& grid, const SolveReport& sol,
                                   int k, double c);
InequalityReport reilly_inequality_ball(const BallGeometry& ball, int k);

/// Boundary remainder III = int sum_i ((i+1)/k) [T_{k-1}](D^2u...,h...) u_t h u_t
/// u_n^{k-i-1}; non-negative, zero exactly when the tangential gradient
/// vanishes.
double third_term_III(const MappedGrid& grid, const SolveReport& sol, int k);
double third_term_III(const ConvexBody2D& body, const AnalyticField2D& u, int k,
                      int M = 512);

/// Area^{k+1} >= (n^k / C(n-1,k)) Vol^k int sigma_k(h); equality on balls.
InequalityReport af_inequality(const ConvexBody2D& body, int k, int M = 1024);
InequalityReport af_inequality(const BallGeometry& ball, int k);

/// Area^2 >= n/(n-1) Vol int H dmu; coincides with af_inequality at k = 1.
InequalityReport minkowski_inequality(const ConvexBody2D& body, int M = 1024);
InequalityReport minkowski_inequality(const BallGeometry& ball);

/// The two bridging inequalities chaining the Reilly inequality to the
/// Alexandrov-Fenchel one, evaluated on a classical solve with f = C(n,k),
/// phi = 0 and c = lambda:
///   first:  c^{k+1} int sigma_k(h) <= (k+1) C(n,k+1) Vol
///   second: int (sigma_k(D^2 u)/C(n,k))^{1/k} <= c Area / n
std::pair<InequalityReport, InequalityReport> nm_bridge_checks(
    const MappedGrid& grid, const SolveReport& sol, int k);
std::pair<InequalityReport, InequalityReport> nm_bridge_checks_ball(
    const BallGeometry& ball, int k);

}  // namespace hn

#endif  // HN_REILLY_HPP
