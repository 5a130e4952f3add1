#ifndef HN_SYMFUN_HPP
#define HN_SYMFUN_HPP

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <stdexcept>
#include <vector>

// Elementary symmetric functions, Newton transformation tensors and their
// polarizations, Garding-cone predicates. Everything here is a pure function
// of its arguments.

namespace hn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

/// Eigenvalue list (lambda_1,...,lambda_n).
using Spectrum = std::vector<double>;

/// Symmetric n x n matrix. Symmetrized on construction; entries must be finite.
class SymMatrix {
 public:
  explicit SymMatrix(const Eigen::MatrixXd& m);
  static SymMatrix Identity(int n);
  static SymMatrix Zero(int n);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  double operator()(int i, int j) const { return mat_(i, j); }

  Spectrum eigenvalues() const;

  SymMatrix operator+(const SymMatrix& o) const { return SymMatrix(mat_ + o.mat_); }
  SymMatrix operator-(const SymMatrix& o) const { return SymMatrix(mat_ - o.mat_); }
  SymMatrix operator*(double t) const { return SymMatrix(t * mat_); }

 private:
  Eigen::MatrixXd mat_;
};

/// sigma_k(lambda), k-th elementary symmetric function. sigma_0 = 1.
/// One-pass recurrence, O(nk); throws std::domain_error for k < 0 or k > n.
double elementary_symmetric(const Spectrum& lam, int k);

/// sigma_k(A) := sigma_k of the eigenvalue spectrum of A.
double sigma_of_matrix(const SymMatrix& A, int k);

/// [T_k]_{ij}(A) = d sigma_{k+1}(A) / d A_{ij}. T_0 = I. Valid for 0 <= k <= n-1.
SymMatrix newton_tensor(const SymMatrix& A, int k);

/// Fully symmetric multilinear polarization of sigma_k; agrees with
/// sigma_k(A) when all k arguments equal A.
double polarized_sigma(const std::vector<SymMatrix>& As);

/// Polarization of T_k with k arguments; the empty list gives the identity
/// (T_0 convention; pass dim explicitly in that case).
SymMatrix mixed_newton_tensor(const std::vector<SymMatrix>& As, int dim = -1);

/// Strict cone test: sigma_i(lam) > 0 for all 1 <= i <= k.
bool in_garding_cone(const Spectrum& lam, int k);
bool in_garding_cone(const SymMatrix& A, int k);

/// Tolerance-relaxed cone test for discrete solutions near the cone boundary:
/// sigma_i > -tol * (1 + scale_i), scale_i = sigma_i of the absolute values.
bool in_garding_cone_relaxed(const Spectrum& lam, int k, double tol = 1e-12);
bool in_garding_cone_relaxed(const SymMatrix& A, int k, double tol = 1e-12);

/// Normalized means p_i = (sigma_i / C(n,i))^{1/i}, i = 1..k; non-increasing
/// on the cone. Throws if lam is not in Gamma_k^+.
std::vector<double> newton_maclaurin_means(const Spectrum& lam, int k);

/// E(i,k) = sum_{l=i}^{k-1} (-1)^{l-i} C(k+1,l+2) C(l,i) (l+1) / k,
/// evaluated in exact rational arithmetic. Equals (i+1)/k.
Rational coefficient_E(int i, int k);

/// Exact binomial coefficient.
BigInt binomial_exact(int n, int k);
/// Binomial coefficient as a double.
double binomial(int n, int k);

}  // namespace hn

#endif  // HN_SYMFUN_HPP
