#include "hn/symfun.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace hn {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("SymMatrix: matrix must be square, n >= 1");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("SymMatrix: entries must be finite");
  }
  mat_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::Identity(int n) { return SymMatrix(Eigen::MatrixXd::Identity(n, n)); }
SymMatrix SymMatrix::Zero(int n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }

Spectrum SymMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("SymMatrix: eigen-decomposition failed");
  }
  Spectrum lam(mat_.rows());
  for (int i = 0; i < mat_.rows(); ++i) lam[i] = es.eigenvalues()[i];
  return lam;
}

double elementary_symmetric(const Spectrum& lam, int k) {
  const int n = static_cast<int>(lam.size());
  if (n < 1) throw std::domain_error("elementary_symmetric: empty spectrum");
  if (k < 0 || k > n) throw std::domain_error("elementary_symmetric: k out of range");
  for (double v : lam) {
    if (!std::isfinite(v)) throw std::domain_error("elementary_symmetric: non-finite entry");
  }
  if (k == 0) return 1.0;
  // e_j <- e_j + lam * e_{j-1}, descending in j.
  std::vector<double> e(k + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::min(k, i + 1); j >= 1; --j) e[j] += lam[i] * e[j - 1];
  }
  return e[k];
}

double sigma_of_matrix(const SymMatrix& A, int k) {
  return elementary_symmetric(A.eigenvalues(), k);
}

SymMatrix newton_tensor(const SymMatrix& A, int k) {
  const int n = A.dim();
  if (k < 0 || k > n - 1) throw std::domain_error("newton_tensor: k out of range");
  // T_k = sigma_k I - A T_{k-1}, T_0 = I.
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(n, n);
  for (int j = 1; j <= k; ++j) {
    const double sj = sigma_of_matrix(A, j);
    T = sj * Eigen::MatrixXd::Identity(n, n) - A.mat() * T;
  }
  return SymMatrix(T);
}

namespace {

void check_same_dim(const std::vector<SymMatrix>& As) {
  for (const auto& A : As) {
    if (A.dim() != As.front().dim()) {
      throw std::domain_error("polarization: mixed matrix dimensions");
    }
  }
}

// Polarization of a degree-k homogeneous map Phi:
//   phi(A_1,...,A_k) = (1/k!) sum_{S nonempty} (-1)^{k-|S|} Phi(sum_{i in S} A_i)
template <class Out, class Fn>
Out polarize(const std::vector<SymMatrix>& As, Fn&& Phi, Out zero) {
  const int k = static_cast<int>(As.size());
  const int n = As.front().dim();
  Out acc = zero;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    int card = 0;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        sum += As[i].mat();
        ++card;
      }
    }
    const double sign = ((k - card) % 2 == 0) ? 1.0 : -1.0;
    acc = acc + Phi(SymMatrix(sum)) * sign;
  }
  double kfact = 1.0;
  for (int i = 2; i <= k; ++i) kfact *= i;
  return acc * (1.0 / kfact);
}

struct MatAcc {
  Eigen::MatrixXd m;
  MatAcc operator+(const MatAcc& o) const { return {m + o.m}; }
  MatAcc operator*(double t) const { return {t * m}; }
};

}  // namespace

double polarized_sigma(const std::vector<SymMatrix>& As) {
  const int k = static_cast<int>(As.size());
  if (k < 1) throw std::domain_error("polarized_sigma: need at least one argument");
  check_same_dim(As);
  const int n = As.front().dim();
  if (k > n) throw std::domain_error("polarized_sigma: k exceeds dimension");
  return polarize(As, [k](const SymMatrix& M) { return sigma_of_matrix(M, k); }, 0.0);
}

SymMatrix mixed_newton_tensor(const std::vector<SymMatrix>& As, int dim) {
  const int k = static_cast<int>(As.size());
  if (k == 0) {
    if (dim < 1) throw std::domain_error("mixed_newton_tensor: empty list needs explicit dim");
    return SymMatrix::Identity(dim);
  }
  check_same_dim(As);
  const int n = As.front().dim();
  if (dim >= 1 && dim != n) throw std::domain_error("mixed_newton_tensor: dim mismatch");
  if (k > n - 1) throw std::domain_error("mixed_newton_tensor: k out of range");
  MatAcc acc = polarize(
      As, [k](const SymMatrix& M) { return MatAcc{newton_tensor(M, k).mat()}; },
      MatAcc{Eigen::MatrixXd::Zero(n, n)});
  return SymMatrix(acc.m);
}

bool in_garding_cone(const Spectrum& lam, int k) {
  const int n = static_cast<int>(lam.size());
  if (k < 1 || k > n) throw std::domain_error("in_garding_cone: k out of range");
  for (int i = 1; i <= k; ++i) {
    if (!(elementary_symmetric(lam, i) > 0.0)) return false;
  }
  return true;
}

bool in_garding_cone(const SymMatrix& A, int k) {
  return in_garding_cone(A.eigenvalues(), k);
}

bool in_garding_cone_relaxed(const Spectrum& lam, int k, double tol) {
  const int n = static_cast<int>(lam.size());
  if (k < 1 || k > n) throw std::domain_error("in_garding_cone_relaxed: k out of range");
  Spectrum abs_lam(lam.size());
  for (size_t i = 0; i < lam.size(); ++i) abs_lam[i] = std::fabs(lam[i]);
  for (int i = 1; i <= k; ++i) {
    const double scale = elementary_symmetric(abs_lam, i);
    if (elementary_symmetric(lam, i) <= -tol * (1.0 + scale)) return false;
  }
  return true;
}

bool in_garding_cone_relaxed(const SymMatrix& A, int k, double tol) {
  return in_garding_cone_relaxed(A.eigenvalues(), k, tol);
}

std::vector<double> newton_maclaurin_means(const Spectrum& lam, int k) {
  const int n = static_cast<int>(lam.size());
  if (!in_garding_cone(lam, k)) {
    throw std::domain_error("newton_maclaurin_means: spectrum not in Gamma_k^+");
  }
  std::vector<double> p(k);
  for (int i = 1; i <= k; ++i) {
    p[i - 1] = std::pow(elementary_symmetric(lam, i) / binomial(n, i), 1.0 / i);
  }
  return p;
}

BigInt binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

double binomial(int n, int k) {
  return static_cast<double>(binomial_exact(n, k));
}

Rational coefficient_E(int i, int k) {
  if (k < 1 || i < 0 || i > k - 1) throw std::domain_error("coefficient_E: index out of range");
  Rational e(0);
  for (int l = i; l <= k - 1; ++l) {
    BigInt term = binomial_exact(k + 1, l + 2) * binomial_exact(l, i) * (l + 1);
    if ((l - i) % 2 != 0) term = -term;
    e += Rational(term, BigInt(k));
  }
  return e;
}

}  // namespace hn
