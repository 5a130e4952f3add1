#include "hn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hn {

double apply_stencil(const Stencil& st, const std::vector<double>& u) {
  double acc = 0;
  for (const auto& [idx, w] : st) acc += w * u[idx];
  return acc;
}

namespace {

void axpy(Stencil& dst, double a, const Stencil& src) {
  for (const auto& [idx, w] : src) dst.emplace_back(idx, a * w);
}

void compress(Stencil& st) {
  std::sort(st.begin(), st.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Stencil out;
  for (const auto& [idx, w] : st) {
    if (!out.empty() && out.back().first == idx) {
      out.back().second += w;
    } else {
      out.emplace_back(idx, w);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& e) { return e.second == 0.0; }),
            out.end());
  st = std::move(out);
}

}  // namespace

MappedGrid::MappedGrid(const ConvexBody2D& body, int n_s, int n_theta)
    : body_(body), n_s_(n_s), n_theta_(n_theta) {
  if (n_s < 8) throw std::invalid_argument("MappedGrid: need n_s >= 8");
  if (n_theta < 16 || n_theta % 2 != 0) {
    throw std::invalid_argument("MappedGrid: need even n_theta >= 16");
  }
  h_s_ = 1.0 / (n_s - 0.5);
  h_theta_ = 2.0 * M_PI / n_theta;
  frames_ = body_.boundary_frames(n_theta);

  nodes_.resize(num_nodes());
  weights_.resize(num_nodes());
  for (int i = 1; i <= n_s_; ++i) {
    const double s = s_of_ring(i);
    for (int j = 0; j < n_theta_; ++j) {
      const double t = theta_of_column(j);
      const double r = body_.rho(t);
      const int idx = index(i, j);
      nodes_[idx] = {s * r * std::cos(t), s * r * std::sin(t)};
      // cell integral of s ds: exact on the midpoint cell, half cell at s = 1
      double cell = (i < n_s_) ? h_s_ * s : 0.5 * h_s_ * (1.0 - 0.25 * h_s_);
      weights_[idx] = cell * r * r * h_theta_;
      total_weight_ += weights_[idx];
    }
  }
  build_stencils();
}

void MappedGrid::build_stencils() {
  const int Ns = n_s_, Nt = n_theta_;
  const double h = h_s_, ht = h_theta_;

  // Value functional at logical position (i, j); i = 0 is the ghost ring at
  // s = -h/2, closed through the origin by cubic interpolation on the
  // opposite ray.
  auto value_at = [&](int i, int j) -> Stencil {
    j = ((j % Nt) + Nt) % Nt;
    if (i >= 1) return {{index(i, j), 1.0}};
    // ghost: physical radius (h/2) rho(theta_j) along direction theta_j + pi
    const int j2 = (j + Nt / 2) % Nt;
    const double t = theta_of_column(j), t2 = theta_of_column(j2);
    const double sstar = 0.5 * h * body_.rho(t) / body_.rho(t2);
    double sn[4], L[4];
    for (int m = 0; m < 4; ++m) sn[m] = s_of_ring(m + 1);
    for (int m = 0; m < 4; ++m) {
      L[m] = 1.0;
      for (int l = 0; l < 4; ++l) {
        if (l != m) L[m] *= (sstar - sn[l]) / (sn[m] - sn[l]);
      }
    }
    Stencil st;
    for (int m = 0; m < 4; ++m) st.emplace_back(index(m + 1, j2), L[m]);
    return st;
  };

  auto d_s = [&](int i, int j) -> Stencil {
    Stencil st;
    if (i < Ns) {
      axpy(st, 1.0 / (2 * h), value_at(i + 1, j));
      axpy(st, -1.0 / (2 * h), value_at(i - 1, j));
    } else {
      // third-order one-sided
      axpy(st, 11.0 / (6 * h), value_at(Ns, j));
      axpy(st, -18.0 / (6 * h), value_at(Ns - 1, j));
      axpy(st, 9.0 / (6 * h), value_at(Ns - 2, j));
      axpy(st, -2.0 / (6 * h), value_at(Ns - 3, j));
    }
    return st;
  };

  auto d_ss = [&](int i, int j) -> Stencil {
    Stencil st;
    if (i < Ns) {
      axpy(st, 1.0 / (h * h), value_at(i + 1, j));
      axpy(st, -2.0 / (h * h), value_at(i, j));
      axpy(st, 1.0 / (h * h), value_at(i - 1, j));
    } else {
      axpy(st, 2.0 / (h * h), value_at(Ns, j));
      axpy(st, -5.0 / (h * h), value_at(Ns - 1, j));
      axpy(st, 4.0 / (h * h), value_at(Ns - 2, j));
      axpy(st, -1.0 / (h * h), value_at(Ns - 3, j));
    }
    return st;
  };

  auto d_t = [&](int i, int j) -> Stencil {
    Stencil st;
    axpy(st, 1.0 / (2 * ht), value_at(i, j + 1));
    axpy(st, -1.0 / (2 * ht), value_at(i, j - 1));
    return st;
  };

  auto d_tt = [&](int i, int j) -> Stencil {
    Stencil st;
    axpy(st, 1.0 / (ht * ht), value_at(i, j + 1));
    axpy(st, -2.0 / (ht * ht), value_at(i, j));
    axpy(st, 1.0 / (ht * ht), value_at(i, j - 1));
    return st;
  };

  auto d_st = [&](int i, int j) -> Stencil {
    Stencil st;
    axpy(st, 1.0 / (2 * ht), d_s(i, j + 1));
    axpy(st, -1.0 / (2 * ht), d_s(i, j - 1));
    return st;
  };

  const int N = num_nodes();
  grad_x_.resize(N);
  grad_y_.resize(N);
  hess_xx_.resize(N);
  hess_xy_.resize(N);
  hess_yy_.resize(N);

  for (int i = 1; i <= Ns; ++i) {
    for (int j = 0; j < Nt; ++j) {
      const int idx = index(i, j);
      const double s = s_of_ring(i), t = theta_of_column(j);
      const double r = body_.rho(t), dr = body_.drho(t), ddr = body_.ddrho(t);
      const double c = std::cos(t), sn = std::sin(t);

      // forward map derivatives
      const double xs[2] = {r * c, r * sn};
      const double xt[2] = {s * (dr * c - r * sn), s * (dr * sn + r * c)};
      const double xst[2] = {dr * c - r * sn, dr * sn + r * c};
      const double xtt[2] = {s * ((ddr - r) * c - 2 * dr * sn),
                             s * ((ddr - r) * sn + 2 * dr * c)};
      // x_ss = 0

      const double det = xs[0] * xt[1] - xt[0] * xs[1]; // = s * rho^2 > 0
      // inverse first derivatives: rows of J^{-1}
      const double sx[2] = {xt[1] / det, -xt[0] / det};  // (ds/dx, ds/dy)
      const double tx[2] = {-xs[1] / det, xs[0] / det};  // (dtheta/dx, dtheta/dy)

      // inverse second derivatives:
      //   a_{x_i x_j} = -a_{x_k} * x^k_{bc} * b_{x_i} * c_{x_j}
      double sxx[2][2], txx[2][2];
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
          double acc_s = 0, acc_t = 0;
          for (int kk = 0; kk < 2; ++kk) {
            // x^k_{bc} * b_{x_p} * c_{x_q} over b,c in {s,theta}
            const double inner =
                0.0 * sx[p] * sx[q] /* x_ss = 0 */
                + xst[kk] * (sx[p] * tx[q] + tx[p] * sx[q])
                + xtt[kk] * tx[p] * tx[q];
            acc_s += sx[kk] * inner;
            acc_t += tx[kk] * inner;
          }
          sxx[p][q] = -acc_s;
          txx[p][q] = -acc_t;
        }
      }

      const Stencil Ss = d_s(i, j);
      const Stencil St = d_t(i, j);
      const Stencil Sss = d_ss(i, j);
      const Stencil Sst = d_st(i, j);
      const Stencil Stt = d_tt(i, j);

      Stencil gx, gy;
      axpy(gx, sx[0], Ss);
      axpy(gx, tx[0], St);
      axpy(gy, sx[1], Ss);
      axpy(gy, tx[1], St);
      compress(gx);
      compress(gy);
      grad_x_[idx] = std::move(gx);
      grad_y_[idx] = std::move(gy);

      auto hess = [&](int p, int q) {
        Stencil st_out;
        axpy(st_out, sx[p] * sx[q], Sss);
        axpy(st_out, sx[p] * tx[q] + tx[p] * sx[q], Sst);
        axpy(st_out, tx[p] * tx[q], Stt);
        axpy(st_out, sxx[p][q], Ss);
        axpy(st_out, txx[p][q], St);
        compress(st_out);
        return st_out;
      };
      hess_xx_[idx] = hess(0, 0);
      hess_xy_[idx] = hess(0, 1);
      hess_yy_[idx] = hess(1, 1);
    }
  }
}

SymMatrix MappedGrid::hessian_at(const std::vector<double>& u, int idx) const {
  Eigen::Matrix2d H;
  H(0, 0) = apply_stencil(hess_xx_[idx], u);
  H(0, 1) = H(1, 0) = apply_stencil(hess_xy_[idx], u);
  H(1, 1) = apply_stencil(hess_yy_[idx], u);
  return SymMatrix(H);
}

Vec2 MappedGrid::gradient_at(const std::vector<double>& u, int idx) const {
  return {apply_stencil(grad_x_[idx], u), apply_stencil(grad_y_[idx], u)};
}

Stencil MappedGrid::normal_derivative_stencil(int j) const {
  const int idx = index(n_s_, j);
  const Vec2 nu = frames_[j].nu;
  Stencil st;
  axpy(st, nu[0], grad_x_[idx]);
  axpy(st, nu[1], grad_y_[idx]);
  compress(st);
  return st;
}

double MappedGrid::normal_derivative_at(const std::vector<double>& u, int j) const {
  const int idx = index(n_s_, j);
  const Vec2 g = gradient_at(u, idx);
  const Vec2 nu = frames_[j].nu;
  return g[0] * nu[0] + g[1] * nu[1];
}

double MappedGrid::integrate_nodal(const std::vector<double>& values) const {
  double acc = 0;
  for (int idx = 0; idx < num_nodes(); ++idx) acc += weights_[idx] * values[idx];
  return acc;
}

double MappedGrid::mean(const std::vector<double>& u) const {
  return integrate_nodal(u) / total_weight_;
}

void MappedGrid::make_mean_zero(std::vector<double>& u) const {
  const double m = mean(u);
  for (double& v : u) v -= m;
}

double MappedGrid::sup_gradient(const std::vector<double>& u) const {
  double best = 0;
  for (int idx = 0; idx < num_nodes(); ++idx) {
    const Vec2 g = gradient_at(u, idx);
    best = std::max(best, std::hypot(g[0], g[1]));
  }
  return best;
}

}  // namespace hn
