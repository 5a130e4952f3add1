#include "hn/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "hn/reilly.hpp"
#include "hn/solver.hpp"

// The shipped acceptance battery: every check prints one PASS/FAIL line and
// the whole run is the gate used by `suite` and the test harness.

namespace hn {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
  std::string name;
  std::function<bool(std::ostringstream&)> run;
};

std::vector<double> sample(const MappedGrid& g,
                           const std::function<double(double, double)>& f) {
  std::vector<double> u(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) {
    const Vec2 p = g.node(i);
    u[i] = f(p[0], p[1]);
  }
  return u;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

SymMatrix random_sym(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = d(rng);
  return SymMatrix(0.5 * (m + m.transpose()));
}

double principal_minor_sum(const SymMatrix& A, int k) {
  const int n = A.dim();
  double acc = 0;
  std::vector<int> idx(k);
  std::function<void(int, int)> rec = [&](int start, int pos) {
    if (pos == k) {
      Eigen::MatrixXd sub(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) sub(a, b) = A(idx[a], idx[b]);
      acc += sub.determinant();
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[pos] = i;
      rec(i + 1, pos + 1);
    }
  };
  rec(0, 0);
  return acc;
}

bool rel_ok(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::max({1.0, std::fabs(got), std::fabs(want)});
}

// ---- criterion bodies ------------------------------------------------------

bool c1_algebra(std::ostringstream& os) {
  std::mt19937 rng(20240901);
  bool ok = true;
  double worst = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const SymMatrix A = random_sym(rng, n);
    const SymMatrix B = random_sym(rng, n);
    for (int k = 1; k <= n; ++k) {
      const double minors = principal_minor_sum(A, k);
      const double sk = sigma_of_matrix(A, k);
      if (!rel_ok(sk, minors, 1e-10)) ok = false;
      worst = std::max(worst, std::fabs(sk - minors) / (1 + std::fabs(minors)));
      if (k <= n - 1) {
        const double contracted =
            (A.mat().array() * newton_tensor(A, k).mat().array()).sum();
        if (!rel_ok(contracted, (k + 1) * sigma_of_matrix(A, k + 1), 1e-10))
          ok = false;
      }
    }
    // binomial expansions of sigma and T over A + B (one k per matrix pair
    // keeps the 2^k polarization cost inside the runtime budget)
    const int k = 1 + static_cast<int>(rng() % n);
    double expansion = 0;
    for (int l = 0; l <= k; ++l) {
      std::vector<SymMatrix> args;
      for (int i = 0; i < l; ++i) args.push_back(A);
      for (int i = l; i < k; ++i) args.push_back(B);
      expansion += binomial(k, l) * polarized_sigma(args);
    }
    if (!rel_ok(expansion, sigma_of_matrix(A + B, k), 1e-10)) ok = false;
    if (k <= n - 1) {
      Eigen::MatrixXd texp = Eigen::MatrixXd::Zero(n, n);
      for (int l = 0; l <= k; ++l) {
        std::vector<SymMatrix> args;
        for (int i = 0; i < l; ++i) args.push_back(A);
        for (int i = l; i < k; ++i) args.push_back(B);
        texp += binomial(k, l) * mixed_newton_tensor(args, n).mat();
      }
      const Eigen::MatrixXd direct = newton_tensor(A + B, k).mat();
      if ((texp - direct).cwiseAbs().maxCoeff() >
          1e-10 * (1 + direct.cwiseAbs().maxCoeff()))
        ok = false;
    }
  }
  os << "worst relative minor deviation " << worst;
  return ok;
}

bool c2_coefficient(std::ostringstream& os) {
  for (int k = 1; k <= 12; ++k) {
    for (int i = 0; i <= k - 1; ++i) {
      if (coefficient_E(i, k) != Rational(i + 1, k)) {
        os << "mismatch at i=" << i << " k=" << k;
        return false;
      }
    }
  }
  os << "exact for all 1 <= k <= 12";
  return true;
}

bool c3_ball_solves(std::ostringstream& os) {
  bool ok = true;
  // 2D grid cases
  for (int k : {1, 2}) {
    const double R = 1.0;
    MappedGrid g(ConvexBody2D::circle(R), 32, 64);
    const auto rep = augmented_solve(g, k, Field::constant(binomial(2, k)),
                                     Field::constant(0.0));
    auto want = sample(g, [](double x, double y) { return 0.5 * (x * x + y * y); });
    g.make_mean_zero(want);
    const double lam_err = std::fabs(rep.lambda - R);
    const double field_err = max_abs_diff(rep.u, want);
    if (lam_err > 1e-3 || field_err > 1e-3) ok = false;
    os << "(2," << k << "): dlam " << lam_err << " du " << field_err << "; ";
  }
  // radial-oracle cases
  const std::pair<int, int> cases[] = {{3, 1}, {3, 2}, {3, 3}, {4, 2}};
  for (auto [n, k] : cases) {
    const double R = 1.0;
    const double fval = binomial(n, k);
    const auto sol = radial_solve(n, k, R, [fval](double) { return fval; });
    if (std::fabs(sol.lambda - R) > 1e-8) ok = false;
    os << "(" << n << "," << k << "): dlam " << std::fabs(sol.lambda - R) << "; ";
  }
  return ok;
}

bool c4_lambda_bound(std::ostringstream& os) {
  bool ok = true;
  // ball equality with f = C(n,k)
  for (int k : {1, 2}) {
    const auto body = ConvexBody2D::circle(1.0);
    const double bound =
        lambda_lower_bound(body, k, Field::constant(binomial(2, k)),
                           Field::constant(0.0));
    MappedGrid g(body, 32, 64);
    const auto rep = augmented_solve(g, k, Field::constant(binomial(2, k)),
                                     Field::constant(0.0));
    if (std::fabs(rep.lambda - bound) > 1e-3) ok = false;
    if (rep.lambda < bound - 1e-3 * (1 + std::fabs(bound))) ok = false;
  }
  // the bound holds on non-radial problems too (strict for k = 2)
  const auto e = ConvexBody2D::ellipse(2.0, 1.0);
  MappedGrid g(e, 32, 64);
  struct Case {
    int k;
    const char* f;
    const char* phi;
  } cases[] = {{1, "poly:1=1,x2=0.1", "poly:y=0.2"},
               {2, "const:1", "const:0"},
               {1, "radial:1.5,0,0.2", "const:0.1"}};
  for (const auto& c : cases) {
    const Field f = Field::parse(c.f), phi = Field::parse(c.phi);
    const double bound = lambda_lower_bound(e, c.k, f, phi);
    const auto rep = augmented_solve(g, c.k, f, phi);
    if (rep.lambda < bound - 1e-3 * (1 + std::fabs(bound))) ok = false;
    os << "k=" << c.k << " lam " << rep.lambda << " bound " << bound << "; ";
  }
  return ok;
}

bool c5_k1_oracle(std::ostringstream& os) {
  const auto body = ConvexBody2D::ellipse(2.0, 1.0);
  const std::pair<const char*, const char*> pairs[] = {
      {"const:1.3", "const:0"},
      {"poly:1=1,x2=0.3", "const:0.1"},
      {"poly:1=1,y=0.5", "poly:x=0.2"},
      {"radial:1,0,0.5", "poly:y=0.1"},
      {"poly:1=2,xy=0.2", "poly:x=0.1,y2=0.05"},
  };
  bool ok = true;
  for (const auto& [fs, ps] : pairs) {
    const Field f = Field::parse(fs), phi = Field::parse(ps);
    const double intf =
        body.integrate_interior([&](double x, double y) { return f(x, y); }, 64, 4096);
    const double intphi = body.integrate_boundary(
        [&](const BoundaryFrame& fr) { return phi(fr.point[0], fr.point[1]); },
        4096);
    const double oracle = (intf - intphi) / body.area(4096);
    // the scheme is second order; two grids plus Richardson reach the
    // quadrature tolerance
    MappedGrid g1(body, 64, 128), g2(body, 128, 256);
    const double l1 = augmented_solve(g1, 1, f, phi).lambda;
    const double l2 = augmented_solve(g2, 1, f, phi).lambda;
    const double lam = (4 * l2 - l1) / 3;
    const double err = std::fabs(lam - oracle);
    if (err > 1e-6) ok = false;
    os << fs << ": err " << err << "; ";
  }
  return ok;
}

bool c6_continuation_vs_augmented(std::ostringstream& os) {
  bool ok = true;
  struct Case {
    const char* name;
    ConvexBody2D body;
    int k;
  } cases[] = {{"disk", ConvexBody2D::circle(1.0), 2},
               {"ellipse", ConvexBody2D::ellipse(2.0, 1.0), 2},
               {"ellipse", ConvexBody2D::ellipse(2.0, 1.0), 1}};
  for (const auto& c : cases) {
    MappedGrid g(c.body, 32, 64);
    const Field f = Field::constant(binomial(2, c.k));
    const Field phi = Field::constant(0.0);
    const auto aug = augmented_solve(g, c.k, f, phi);
    const auto cont = continuation_solve(g, c.k, f, phi, default_eps_schedule());
    const double dlam = std::fabs(aug.lambda - cont.lambda);
    const double du = max_abs_diff(aug.u, cont.u);
    double lo = 1e300, hi = 0;
    for (const auto& st : cont.eps_trace) {
      lo = std::min(lo, st.grad_sup);
      hi = std::max(hi, st.grad_sup);
    }
    if (dlam > 5e-6 || du > 1e-5 || hi / lo > 1.1) ok = false;
    os << c.name << " k=" << c.k << ": dlam " << dlam << " du " << du
       << " grad-ratio " << hi / lo << "; ";
  }
  return ok;
}

bool c7_uniqueness(std::ostringstream& os) {
  MappedGrid g(ConvexBody2D::ellipse(2.0, 1.0), 32, 64);
  const Field f = Field::constant(1.0), phi = Field::constant(0.0);
  const auto a = augmented_solve(g, 2, f, phi, {}, AugmentedInit::Quadratic);
  const auto b = augmented_solve(g, 2, f, phi, {}, AugmentedInit::LaplaceSolution);
  const double dlam = std::fabs(a.lambda - b.lambda);
  double mean = 0;
  for (size_t i = 0; i < a.u.size(); ++i) mean += a.u[i] - b.u[i];
  mean /= static_cast<double>(a.u.size());
  double var = 0;
  for (size_t i = 0; i < a.u.size(); ++i) {
    const double d = a.u[i] - b.u[i] - mean;
    var += d * d;
  }
  const double sd = std::sqrt(var / static_cast<double>(a.u.size()));
  const double scale = std::max(std::fabs(a.u_min()), std::fabs(a.u_max()));
  os << "dlam " << dlam << " sd/scale " << sd / scale;
  return dlam <= 1e-8 && sd <= 1e-8 * scale;
}

bool c8_manufactured(std::ostringstream& os) {
  const auto body = ConvexBody2D::ellipse(2.0, 1.0);
  Eigen::Matrix2d M;
  M << 1.0, 0.3, 0.3, 0.7;
  bool ok = true;
  for (int k : {1, 2}) {
    const double fval = (k == 1) ? M.trace() : M.determinant();
    Field phi(
        [&body, M](double x, double y) {
          const double t = std::atan2(y, x);
          const Vec2 nu = body.normal(t);
          return (M * Eigen::Vector2d(x, y)).dot(Eigen::Vector2d(nu[0], nu[1]));
        },
        "manufactured");
    std::vector<double> errs;
    for (int ns : {32, 64, 128}) {
      MappedGrid g(body, ns, 2 * ns);
      const auto rep = augmented_solve(g, k, Field::constant(fval), phi);
      auto want = sample(g, [&](double x, double y) {
        Eigen::Vector2d v(x, y);
        return 0.5 * v.dot(M * v);
      });
      g.make_mean_zero(want);
      errs.push_back(max_abs_diff(rep.u, want) + std::fabs(rep.lambda));
    }
    const double order = std::log2(errs[0] / errs[2]) / 2;
    if (order < 1.7 || order > 2.3) ok = false;
    os << "k=" << k << ": errors " << errs[0] << " " << errs[1] << " " << errs[2]
       << " order " << order << "; ";
  }
  return ok;
}

bool c9_reilly_identity(std::ostringstream& os) {
  bool ok = true;
  // exact disk field
  AnalyticField2D half_r2{
      [](double x, double y) { return 0.5 * (x * x + y * y); },
      [](double x, double y) { return Vec2{x, y}; },
      [](double, double) { return Eigen::Matrix2d::Identity().eval(); },
  };
  const auto disk = reilly_identity(ConvexBody2D::circle(1.0), half_r2, 1);
  if (std::fabs(disk.lhs - 2 * kPi) > 1e-8 || std::fabs(disk.rhs - 2 * kPi) > 1e-8)
    ok = false;
  os << "disk lhs " << disk.lhs << " rhs " << disk.rhs << "; ";
  // mismatch decay on a computed solution
  const auto body = ConvexBody2D::ellipse(2.0, 1.0);
  std::vector<double> mm;
  for (int ns : {32, 64}) {
    MappedGrid g(body, ns, 2 * ns);
    const auto sol = augmented_solve(g, 1, Field::constant(2.0), Field::constant(0.0));
    const auto rep = reilly_identity(g, sol, 1);
    mm.push_back(std::fabs(rep.lhs - rep.rhs));
  }
  const double order = std::log2(mm[0] / mm[1]);
  if (order < 1.0) ok = false;
  os << "mismatch " << mm[0] << " -> " << mm[1] << " order " << order;
  return ok;
}

bool c10_reilly_inequality(std::ostringstream& os) {
  bool ok = true;
  // closed-form ball equality
  for (int n = 2; n <= 5; ++n) {
    for (int k = 1; k <= n - 1; ++k) {
      const auto rep = reilly_inequality_ball(BallGeometry(n, 1.1), k);
      if (rep.slack < -1e-8 || !rep.equality) ok = false;
    }
  }
  // disk: III below tolerance
  {
    MappedGrid g(ConvexBody2D::circle(1.0), 32, 64);
    const auto sol = augmented_solve(g, 1, Field::constant(2.0), Field::constant(0.0));
    const double iii = third_term_III(g, sol, 1);
    if (iii < -1e-8 || iii > 1e-6) ok = false;
    os << "disk III " << iii << "; ";
  }
  // ellipse and 20 random perturbed disks: strict slack from computed u
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> dd(0.05, 0.12);
  std::uniform_int_distribution<int> md(2, 3);
  double min_slack = 1e300, min_iii = 1e300;
  auto check_body = [&](const ConvexBody2D& b) {
    MappedGrid g(b, 32, 64);
    const auto sol = augmented_solve(g, 1, Field::constant(2.0), Field::constant(0.0));
    const auto rep = reilly_inequality(g, sol, 1, sol.lambda);
    const double iii = third_term_III(g, sol, 1);
    min_slack = std::min(min_slack, rep.slack);
    min_iii = std::min(min_iii, iii);
    if (!(rep.slack > 0) || iii < -1e-8) ok = false;
  };
  check_body(ConvexBody2D::ellipse(2.0, 1.0));
  int made = 0;
  while (made < 20) {
    try {
      check_body(ConvexBody2D::perturbed_disk(dd(rng), md(rng)));
      ++made;
    } catch (const std::exception&) {
      // non-convex draw; resample
    }
  }
  os << "min slack " << min_slack << " min III " << min_iii;
  return ok;
}

bool c11_af(std::ostringstream& os) {
  bool ok = true;
  const auto circ = af_inequality(ConvexBody2D::circle(1.0), 1);
  if (std::fabs(circ.relative_slack) > 1e-10) ok = false;
  const auto e = ConvexBody2D::ellipse(2.0, 1.0);
  const auto rep = af_inequality(e, 1);
  const auto fine = af_inequality(e, 1, 1 << 15);
  if (std::fabs(rep.lhs - fine.lhs) > 1e-6 * fine.lhs) ok = false;
  if (std::fabs(rep.rhs - fine.rhs) > 1e-6 * fine.rhs) ok = false;
  if (std::fabs(rep.lhs - 93.866) > 1e-2 || std::fabs(rep.rhs - 78.957) > 1e-2)
    ok = false;
  os << "ellipse " << rep.lhs << " >= " << rep.rhs << "; ";
  for (int n = 2; n <= 6; ++n) {
    for (int k = 1; k <= n - 1; ++k) {
      if (std::fabs(af_inequality(BallGeometry(n, 1.2), k).relative_slack) > 1e-12)
        ok = false;
    }
  }
  const auto mink = minkowski_inequality(e);
  if (std::fabs(mink.lhs - rep.lhs) > 1e-12 * rep.lhs ||
      std::fabs(mink.rhs - rep.rhs) > 1e-12 * rep.rhs)
    ok = false;
  os << "balls n<=6 equal; minkowski == af(k=1)";
  return ok;
}

bool c12_quermassintegral(std::ostringstream& os) {
  bool ok = true;
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> cd(-0.04, 0.04);
  int made = 0;
  double min_slack = 1e300;
  while (made < 20) {
    try {
      const auto b = ConvexBody2D::fourier(
          1.0, {{2, cd(rng)}, {3, cd(rng)}}, {{2, cd(rng)}});
      const auto rep = quermassintegral_chain(b);
      double mps = 0;
      for (const auto& [key, v] : rep.details) {
        if (key == "min_pairwise_slack") mps = v;
      }
      min_slack = std::min(min_slack, mps);
      if (mps < -1e-8) ok = false;
      ++made;
    } catch (const std::exception&) {
    }
  }
  for (int n = 2; n <= 6; ++n) {
    const auto rep = quermassintegral_chain(BallGeometry(n, 1.7));
    for (const auto& [key, v] : rep.details) {
      if (key.rfind("ratio", 0) == 0 && std::fabs(v - 1.7) > 1e-10) ok = false;
    }
  }
  os << "min pairwise slack " << min_slack << "; ball ratios equal";
  return ok;
}

}  // namespace

bool run_acceptance_battery(std::ostream& out) {
  const std::vector<Criterion> criteria = {
      {"criterion-1 algebraic kernel", c1_algebra},
      {"criterion-2 coefficient identity", c2_coefficient},
      {"criterion-3 ball solves", c3_ball_solves},
      {"criterion-4 lambda lower bound", c4_lambda_bound},
      {"criterion-5 k=1 oracle", c5_k1_oracle},
      {"criterion-6 continuation vs augmented", c6_continuation_vs_augmented},
      {"criterion-7 uniqueness", c7_uniqueness},
      {"criterion-8 manufactured convergence", c8_manufactured},
      {"criterion-9 reilly identity", c9_reilly_identity},
      {"criterion-10 reilly inequality", c10_reilly_inequality},
      {"criterion-11 alexandrov-fenchel", c11_af},
      {"criterion-12 quermassintegral chain", c12_quermassintegral},
  };
  bool all_ok = true;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : criteria) {
    const auto s0 = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
    out << (ok ? "PASS " : "FAIL ") << c.name << " [" << detail.str() << "] ("
        << secs << " s)\n";
    all_ok = all_ok && ok;
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << (all_ok ? "PASS" : "FAIL") << " suite total (" << total << " s)\n";
  return all_ok;
}

}  // namespace hn
