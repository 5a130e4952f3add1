#ifndef HN_REPORT_HPP
#define HN_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

namespace hn {

/// One verified inequality: lhs >= rhs when slack >= 0.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;          // lhs - rhs
  double relative_slack = 0.0; // slack / max(|lhs|, |rhs|, tiny)
  bool equality = false;       // |relative_slack| < tol_eq
  std::vector<std::pair<std::string, double>> resolution; // quadrature/grid info
  std::vector<std::pair<std::string, double>> details;    // extra values (e.g. chain ratios)

  static InequalityReport make(std::string name, double lhs, double rhs,
                               double tol_eq);
};

}  // namespace hn

#endif  // HN_REPORT_HPP
