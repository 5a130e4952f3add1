#ifndef HN_FIELDS_HPP
#define HN_FIELDS_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

// Named analytic scalar fields used for f and phi. Fields are evaluated at
// nodes directly; there is no interpolation from sampled data.

namespace hn {

class Field {
 public:
  Field() : fn_([](double, double) { return 0.0; }), spec_("const:0") {}
  Field(std::function<double(double, double)> fn, std::string spec)
      : fn_(std::move(fn)), spec_(std::move(spec)) {}

  double operator()(double x, double y) const { return fn_(x, y); }
  const std::string& spec() const { return spec_; }

  static Field constant(double v);
  /// Bivariate polynomial sum c * x^p y^q from (p, q, c) terms.
  static Field poly(const std::vector<std::array<double, 3>>& terms);
  /// Radial polynomial sum c_j r^j from coefficients c_0, c_1, ...
  static Field radial(const std::vector<double>& coeffs);

  /// Parse a field spec string: `const:v`, `poly:x2=0.3,y=1,...`,
  /// `radial:c0,c1,...`. Throws std::invalid_argument naming the bad token.
  static Field parse(const std::string& spec);

 private:
  std::function<double(double, double)> fn_;
  std::string spec_;
};

}  // namespace hn

#endif  // HN_FIELDS_HPP
