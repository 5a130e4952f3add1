#include "hn/fields.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hn {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& tok) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("field spec: bad number '" + tok + "'");
  }
  if (pos != tok.size()) throw std::invalid_argument("field spec: bad number '" + tok + "'");
  return v;
}

// Monomial keys: "1", "x", "y", "x2", "xy", "x2y3", ...
std::pair<int, int> parse_monomial(const std::string& key) {
  if (key == "1") return {0, 0};
  int p = 0, q = 0;
  size_t i = 0;
  auto read_power = [&](char var, int& out) {
    if (i < key.size() && key[i] == var) {
      ++i;
      size_t start = i;
      while (i < key.size() && std::isdigit(static_cast<unsigned char>(key[i]))) ++i;
      out = (i == start) ? 1 : std::stoi(key.substr(start, i - start));
    }
  };
  read_power('x', p);
  read_power('y', q);
  if (i != key.size() || (p == 0 && q == 0)) {
    throw std::invalid_argument("field spec: bad monomial '" + key + "'");
  }
  return {p, q};
}

}  // namespace

Field Field::constant(double v) {
  std::ostringstream os;
  os << "const:" << v;
  return Field([v](double, double) { return v; }, os.str());
}

Field Field::poly(const std::vector<std::array<double, 3>>& terms) {
  std::ostringstream os;
  os << "poly:";
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) os << ",";
    os << "x" << terms[i][0] << "y" << terms[i][1] << "=" << terms[i][2];
  }
  return Field(
      [terms](double x, double y) {
        double acc = 0;
        for (const auto& t : terms) acc += t[2] * std::pow(x, t[0]) * std::pow(y, t[1]);
        return acc;
      },
      os.str());
}

Field Field::radial(const std::vector<double>& coeffs) {
  std::ostringstream os;
  os << "radial:";
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << ",";
    os << coeffs[i];
  }
  return Field(
      [coeffs](double x, double y) {
        double r = std::sqrt(x * x + y * y);
        double acc = 0, rp = 1;
        for (double c : coeffs) {
          acc += c * rp;
          rp *= r;
        }
        return acc;
      },
      os.str());
}

Field Field::parse(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("field spec: missing ':' in '" + spec + "'");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "const") {
    return constant(parse_double(rest));
  }
  if (kind == "poly") {
    std::vector<std::array<double, 3>> terms;
    for (const auto& tok : split(rest, ',')) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("field spec: expected key=value, got '" + tok + "'");
      }
      auto [p, q] = parse_monomial(tok.substr(0, eq));
      terms.push_back({double(p), double(q), parse_double(tok.substr(eq + 1))});
    }
    Field f = poly(terms);
    return Field([f](double x, double y) { return f(x, y); }, "poly:" + rest);
  }
  if (kind == "radial") {
    std::vector<double> coeffs;
    for (const auto& tok : split(rest, ',')) coeffs.push_back(parse_double(tok));
    return radial(coeffs);
  }
  throw std::invalid_argument("field spec: unknown kind '" + kind + "'");
}

}  // namespace hn
