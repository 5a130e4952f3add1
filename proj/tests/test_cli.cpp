#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hn/cli.hpp"

using namespace hn;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Spawns the installed binary; returns the exit code and captures stdout.
int run_cli(const std::string& args, std::string* out = nullptr) {
  const std::string tmp = "/tmp/hn_cli_out.txt";
  const std::string cmd =
      std::string(HN_CLI_PATH) + " " + args + " > " + tmp + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (out) *out = slurp(tmp);
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("parse_body") {
  CHECK(parse_body("ball:1").is_circle());
  CHECK(parse_body("ball:2.5").circle_radius() == doctest::Approx(2.5));
  const auto e = parse_body("ellipse:2,1");
  CHECK(e.rho(0.0) == doctest::Approx(2.0));
  CHECK(e.rho(1.5707963267948966) == doctest::Approx(1.0));
  const auto f = parse_body("fourier:1,a3=0.1");
  CHECK(f.rho(0.0) == doctest::Approx(1.1));
  CHECK_FALSE(f.is_circle());
  parse_body("fourier:1,a2=0.02,b2=0.03");

  CHECK_THROWS_AS(parse_body("ball"), std::invalid_argument);
  CHECK_THROWS_AS(parse_body("ball:1,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_body("ellipse:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_body("torus:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_body("fourier:1,c3=0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_body("fourier:1,a0=0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_body("ball:abc"), std::invalid_argument);
  // a valid spec can still name a non-convex body
  CHECK_THROWS(parse_body("fourier:1,a3=0.5"));
}

TEST_CASE("parse_grid") {
  CHECK(parse_grid("64x128") == std::pair{64, 128});
  CHECK(parse_grid("16x32") == std::pair{16, 32});
  CHECK_THROWS_AS(parse_grid("8x32"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("64x16"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("64"), std::invalid_argument);
  CHECK_THROWS(parse_grid("ax32"));
}

TEST_CASE("parse_schedule") {
  const auto s = parse_schedule("0.5,0.25,0.125");
  REQUIRE(s.size() == 3);
  CHECK(s[2] == doctest::Approx(0.125));
  CHECK_THROWS_AS(parse_schedule("0.5,0.6"), std::invalid_argument);
  CHECK_THROWS_AS(parse_schedule("0.5,0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_schedule("0.5,-0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_schedule(""), std::invalid_argument);
}

TEST_CASE("field spec parsing") {
  CHECK(Field::parse("const:2")(0.3, -0.7) == doctest::Approx(2.0));
  CHECK(Field::parse("poly:1=1,x2=0.3")(2, 0) == doctest::Approx(2.2));
  CHECK(Field::parse("poly:xy=0.5")(2, 3) == doctest::Approx(3.0));
  CHECK(Field::parse("radial:1,0,0.5")(0.6, 0.8) == doctest::Approx(1.5));
  CHECK_THROWS_AS(Field::parse("spline:1"), std::invalid_argument);
  CHECK_THROWS_AS(Field::parse("const:zz"), std::invalid_argument);
}

TEST_CASE("run config echo") {
  RunConfig cfg;
  cfg.command = "solve";
  cfg.body_spec = "ellipse:2,1";
  cfg.k = 2;
  CHECK(cfg.canonical() ==
        "solve --body ellipse:2,1 --k 2 --f const:1 --phi const:0 "
        "--grid 32x64 --format json");
}

TEST_CASE("cli solve on the unit ball") {
  std::string out;
  const int rc = run_cli(
      "solve --body ball:1 --k 2 --f const:1 --phi const:0 --grid 16x32", &out);
  CHECK(rc == 0);
  // lambda = R = 1 for sigma_2(D^2 u) = 1 = C(2,2) on the unit disk
  const auto pos = out.find("\"lambda\":");
  REQUIRE(pos != std::string::npos);
  const double lam = std::strtod(out.c_str() + pos + 9, nullptr);
  CHECK(lam == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(out.find("\"eps_trace\"") != std::string::npos);
  CHECK(out.find("\"u_stats\"") != std::string::npos);
}

TEST_CASE("cli solve accepts the documented invocation") {
  std::string out;
  const int rc = run_cli(
      "solve --body ellipse:2,1 --k 2 --f const:1 --phi const:0 --grid 64x128",
      &out);
  CHECK(rc == 0);
  CHECK(out.find("\"lambda\":") != std::string::npos);
}

TEST_CASE("cli verify-af") {
  std::string out;
  CHECK(run_cli("verify-af --body ball:1 --k 1", &out) == 0);
  CHECK(out.find("\"equality\":true") != std::string::npos);
  CHECK(run_cli("verify-af --body fourier:1,a3=0.1 --k 1", &out) == 0);
  CHECK(out.find("\"slack\":") != std::string::npos);
  // planar AF verification is a k = 1 statement
  CHECK(run_cli("verify-af --body ball:1 --k 2", &out) == 2);
}

TEST_CASE("cli verify-reilly emits identity and inequality reports") {
  std::string out;
  const int rc = run_cli(
      "verify-reilly --body ellipse:2,1 --k 1 --f const:2 --phi const:0 "
      "--grid 16x32",
      &out);
  CHECK(rc == 0);
  CHECK(out.find("\"name\":\"reilly-identity\"") != std::string::npos);
  CHECK(out.find("\"name\":\"reilly-inequality\"") != std::string::npos);
  CHECK(out.find("\"III\"") != std::string::npos);
}

TEST_CASE("cli sweep-eps prints a plot table") {
  std::string out;
  const int rc = run_cli(
      "sweep-eps --body ball:1 --k 1 --f const:2 --phi const:0 --grid 16x32 "
      "--schedule 0.5,0.25,0.125",
      &out);
  CHECK(rc == 0);
  std::istringstream is(out);
  std::string line;
  std::getline(is, line);
  CHECK(line == "eps,lambda_eps,grad_sup");
  int rows = 0;
  while (std::getline(is, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("cli usage errors exit with 2") {
  CHECK(run_cli("solve --body ball:1 --k 1 --f const:-1") == 2);
  CHECK(run_cli("solve --body ball:1 --k 3") == 2);
  CHECK(run_cli("solve --grid 8x16") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("solve --format yaml") == 2);
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli output is deterministic") {
  const std::string a = "/tmp/hn_det_a.json", b = "/tmp/hn_det_b.json";
  const std::string args =
      "solve --body ellipse:2,1 --k 1 --f poly:1=1,x2=0.1 --phi const:0 "
      "--grid 16x32 --out ";
  REQUIRE(run_cli(args + a) == 0);
  REQUIRE(run_cli(args + b) == 0);
  const std::string sa = slurp(a), sb = slurp(b);
  CHECK(sa == sb);
  CHECK_FALSE(sa.empty());
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("cli csv format") {
  std::string out;
  const int rc = run_cli(
      "solve --body ball:1 --k 1 --f const:2 --phi const:0 --grid 16x32 "
      "--format csv",
      &out);
  CHECK(rc == 0);
  CHECK(out.rfind("field,value\nlambda,", 0) == 0);
}
