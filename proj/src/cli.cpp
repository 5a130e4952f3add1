#include "hn/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hn/acceptance.hpp"
#include "hn/grid.hpp"
#include "hn/reilly.hpp"
#include "hn/report_io.hpp"
#include "hn/solver.hpp"

namespace hn {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, sep)) out.push_back(tok);
  return out;
}

double to_double(const std::string& tok) {
  size_t pos = 0;
  double v = std::stod(tok, &pos);
  if (pos != tok.size()) throw std::invalid_argument("bad number: '" + tok + "'");
  return v;
}

}  // namespace

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << command << " --body " << body_spec << " --k " << k << " --f " << f_spec
     << " --phi " << phi_spec << " --grid " << n_s << "x" << n_theta;
  if (!schedule_spec.empty()) os << " --schedule " << schedule_spec;
  os << " --format " << format;
  return os.str();
}

ConvexBody2D parse_body(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("body spec needs family:args, got '" + spec + "'");
  }
  const std::string family = spec.substr(0, colon);
  const auto args = split(spec.substr(colon + 1), ',');
  if (family == "ball") {
    if (args.size() != 1) throw std::invalid_argument("ball spec takes one radius");
    return ConvexBody2D::circle(to_double(args[0]));
  }
  if (family == "ellipse") {
    if (args.size() != 2) throw std::invalid_argument("ellipse spec takes a,b");
    return ConvexBody2D::ellipse(to_double(args[0]), to_double(args[1]));
  }
  if (family == "fourier") {
    if (args.empty()) throw std::invalid_argument("fourier spec needs c0");
    const double c0 = to_double(args[0]);
    std::map<int, double> am, bm;
    for (size_t i = 1; i < args.size(); ++i) {
      const auto eq = args[i].find('=');
      if (eq == std::string::npos || eq < 2 ||
          (args[i][0] != 'a' && args[i][0] != 'b')) {
        throw std::invalid_argument("bad fourier term: '" + args[i] + "'");
      }
      const int m = std::stoi(args[i].substr(1, eq - 1));
      if (m < 1) throw std::invalid_argument("bad fourier mode: '" + args[i] + "'");
      const double v = to_double(args[i].substr(eq + 1));
      (args[i][0] == 'a' ? am : bm)[m] = v;
    }
    return ConvexBody2D::fourier(c0, am, bm);
  }
  throw std::invalid_argument("unknown body family: '" + family + "'");
}

std::pair<int, int> parse_grid(const std::string& spec) {
  const auto x = spec.find('x');
  if (x == std::string::npos) {
    throw std::invalid_argument("grid spec must be NxM, got '" + spec + "'");
  }
  const int ns = std::stoi(spec.substr(0, x));
  const int nt = std::stoi(spec.substr(x + 1));
  if (ns < 16 || nt < 32) {
    throw std::invalid_argument("grid resolution must be at least 16x32");
  }
  return {ns, nt};
}

std::vector<double> parse_schedule(const std::string& spec) {
  std::vector<double> out;
  for (const auto& tok : split(spec, ',')) {
    const double v = to_double(tok);
    if (!(v > 0)) throw std::invalid_argument("schedule entries must be positive");
    if (!out.empty() && v >= out.back()) {
      throw std::invalid_argument("schedule must be strictly decreasing");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty schedule");
  return out;
}

namespace {

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void check_f_positive_const(const std::string& f_spec) {
  if (f_spec.rfind("const:", 0) == 0) {
    const double v = to_double(f_spec.substr(6));
    if (!(v > 0)) {
      throw std::invalid_argument("f must be positive, got " + f_spec);
    }
  }
}

int run(const RunConfig& cfg) {
  if (const char* t = std::getenv("HN_THREADS")) {
    const int nt = std::atoi(t);
    if (nt > 0) Eigen::setNbThreads(nt);
  }
  const std::string config = cfg.canonical();

  if (cfg.command == "suite") {
    return run_acceptance_battery(std::cout) ? 0 : 1;
  }

  const ConvexBody2D body = parse_body(cfg.body_spec);
  Output out(cfg.output_path);

  if (cfg.command == "verify-af") {
    if (cfg.k != 1) {
      throw std::invalid_argument("verify-af: planar bodies support k = 1");
    }
    const InequalityReport af = af_inequality(body, 1);
    if (cfg.format == "csv") {
      out.os() << inequality_csv_header()
               << inequality_csv_row(cfg.body_spec, 1, af);
    } else {
      out.os() << inequality_report_json(af, config);
    }
    return 0;
  }

  const Field f = Field::parse(cfg.f_spec);
  const Field phi = Field::parse(cfg.phi_spec);
  MappedGrid grid(body, cfg.n_s, cfg.n_theta);

  try {
    if (cfg.command == "solve" || cfg.command == "sweep-eps") {
      const std::vector<double> sched = cfg.schedule_spec.empty()
                                            ? default_eps_schedule()
                                            : parse_schedule(cfg.schedule_spec);
      const SolveReport rep = continuation_solve(grid, cfg.k, f, phi, sched);
      if (cfg.command == "sweep-eps") {
        if (cfg.output_path.empty()) {
          out.os() << eps_trace_csv(rep.eps_trace);
        } else {
          out.os() << solve_report_json(rep, grid.mean(rep.u), config);
          std::ofstream table(cfg.output_path + ".csv");
          table << eps_trace_csv(rep.eps_trace);
        }
      } else if (cfg.format == "csv") {
        out.os() << "field,value\nlambda," << fmt17(rep.lambda)
                 << "\nresidual_norm," << fmt17(rep.residual_norm)
                 << "\nnewton_iters," << rep.newton_iters << "\n";
      } else {
        out.os() << solve_report_json(rep, grid.mean(rep.u), config);
      }
      return 0;
    }

    if (cfg.command == "verify-reilly") {
      const SolveReport sol = augmented_solve(grid, cfg.k, f, phi);
      std::vector<InequalityReport> reports;
      reports.push_back(reilly_identity(grid, sol, cfg.k));
      // the inequality needs constant Neumann data u_nu = lambda + phi
      if (cfg.phi_spec.rfind("const:", 0) == 0) {
        const double c = sol.lambda + to_double(cfg.phi_spec.substr(6));
        if (c > 0) reports.push_back(reilly_inequality(grid, sol, cfg.k, c));
      }
      if (cfg.format == "csv") {
        out.os() << inequality_csv_header();
        for (const auto& r : reports) {
          out.os() << inequality_csv_row(cfg.body_spec, cfg.k, r);
        }
      } else {
        for (const auto& r : reports) {
          out.os() << inequality_report_json(r, config);
        }
      }
      return 0;
    }
  } catch (const ConeBreakdownError& e) {
    out.os() << error_json("cone-breakdown", e.what(), config);
    return 1;
  } catch (const NonConvergenceError& e) {
    out.os() << error_json("non-convergence", e.what(), config);
    return 1;
  } catch (const ContinuationDivergenceError& e) {
    out.os() << error_json("continuation-divergence", e.what(), config);
    return 1;
  } catch (const std::runtime_error& e) {
    out.os() << error_json("runtime", e.what(), config);
    return 1;
  }

  throw std::invalid_argument("unknown command: " + cfg.command);
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"k-Hessian Neumann solver and convexity-inequality verifier"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string grid_spec = "32x64";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--body", cfg.body_spec, "body spec (ball:R | ellipse:a,b | fourier:c0[,am=v,bm=v...])");
    sub->add_option("--k", cfg.k, "Hessian order k")->check(CLI::PositiveNumber);
    sub->add_option("--f", cfg.f_spec, "right-hand side spec");
    sub->add_option("--phi", cfg.phi_spec, "Neumann data spec");
    sub->add_option("--grid", grid_spec, "resolution NxM (radial x angular)");
    sub->add_option("--schedule", cfg.schedule_spec, "decreasing eps schedule");
    sub->add_option("--out", cfg.output_path, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    return sub;
  };
  for (const char* name : {"solve", "verify-af", "verify-reilly", "sweep-eps"}) {
    add_common(app.add_subcommand(name));
  }
  app.add_subcommand("suite", "run the acceptance battery");

  try {
    app.parse(argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();
    std::tie(cfg.n_s, cfg.n_theta) = parse_grid(grid_spec);
    check_f_positive_const(cfg.f_spec);
    if (cfg.k < 1 || cfg.k > 2) {
      throw std::invalid_argument("k must be 1 or 2 in the plane");
    }
    return run(cfg);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0, usage errors exit 2
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hn
