#ifndef HN_CLI_HPP
#define HN_CLI_HPP

#include <string>
#include <vector>

#include "hn/geometry.hpp"
#include "hn/fields.hpp"

namespace hn {

struct RunConfig {
  std::string command;  // solve | verify-af | verify-reilly | sweep-eps | suite
  std::string body_spec = "ball:1";
  int k = 1;
  std::string f_spec = "const:1";
  std::string phi_spec = "const:0";
  int n_s = 32;
  int n_theta = 64;
  std::string schedule_spec;  // empty = default
  std::string output_path;    // empty = stdout
  std::string format = "json";

  std::string canonical() const;  // one-line echo embedded in outputs
};

/// `ball:R`, `ellipse:a,b`, `fourier:c0[,am=v|bm=v...]`. Throws
/// std::invalid_argument naming the offending token.
ConvexBody2D parse_body(const std::string& spec);

/// "NxM" -> (N, M); throws on malformed input or resolution below 16x32.
std::pair<int, int> parse_grid(const std::string& spec);

/// Comma-separated strictly decreasing positive values.
std::vector<double> parse_schedule(const std::string& spec);

/// Parses argv into a RunConfig (throws CLI11 errors / invalid_argument) and
/// executes it. Returns the process exit code: 0 ok, 1 runtime failure,
/// 2 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace hn

#endif  // HN_CLI_HPP
