#ifndef HN_REPORT_IO_HPP
#define HN_REPORT_IO_HPP

#include <string>

#include "hn/report.hpp"
#include "hn/solver.hpp"

// Deterministic serialization: every numeric field is printed with %.17g so
// identical configs produce byte-identical files.

namespace hn {

std::string fmt17(double v);
std::string json_escape(const std::string& s);

/// SolveReport as JSON; `config` is echoed into the object, `u_mean` is the
/// volume-weighted mean of the reported field.
std::string solve_report_json(const SolveReport& r, double u_mean,
                              const std::string& config);

std::string inequality_report_json(const InequalityReport& r,
                                   const std::string& config);

std::string inequality_csv_header();
std::string inequality_csv_row(const std::string& body, int k,
                               const InequalityReport& r);

/// Plot-data table for sweep-eps: header then one row per stage.
std::string eps_trace_csv(const std::vector<EpsStage>& trace);

/// Structured error object for failed runs.
std::string error_json(const std::string& kind, const std::string& message,
                       const std::string& config);

}  // namespace hn

#endif  // HN_REPORT_IO_HPP
