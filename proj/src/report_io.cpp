#include "hn/report_io.hpp"

#include <cstdio>
#include <sstream>

namespace hn {

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

namespace {

void append_kv_object(std::ostringstream& os,
                      const std::vector<std::pair<std::string, double>>& kv) {
  os << "{";
  for (size_t i = 0; i < kv.size(); ++i) {
    if (i) os << ",";
    os << "\"" << json_escape(kv[i].first) << "\":" << fmt17(kv[i].second);
  }
  os << "}";
}

}  // namespace

std::string solve_report_json(const SolveReport& r, double u_mean,
                              const std::string& config) {
  std::ostringstream os;
  os << "{";
  os << "\"config\":\"" << json_escape(config) << "\",";
  os << "\"lambda\":" << fmt17(r.lambda) << ",";
  os << "\"residual_norm\":" << fmt17(r.residual_norm) << ",";
  os << "\"newton_iters\":" << r.newton_iters << ",";
  os << "\"eps_trace\":[";
  for (size_t i = 0; i < r.eps_trace.size(); ++i) {
    if (i) os << ",";
    os << "{\"eps\":" << fmt17(r.eps_trace[i].eps)
       << ",\"lambda_eps\":" << fmt17(r.eps_trace[i].lambda_eps)
       << ",\"grad_sup\":" << fmt17(r.eps_trace[i].grad_sup) << "}";
  }
  os << "],";
  os << "\"u_stats\":{\"min\":" << fmt17(r.u_min())
     << ",\"max\":" << fmt17(r.u_max()) << ",\"mean\":" << fmt17(u_mean) << "}";
  os << "}\n";
  return os.str();
}

std::string inequality_report_json(const InequalityReport& r,
                                   const std::string& config) {
  std::ostringstream os;
  os << "{";
  os << "\"config\":\"" << json_escape(config) << "\",";
  os << "\"name\":\"" << json_escape(r.name) << "\",";
  os << "\"lhs\":" << fmt17(r.lhs) << ",";
  os << "\"rhs\":" << fmt17(r.rhs) << ",";
  os << "\"slack\":" << fmt17(r.slack) << ",";
  os << "\"relative_slack\":" << fmt17(r.relative_slack) << ",";
  os << "\"equality\":" << (r.equality ? "true" : "false") << ",";
  os << "\"resolution\":";
  append_kv_object(os, r.resolution);
  if (!r.details.empty()) {
    os << ",\"details\":";
    append_kv_object(os, r.details);
  }
  os << "}\n";
  return os.str();
}

std::string inequality_csv_header() {
  return "body,k,check,lhs,rhs,slack,relative_slack,equality\n";
}

std::string inequality_csv_row(const std::string& body, int k,
                               const InequalityReport& r) {
  std::ostringstream os;
  os << body << "," << k << "," << r.name << "," << fmt17(r.lhs) << ","
     << fmt17(r.rhs) << "," << fmt17(r.slack) << "," << fmt17(r.relative_slack)
     << "," << (r.equality ? "true" : "false") << "\n";
  return os.str();
}

std::string eps_trace_csv(const std::vector<EpsStage>& trace) {
  std::ostringstream os;
  os << "eps,lambda_eps,grad_sup\n";
  for (const auto& st : trace) {
    os << fmt17(st.eps) << "," << fmt17(st.lambda_eps) << ","
       << fmt17(st.grad_sup) << "\n";
  }
  return os.str();
}

std::string error_json(const std::string& kind, const std::string& message,
                       const std::string& config) {
  std::ostringstream os;
  os << "{\"config\":\"" << json_escape(config) << "\",\"error\":{\"kind\":\""
     << json_escape(kind) << "\",\"message\":\"" << json_escape(message)
     << "\"}}\n";
  return os.str();
}

}  // namespace hn
