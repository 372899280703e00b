#pragma once

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "evolve/suite.hpp"

namespace evolve::io {

// Keys keep insertion order; doubles are written round-trip exact and
// non-finite values as null.
using Json = nlohmann::ordered_json;

inline Json optional_number(const std::optional<double>& x) {
  return x ? Json(*x) : Json(nullptr);
}

inline Json to_json(const TransportReport& r) {
  Json j;
  j["scenario"] = r.scenario;
  j["field"] = r.field;
  j["t"] = r.t;
  j["h"] = r.h;
  j["rule"] = r.rule;
  j["order"] = r.order;
  j["lhs"] = r.lhs;
  j["rhs_bulk"] = r.rhs_bulk;
  j["rhs_boundary"] = r.rhs_boundary;
  j["rhs"] = r.rhs;
  j["abs_residual"] = r.abs_residual;
  j["rel_residual"] = r.rel_residual;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["lhs_error_indicator"] = r.lhs_error_indicator;
  j["bulk_error_indicator"] = r.bulk_error_indicator;
  j["boundary_error_indicator"] = r.boundary_error_indicator;
  j["reference_lhs"] = optional_number(r.reference_lhs);
  j["convergence_slope"] = optional_number(r.convergence_slope);
  j["failure"] = r.failure;
  return j;
}

inline Json to_json(const ValidationCheck& c) {
  Json j;
  j["name"] = c.name;
  j["passed"] = c.passed;
  j["max_violation"] = c.max_violation;
  j["tolerance"] = c.tolerance;
  j["samples"] = c.samples;
  j["skipped"] = c.skipped;
  return j;
}

inline Json to_json(const std::string& scenario, const ValidationReport& v) {
  Json j;
  j["scenario"] = scenario;
  j["t"] = v.t;
  j["passed"] = v.passed();
  j["checks"] = Json::array();
  for (const auto& c : v.checks) j["checks"].push_back(to_json(c));
  return j;
}

inline Json to_json(const CheckRecord& c) {
  Json j;
  j["check"] = c.check;
  j["scenario"] = c.scenario;
  j["detail"] = c.detail;
  j["value"] = c.value;
  j["reference"] = c.reference;
  j["error"] = c.error;
  j["tolerance"] = c.tolerance;
  j["passed"] = c.passed;
  return j;
}

inline Json to_json(const std::vector<TransportReport>& reports) {
  Json j;
  bool ok = true;
  j["transport"] = Json::array();
  for (const auto& r : reports) {
    ok = ok && r.passed;
    j["transport"].push_back(to_json(r));
  }
  Json doc;
  doc["passed"] = ok;
  doc["transport"] = std::move(j["transport"]);
  return doc;
}

inline Json to_json(const SuiteResult& s) {
  Json j;
  j["passed"] = s.passed();
  j["transport"] = Json::array();
  for (const auto& r : s.transport) j["transport"].push_back(to_json(r));
  j["validation"] = Json::array();
  for (const auto& [name, v] : s.validation) j["validation"].push_back(to_json(name, v));
  j["checks"] = Json::array();
  for (const auto& c : s.checks) j["checks"].push_back(to_json(c));
  return j;
}

inline Json to_json(const SweepResult& s) {
  Json j;
  j["scenario"] = s.scenario;
  j["field"] = s.field;
  j["t"] = s.t;
  j["parameter"] = to_string(s.parameter);
  j["error_metric"] = s.error_metric;
  j["slope"] = s.slope;
  j["monotone"] = s.monotone;
  j["points"] = Json::array();
  j["transport"] = Json::array();
  for (const auto& p : s.points) {
    j["points"].push_back(Json{{"value", p.value}, {"error", p.error}});
    if (p.report) j["transport"].push_back(to_json(*p.report));
  }
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// CSV: 17 significant digits, non-finite values left empty.
inline std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_number(double x) { return std::isfinite(x) ? number(x) : ""; }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline const char* csv_header() {
  return "scenario,field,t,h,rule,order,lhs,rhs_bulk,rhs_boundary,rhs,abs_residual,"
         "rel_residual,tolerance,passed,lhs_error_indicator,bulk_error_indicator,"
         "boundary_error_indicator,reference_lhs,convergence_slope,failure";
}

inline std::string csv_row(const TransportReport& r) {
  std::ostringstream os;
  os << csv_field(r.scenario) << ',' << csv_field(r.field) << ',' << csv_number(r.t) << ','
     << csv_number(r.h) << ',' << r.rule << ',' << r.order << ',' << csv_number(r.lhs) << ','
     << csv_number(r.rhs_bulk) << ',' << csv_number(r.rhs_boundary) << ','
     << csv_number(r.rhs) << ',' << csv_number(r.abs_residual) << ','
     << csv_number(r.rel_residual) << ',' << csv_number(r.tolerance) << ','
     << (r.passed ? "true" : "false") << ',' << csv_number(r.lhs_error_indicator) << ','
     << csv_number(r.bulk_error_indicator) << ',' << csv_number(r.boundary_error_indicator)
     << ',' << (r.reference_lhs ? csv_number(*r.reference_lhs) : "") << ','
     << (r.convergence_slope ? csv_number(*r.convergence_slope) : "") << ','
     << csv_field(r.failure);
  return os.str();
}

inline std::string to_csv(const std::vector<TransportReport>& reports) {
  std::string out = std::string(csv_header()) + "\n";
  for (const auto& r : reports) out += csv_row(r) + "\n";
  return out;
}

inline std::string to_csv(const SweepResult& s) {
  std::string out = std::string("parameter,value,error,") + csv_header() + "\n";
  for (const auto& p : s.points) {
    out += std::string(to_string(s.parameter)) + "," + csv_number(p.value) + "," +
           csv_number(p.error) + ",";
    out += p.report ? csv_row(*p.report) : std::string();
    out += "\n";
  }
  return out;
}

inline std::string to_csv(const std::string& scenario,
                          const std::vector<ValidationReport>& reports) {
  std::string out = "scenario,t,check,passed,max_violation,tolerance,samples,skipped\n";
  for (const auto& rep : reports) {
    for (const auto& c : rep.checks) {
      out += csv_field(scenario) + "," + csv_number(rep.t) + "," + csv_field(c.name) + "," +
             (c.passed ? "true" : "false") + "," + csv_number(c.max_violation) + "," +
             csv_number(c.tolerance) + "," + std::to_string(c.samples) + "," +
             std::to_string(c.skipped) + "\n";
    }
  }
  return out;
}

// Human-readable table for the terminal.
inline void print_table(std::ostream& os, const std::vector<TransportReport>& reports) {
  os << std::left << std::setw(20) << "scenario" << std::setw(13) << "field"
     << std::right << std::setw(9) << "t" << std::setw(20) << "lhs" << std::setw(20)
     << "rhs" << std::setw(12) << "rel_resid" << "  status\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(20) << r.scenario << std::setw(13) << r.field << std::right
       << std::setw(9) << std::setprecision(4) << r.t << std::setw(20)
       << std::setprecision(12) << r.lhs << std::setw(20) << r.rhs << std::setw(12)
       << std::setprecision(3) << r.rel_residual << "  "
       << (r.passed ? "pass" : (r.failure.empty() ? "FAIL" : "ERROR: " + r.failure)) << "\n";
  }
}

}  // namespace evolve::io
