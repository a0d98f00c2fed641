#include "pnflab/verdict.hpp"

#include "pnflab/invn.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace pnf {

VerdictReport inequality_verdict(std::string id, double lhs, double rhs, double tol) {
  VerdictReport r;
  r.id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tol = tol;
  r.pass = r.slack >= -tol;
  return r;
}

VerdictReport identity_verdict(std::string id, double lhs, double rhs, double tol) {
  VerdictReport r;
  r.id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = -std::abs(rhs - lhs);
  r.tol = tol;
  r.pass = r.slack >= -tol;
  return r;
}

const std::vector<std::string>& verdict_csv_header() {
  static const std::vector<std::string> header = {"inequality_id", "body_id", "density_id",
                                                  "rho",           "invN",    "resolution",
                                                  "lhs",           "rhs",     "slack",
                                                  "tol",           "pass"};
  return header;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_verdict_csv(std::ostream& os, const std::vector<VerdictReport>& rows) {
  const auto& header = verdict_csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    os << csv_field(r.id) << ',' << csv_field(r.body_id) << ',' << csv_field(r.density_id)
       << ',' << format_double(r.rho) << ',' << format_invN(r.invN) << ','
       << csv_field(r.resolution) << ',' << format_double(r.lhs) << ','
       << format_double(r.rhs) << ',' << format_double(r.slack) << ','
       << format_double(r.tol) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

}  // namespace pnf
