#include "pnflab/invn.hpp"

#include "pnflab/common.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace pnf {

bool is_minus_inf(double invN) { return std::isinf(invN) && invN < 0; }

double dim_ratio(double invN) {
  if (is_minus_inf(invN)) return kInf;
  return 1.0 - invN;
}

double inverse_dim_ratio(double invN) {
  if (is_minus_inf(invN)) return 0.0;
  return 1.0 / (1.0 - invN);
}

double dv_coefficient(double invN, int n) {
  if (invN == 0.0) return 0.0;
  if (is_minus_inf(invN)) return -1.0 / n;
  const double denom = 1.0 - n * invN;
  if (std::abs(denom) < 1e-14) return kInf;
  return invN / denom;
}

void validate_invN(double invN, int n) {
  if (std::isnan(invN) || (std::isinf(invN) && invN > 0)) {
    throw Error(ErrorKind::ConventionViolation, "invN must be finite or -inf");
  }
  if (invN > 1.0 / n + 1e-14) {
    throw Error(ErrorKind::ConventionViolation,
                "invN = " + format_invN(invN) + " exceeds 1/n for n = " + std::to_string(n));
  }
}

namespace {

double parse_double_strict(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorKind::Config, "malformed number '" + s + "'");
  }
  return v;
}

}  // namespace

double parse_invN(const std::string& text) {
  if (text == "-inf" || text == "-infinity") return -kInf;
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const double p = parse_double_strict(text.substr(0, slash));
    const double q = parse_double_strict(text.substr(slash + 1));
    if (q == 0.0) throw Error(ErrorKind::Config, "zero denominator in invN '" + text + "'");
    return p / q;
  }
  const double v = parse_double_strict(text);
  if (std::isnan(v) || (std::isinf(v) && v > 0)) {
    throw Error(ErrorKind::Config, "invN must be a rational, 0, or -inf");
  }
  return v;
}

std::string format_invN(double invN) {
  if (is_minus_inf(invN)) return "-inf";
  if (invN == 0.0) return "0";
  for (int q = 1; q <= 12; ++q) {
    const double p = std::round(invN * q);
    if (std::abs(p / q - invN) < 1e-15 * std::max(1.0, std::abs(invN))) {
      if (q == 1) return std::to_string(static_cast<long long>(p));
      return std::to_string(static_cast<long long>(p)) + "/" + std::to_string(q);
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", invN);
  return buf;
}

double bm_transform(double v, double v0, double invN) {
  if (is_minus_inf(invN)) {
    throw Error(ErrorKind::ConventionViolation, "N v^{1/N} is undefined at N = 0");
  }
  const double lr = std::log(v / v0);
  if (invN == 0.0) return lr;
  return std::expm1(invN * lr) / invN;
}

}  // namespace pnf
