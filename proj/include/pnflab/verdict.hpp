#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pnf {

// One checked inequality or identity. Invariant: pass == (slack >= -tol).
// Identities report slack = -|rhs - lhs| so the same invariant reads |rhs - lhs| <= tol.
struct VerdictReport {
  std::string id;
  std::string body_id;
  std::string density_id;
  double rho = 0.0;
  double invN = 0.0;
  std::string resolution;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
  double wall_seconds = 0.0;
};

// slack = rhs - lhs.
VerdictReport inequality_verdict(std::string id, double lhs, double rhs, double tol);
// slack = -|rhs - lhs|.
VerdictReport identity_verdict(std::string id, double lhs, double rhs, double tol);

const std::vector<std::string>& verdict_csv_header();
void write_verdict_csv(std::ostream& os, const std::vector<VerdictReport>& rows);
// Shortest round-trip decimal, used for every numeric CSV cell.
std::string format_double(double x);

}  // namespace pnf
