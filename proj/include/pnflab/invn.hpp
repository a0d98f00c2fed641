#pragma once

// invN = 1/N is the stored dimension parameter. invN = 0 encodes N = ∞ and
// invN = -∞ encodes N = 0. Every N-dependent coefficient goes through these helpers.

#include <string>

namespace pnf {

// (N-1)/N. Infinite at invN = -∞.
double dim_ratio(double invN);

// N/(N-1). Zero at invN = -∞, one at invN = 0.
double inverse_dim_ratio(double invN);

// 1/(N-n), the coefficient of dV⊗dV. Zero at N = ∞, -1/n at N = 0, +∞ at N = n.
double dv_coefficient(double invN, int n);

// Throws ConventionViolation unless invN ∈ [-∞, 1/n].
void validate_invN(double invN, int n);

bool is_minus_inf(double invN);

// Accepts "0", "-inf", "p/q", or a decimal literal.
double parse_invN(const std::string& text);
std::string format_invN(double invN);

// N·(v/v0)^{1/N} shifted by the constant N, i.e. (exp(invN log(v/v0)) - 1)/invN,
// which tends to log(v/v0) at invN = 0. The shift leaves second differences unchanged.
// Callers pass v0 ≤ v so that very negative invN cannot overflow.
double bm_transform(double v, double v0, double invN);

}  // namespace pnf
