#pragma once

#include "pnflab/density.hpp"
#include "pnflab/verdict.hpp"

#include <array>
#include <string>
#include <vector>

namespace pnf {

// One angular mode u = U(r) cos kθ of a weighted Laplace problem on the disc of radius R.
struct RadialProblem {
  enum class BC { Neumann, Dirichlet };
  double R = 1.0;
  Density density = Density::lebesgue();  // must be radial
  int k = 0;
  BC bc = BC::Dirichlet;
  double data = 1.0;  // U'(R) or U(R)
  int nodes = 64;     // Chebyshev–Lobatto nodes on [−R, R]; half of them lie in (0, R]
};

struct ModeSolution {
  RadialProblem problem;
  double rhs = 0.0;
  // Collocation nodes R = r_0 > r_1 > ... > 0 and the profile there.
  std::vector<double> r, u, du, d2u;
  // Normwise backward errors of the collocation rows.
  double pde_residual = 0.0;
  double bc_residual = 0.0;
  // k = 0 Neumann only: the constant λ with L U = rhs + λ in the discrete solve.
  double compatibility_defect = 0.0;

  // {U, U', U''} at any r ∈ [0, R] by barycentric interpolation of the parity extension.
  std::array<double, 3> profile(double r) const;
  double value(double r, double theta) const;

  // Full Chebyshev-Lobatto grid on [−R, R] with the parity extension of U, U', U''.
  std::vector<double> xfull, ufull, dufull, d2ufull;
};

// Solves U'' + (1/r − V')U' − k²U/r² = rhs with the problem's boundary condition. The k = 0
// Neumann problem is fixed by U(0) = 0 and requires rhs·μ(M) = data·μ_∂(∂M).
// Throws SolverFailure when a normwise backward error exceeds 1e−10.
ModeSolution solve_mode(const RadialProblem& p, double rhs);

// Every term of the weighted Reilly formula for a single mode, angular integrals exact.
struct ReillyTerms {
  double lu2 = 0.0;        // ∫(Lu)² dμ from the profile
  double lu2_pde = 0.0;    // ∫(Lu)² dμ with Lu replaced by the equation's right-hand side
  double hess = 0.0;       // ∫‖∇²u‖² dμ
  double ric = 0.0;        // ∫⟨Ric_μ∇u,∇u⟩ dμ
  double h_unu2 = 0.0;     // ∫H_μ u_ν² dμ_∂
  double ii_grad = 0.0;    // ∫⟨II∇_∂u,∇_∂u⟩ dμ_∂
  double cross = 0.0;      // ∫⟨∇_∂u_ν,∇_∂u⟩ dμ_∂
  double unu_lbu = 0.0;    // ∫u_ν L_∂u dμ_∂
  double iinv_gradnu = 0.0;  // ∫⟨II⁻¹∇_∂u_ν,∇_∂u_ν⟩ dμ_∂
  double unu = 0.0;        // ∫u_ν dμ_∂
  double lu = 0.0;         // ∫Lu dμ
};
ReillyTerms reilly_terms(const ModeSolution& s);

// μ(M) and μ_∂(∂M) of the disc.
double disc_volume(const Density& d, double R);
double disc_boundary(const Density& d, double R);

enum class ReillyVariant { Full, NeumannConstant, Dirichlet };
const char* to_string(ReillyVariant v);

// Identity verdict with residual |LHS − RHS| / max(|LHS|, Σ|terms|); pass iff ≤ 1e−6. LHS uses
// the equation's Lu: the formula holds for every smooth profile, so only this form measures
// how well the profile solves its problem.
VerdictReport reilly_residual(const ModeSolution& s, ReillyVariant variant);

struct ChainReport {
  // Link rows followed by the exact-accounting identity row.
  std::vector<VerdictReport> rows;
  double cs_slack = 0.0;
  double gamma2_slack = 0.0;
  double final_slack = 0.0;
  double accounting_residual = 0.0;
};

// Neumann chain for boundary data f = Σ_k cos_coeffs[k] cos kθ.
ChainReport colesanti_proof_chain(const Density& d, double R, double invN,
                                  const std::vector<double>& cos_coeffs, int nodes = 64);

// Dirichlet chain Lu = 1, u|∂ = 0. The link contributions are normalized so that
// final = cs/((1−invN)μ) + Γ₂·∫(1/H_μ)/((1−invN)μ).
ChainReport ros_proof_chain(const Density& d, double R, double invN, int nodes = 64);

}  // namespace pnf
