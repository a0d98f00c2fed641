#pragma once

#include "pnflab/convex_core.hpp"
#include "pnflab/density.hpp"
#include "pnflab/verdict.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace pnf {

inline constexpr double kTolCD = 1e-9;

// Ric_{μ,N} = ∇²V − (1/(N−n)) ∇V⊗∇V at x.
Mat weighted_ricci(const Density& density, const Vec& x, double invN);

// Min over samples of the smallest eigenvalue of Ric_{μ,N} − ρI; pass iff ≥ −tol_cd.
// lhs = ρ, rhs = min eigenvalue of Ric_{μ,N}.
VerdictReport cd_check(const Density& density, double rho, double invN,
                       const std::vector<Vec>& samples);

// Throws HypothesisUnmet when cd_check fails.
void require_cd(const Density& density, double rho, double invN, const std::vector<Vec>& samples,
                const std::string& context);

struct TestFunction {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
  std::string id;
};

// Pointwise Γ₂(u) ≥ ⟨Ric_{μ,N}∇u,∇u⟩ + invN·(Lu)² with the convention −∞·0 = 0.
// lhs = bound, rhs = Γ₂ at the sample of smallest slack.
VerdictReport gamma2_check(const Density& density, const TestFunction& u,
                           const std::vector<Vec>& samples, double invN);

struct WeightedMeasures {
  double volume = 0.0;    // μ(K)
  double boundary = 0.0;  // μ_∂K(∂K)
  std::vector<double> H_mu;
  std::vector<double> weight;  // e^{−V(x_i)}
  std::vector<double> mass;    // a_i e^{−V(x_i)}
  std::vector<Vec> grad_V;
};

// Interior measure by a cone over Gauss-map cells, μ(K) = ∫_S h det W ∫_0^1 r^{n−1}
// e^{−V(r x(u))} dr du, with Gauss–Legendre in r.
WeightedMeasures weighted_measures(const SupportBody& body, const BoundaryMesh& mesh,
                                   const Density& density);
WeightedMeasures weighted_measures(const SupportBody& body, const Density& density);

struct Quermass {
  double delta0 = 0.0, delta1 = 0.0, delta2 = 0.0;
  // W_N, W_{N−1}, W_{N−2}; present only for finite invN ∉ {0} (N ∉ {0, ∞}) and N ≠ 1.
  std::optional<double> W_N, W_N1, W_N2;
};
Quermass quermassintegrals(const SupportBody& body, const Density& density, double invN);

// Sample points covering the body: boundary nodes plus scaled copies toward the origin.
std::vector<Vec> body_samples(const BoundaryMesh& mesh, int stride = 1);

struct BoundaryCDResult {
  VerdictReport verdict;
  std::vector<Mat> ricci;  // Ric^∂_{μ,N−1} per node, tangent frame
  std::vector<double> rho0_pointwise;
  double rho0 = 0.0;
  double sigma = 0.0;  // min principal curvature
  double xi = 0.0;     // min H_g
  bool sign_condition = false;  // ⟨∇V, ν⟩ ≤ 0 everywhere
};

// Boundary curvature-dimension in Euclidean ambient. With ⟨∇V,ν⟩ ≤ 0 the candidate is
// ρ₀ = ρ + σ(ξ − σ); otherwise the pointwise bound ρ + min(σ₁(H_μ−σ₁), σ₂(H_μ−σ₂)) is used.
// 2D bodies report a degenerate pass.
BoundaryCDResult boundary_cd(const SupportBody& body, const Density& density, double rho,
                             double invN);

}  // namespace pnf
