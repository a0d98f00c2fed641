#pragma once

#include "pnflab/weighted_measure.hpp"

#include <Eigen/SparseCore>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pnf {

// Functions on ∂K are indexed by the Gauss-map grid: f_i = f(x_i) with x_i = ν⁻¹(u_i).
struct BoundaryFunction {
  std::vector<double> values;
  // Optional exact ∇_S(f∘ν⁻¹) on the sphere, in the grid tangent frame.
  std::optional<std::vector<Vec>> sphere_grad;
  std::string id = "table";

  static BoundaryFunction constant(const DirectionGrid& g, double c);
  // cos kθ / sin kθ of the normal angle (2D).
  static BoundaryFunction cos_mode(const DirectionGrid& g, int k);
  static BoundaryFunction sin_mode(const DirectionGrid& g, int k);
  // Real spherical harmonic of the normal (3D).
  static BoundaryFunction spherical_harmonic(const DirectionGrid& g, int l, int m);
  // Σ_{k ≤ K} random coefficients with 1/(1+k) decay, seeded. 2D: Fourier; 3D: harmonics.
  static BoundaryFunction random_bandlimited(const DirectionGrid& g, std::uint64_t seed,
                                             int K = 4);
  static BoundaryFunction table(std::vector<double> v);
};

// −L_∂K in weighted form: L f = −M⁻¹ S f.
struct BoundaryOperator {
  int dimension = 2;
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;
  std::string assembly;

  Eigen::VectorXd apply_L(const Eigen::VectorXd& f) const;
};

// 2D: S = Dᵀ diag(e^{−V}/ρ·Δθ) D with D the Fourier differentiation matrix plus a Nyquist
// stabilizer, M = e^{−V}ρΔθ.
// 3D: P1 stiffness with per-triangle mean weight, lumped mass a_i e^{−V(x_i)}.
BoundaryOperator assemble_operator(const BoundaryMesh& mesh, const WeightedMeasures& w);

// Everything the verifiers need for one (body, density) pair; holds its own copies.
struct BoundaryProblem {
  BoundaryProblem(const SupportBody& body, const Density& density);
  std::shared_ptr<const SupportBody> body;
  std::shared_ptr<const Density> density;
  BoundaryMesh mesh;
  WeightedMeasures w;
  BoundaryOperator op;
};

struct SpectralGap {
  double lambda1 = 0.0;
  Eigen::VectorXd eigenfunction;  // Σ m_i φ_i² = 1, Σ m_i φ_i = 0
  double residual = 0.0;
  int iterations = 0;
};

SpectralGap spectral_gap(const BoundaryProblem& p);
SpectralGap spectral_gap(const SupportBody& body, const Density& density);

// max(1e−8, c_h·h²)·max(1, |lhs|, |rhs|)·scale.
double inequality_tolerance(const BoundaryMesh& mesh, double lhs, double rhs, double scale = 1.0);

// Tangential gradient data for f: ∇_∂f = II ∇_S f.
std::vector<Vec> sphere_gradient_of(const BoundaryProblem& p, const BoundaryFunction& f);

VerdictReport colesanti_verify(const BoundaryProblem& p, double invN, const BoundaryFunction& f,
                               double tol_scale = 1.0);
VerdictReport colesanti_verify(const SupportBody& body, const Density& density, double invN,
                               const BoundaryFunction& f);

struct StrengthenedResult {
  VerdictReport verdict;
  VerdictReport plain;
  double beta_mass = 0.0;  // Σ β_i m_i
};
// Throws DegenerateBeta when Σβm ≤ tol (balls).
StrengthenedResult colesanti_strengthened(const BoundaryProblem& p, double invN,
                                          const BoundaryFunction& f, double tol_scale = 1.0);

VerdictReport dual_colesanti_verify(const BoundaryProblem& p, double rho, const BoundaryFunction& f,
                                    double C, double tol_scale = 1.0);

// Rows "meancurv-upper", "meancurv-lower", "meancurv-cs". The last two are omitted (with a note on the first row)
// when the body is not weighted mean-convex.
std::vector<VerdictReport> mean_curvature_inequalities(const BoundaryProblem& p, double invN,
                                                       double tol_scale = 1.0);

struct BoundOptions {
  // Switches ξ in the Lichnerowicz/Veysseire rows to H_μ and adds CD(0,0) ambient and
  // CD(0,∞) boundary preconditions instead of requiring a constant density.
  bool generalized = false;
  double tol_scale = 1.0;
};

std::vector<VerdictReport> bound_suite(const BoundaryProblem& p, double rho, double invN,
                                       const BoundOptions& opt = {});

}  // namespace pnf
