#pragma once

#include "pnflab/parallel_normal_flow.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pnf {

struct ExtensionSpec {
  enum class Kind { Geodesic, EuclideanSum, Pnf, Wave };
  Kind kind = Kind::Geodesic;
  std::shared_ptr<const SupportBody> L;  // EuclideanSum, or Pnf with φ = h_L∘ν
  BoundaryFunction phi;                  // Pnf (planar free-form) or Wave initial speed

  static ExtensionSpec geodesic();
  static ExtensionSpec euclidean_sum(const SupportBody& L);
  static ExtensionSpec pnf_support(const SupportBody& L);
  static ExtensionSpec pnf(BoundaryFunction phi);
  static ExtensionSpec wave(BoundaryFunction phi0);
  std::string label() const;
};

struct ConcavityProfile {
  std::string extension;
  std::vector<double> t, v, G, D2G;  // D2G[i] belongs to t[i + 1]
  double max_D2G = 0.0;
  double tol = 0.0;
  bool truncated = false;
  std::string flag;
  VerdictReport verdict;
};

// G = N·(v/v₀)^{1/N} up to an additive constant (log(v/v₀) at invN = 0) on a uniform t grid
// with `samples` points over [0, T]; pass iff max centred D²G ≤ tol. Requires CD(0, invN)
// on the swept region; invN = −∞ is rejected.
ConcavityProfile concavity_profile(const ExtensionSpec& source, const SupportBody& body,
                                   const Density& density, double invN, double T, int samples);

// Centred second differences of G and the calibrated tolerance
// Δt²·max|D⁴G|/6 + 64ε·max(1, |G|)/Δt².
ConcavityProfile concavity_from_values(std::vector<double> t, std::vector<double> v, double invN);

// δ1² ≥ (N/(N−1))·δ0·δ2 for geodesic extension.
VerdictReport minkowski_second(const SupportBody& body, const Density& density, double invN,
                               double tol_scale = 1.0);

// First and second variation of t ↦ μ(K + tL) at t = 0:
// v′ = ∫ h_L dμ_∂, v″ = ∫ (H_μ h_L² − ⟨II ∇_S h_L, ∇_S h_L⟩) dμ_∂.
struct SumVariations {
  double v = 0.0, dv = 0.0, d2v = 0.0;
};
SumVariations sum_variations(const SupportBody& K, const SupportBody& L, const Density& density);

struct IsoOptions {
  double T = 2.0;
  int samples = 41;
  std::optional<double> diameter;  // checked against the support certificate when given
  double tol_scale = 1.0;
};

// Rows isop-concavity, isop-sup, isop-diameter, isop-homogeneous (lebesgue with N = n only),
// isop-profile. Throws ContainmentViolated and DiameterCertificateFailed.
std::vector<VerdictReport> isoperimetric_checks(const SupportBody& K, const SupportBody& L,
                                                const SupportBody& Omega, const Density& density,
                                                double invN, const IsoOptions& opt = {});

// Smallest D with h_Ω(u) + h_Ω(−u) ≤ D·h_L(u) on the grid.
double diameter_certificate(const SupportBody& Omega, const SupportBody& L);

// Rows t, v, G, D2G (D2G empty at the end points).
void write_profile_csv(std::ostream& os, const ConcavityProfile& p);

}  // namespace pnf
