#pragma once

#include "pnflab/boundary_spectral.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pnf {

// Trajectories are labelled by the Gauss-map grid of the initial body: node i starts at
// ν_K⁻¹(u_i). Time grid t_0 = 0 < ... < t_S.
struct FlowStep {
  double t = 0.0;
  std::vector<Vec> points;
  std::vector<Vec> normals;     // propagated ν for the PNF, measured ν for the wave flow
  std::vector<double> phi;      // normal speed per trajectory
  std::vector<Vec> velocity;    // ω = φν + τ
  std::vector<double> kappa;    // 2D curvature; 3D smallest principal curvature
  double volume = 0.0;          // μ(Ω_t)
  double boundary = 0.0;        // μ_∂(Σ_t)
  double min_II = 0.0;
  double min_H_mu = 0.0;
  double energy = 0.0;          // Dirichlet energy of φ_t (wave flow only)
};

struct FlowTrace {
  enum class Kind { Parallel, Wave };
  Kind kind = Kind::Parallel;
  int dimension = 2;
  GridPtr grid;
  std::string body_id, density_id, phi_id;
  std::vector<FlowStep> steps;
  bool truncated = false;
  std::string flag;  // "", "ConvexityLost" or "PositivityLost"

  const FlowStep& last() const { return steps.back(); }
};

struct FlowOptions {
  // Integration halts once the smallest measured principal curvature drops below this.
  double eps_convex = 1e-6;
  Density density = Density::lebesgue();
};

// RK4 on dF/dt = φν + II⁻¹∇_Σφ with ν held on each trajectory and II⁻¹ measured as the
// tangent map of the current front against the propagated normals (2D: Fourier
// differentiation; 3D: one-ring fits). Truncation checks use the second-derivative
// curvature. Free-form φ is planar only.
FlowTrace pnf_integrate(const SupportBody& K, const BoundaryFunction& phi, double T, int steps,
                        const FlowOptions& opt = {});
// φ = h_L∘ν_K, any dimension.
FlowTrace pnf_integrate(const SupportBody& K, const SupportBody& L, double T, int steps,
                        const FlowOptions& opt = {});
// Continues the trajectories of a trace from its last step with a new per-trajectory speed.
FlowTrace pnf_extend(const FlowTrace& trace, const std::vector<double>& phi, double T, int steps,
                     const FlowOptions& opt = {});

// ∫_Σ f dμ_∂ over the front of a step, f indexed by trajectory.
double front_integral(const FlowTrace& trace, const FlowStep& step, const std::vector<double>& f,
                      const Density& density);

// max over steps and trajectories of |ν_measured − ν_0|.
double parallel_normal_diagnostic(const FlowTrace& trace);

// Measured outward normals of a front (same conventions as the flow).
std::vector<Vec> measured_normals(const FlowTrace& trace, const FlowStep& step);

struct FlowComparison {
  double error = 0.0;     // max(forward, backward)
  double forward = 0.0;   // flowed nodes to the oracle boundary
  double backward = 0.0;  // oracle nodes to the flowed front
  double drift = 0.0;     // parallel_normal_diagnostic of the trace
  FlowTrace trace;
};

// Symmetric point-to-boundary distance between a front and ∂C. 2D uses the band-limited
// interpolants of both curves; 3D uses the support function of C and the front triangles.
FlowComparison front_distance(const std::vector<Vec>& front, const SupportBody& C);

FlowComparison flow_vs_support_sum(const SupportBody& K, const SupportBody& L, double t,
                                   int steps = 100, const FlowOptions& opt = {});

struct MAReport {
  double gradient_defect = 0.0;  // max ||∇u|·φ − 1|
  double min_singular = 0.0;     // max over samples of the smallest singular value of ∇²u
  double directional = 0.0;      // max |∇²u·ω| / |ω|
  int samples = 0;
  int sparse = 0;                // samples skipped for degenerate trajectory coverage
};

// u(F_t(y)) = t inverted along the (label, time) chart of a planar trace.
MAReport ma_diagnostics(const FlowTrace& trace);

struct MapTReport {
  std::vector<Vec> x;   // polar samples in K
  std::vector<Vec> Tx;
  double boundary_to_L = 0.0;             // max |‖T(x)‖_L − 1| over x ∈ ∂K, as a distance
  std::vector<double> t_values;
  std::vector<double> sum_inclusion;      // max distance of (Id + tT)(∂K) to ∂(K + tL)
  std::vector<VerdictReport> verdicts;
};

// T(x) = ‖x‖_K ν_L⁻¹(ν_K(x/‖x‖_K)), planar. radial × angular polar samples.
MapTReport map_T(const SupportBody& K, const SupportBody& L, int radial = 8, int angular = 0,
                 double tol = 1e-6);

struct WaveOptions {
  double eps_convex = 1e-6;
  Density density = Density::lebesgue();
  // Substep cap c·min κ·Δs²/max φ for the explicit heat step.
  double stability = 0.2;
};

// Planar coupled flow: the front moves by φν and d/dt log φ = div_{g,μ}(κ⁻¹∂_sφ).
FlowTrace wave_flow(const SupportBody& K, const BoundaryFunction& phi0, double T, int steps,
                    const WaveOptions& opt = {});

// One row per (step, node): step, node, t, position, ν, φ, κ.
void write_trace_csv(std::ostream& os, const FlowTrace& trace);
// One row per step: t, mu, mu_boundary, min_kappa, min_H_mu, energy.
void write_trace_summary_csv(std::ostream& os, const FlowTrace& trace);

}  // namespace pnf
