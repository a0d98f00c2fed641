#pragma once

#include "pnflab/direction_grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pnf {

class TrigInterpolant;

// Gauss-map data derived from h: x = h u + ∇_S h and the reverse Weingarten form
// W = ∇²_S h + h I in the grid tangent frame (1×1 in 2D, 2×2 in 3D).
struct GaussMapData {
  std::vector<Vec> points;
  std::vector<Vec> grad_h;  // tangent-frame coordinates of ∇_S h
  std::vector<Mat> W;
  double min_W_eigenvalue = 0.0;
  double max_W_eigenvalue = 0.0;
};

// A strictly convex body with the origin in its interior, stored by its support function.
class SupportBody {
 public:
  // eps_convex < 0 selects the default 1e-6·mean(h). Throws NonPositive / NonConvex.
  SupportBody(GridPtr grid, std::vector<double> h, std::string id = "table",
              double eps_convex = -1.0);

  const DirectionGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int dimension() const { return grid_->dimension(); }
  int size() const { return static_cast<int>(h_.size()); }
  const std::vector<double>& h() const { return h_; }
  double eps_convex() const { return eps_convex_; }
  const std::string& id() const { return id_; }
  const GaussMapData& gauss() const { return gauss_; }

  // Band-limited interpolant of h (2D only).
  TrigInterpolant support_interpolant() const;

 private:
  GridPtr grid_;
  std::vector<double> h_;
  double eps_convex_;
  std::string id_;
  GaussMapData gauss_;
};

struct BodySpec {
  enum class Kind { Ball, Ellipsoid, Random, Table };
  Kind kind = Kind::Ball;
  double radius = 1.0;
  std::vector<double> axes;
  std::uint64_t seed = 0;
  double amp = 0.1;
  std::vector<double> table;

  static BodySpec ball(double r) { return {Kind::Ball, r, {}, 0, 0.1, {}}; }
  static BodySpec ellipse(double a, double b) { return {Kind::Ellipsoid, 1.0, {a, b}, 0, 0.1, {}}; }
  static BodySpec ellipsoid(double a, double b, double c) {
    return {Kind::Ellipsoid, 1.0, {a, b, c}, 0, 0.1, {}};
  }
  static BodySpec random(std::uint64_t seed, double amp = 0.1, double r = 1.0) {
    return {Kind::Random, r, {}, seed, amp, {}};
  }
  static BodySpec from_table(std::vector<double> h) {
    return {Kind::Table, 1.0, {}, 0, 0.1, std::move(h)};
  }
  std::string id() const;
};

SupportBody make_body(const BodySpec& spec, const GridPtr& grid);

// Reverse Weingarten data for support values h on grid; pure differentiation, no checks.
GaussMapData gauss_map_data(const DirectionGrid& grid, const std::vector<double>& h);

// ∇_S f in the grid tangent frame: spectral in 2D, one-ring quadratic fit in 3D.
std::vector<Vec> sphere_gradient(const DirectionGrid& grid, const std::vector<double>& f);

// Real orthonormal spherical harmonic Y_lm (m < 0 selects the sine family).
double real_spherical_harmonic(int l, int m, const Eigen::Vector3d& u);

struct BoundaryMesh {
  int dimension = 2;
  std::vector<Vec> points;
  std::vector<Vec> normals;
  std::vector<Mat> frames;
  std::vector<Mat> W;   // reverse Weingarten form (radii of curvature)
  std::vector<Mat> II;  // second fundamental form, II = W⁻¹
  std::vector<double> area;  // Euclidean boundary area element per node
  std::vector<std::array<int, 3>> triangles;  // 3D connectivity; 2D is the periodic polyline
  double spacing = 0.0;  // angular spacing of the underlying grid
  std::string resolution;

  int size() const { return static_cast<int>(points.size()); }
  double mean_curvature(int i) const { return II[i].trace(); }
};

BoundaryMesh boundary_mesh(const SupportBody& body);

// h_K + t·h_L per direction.
SupportBody minkowski_sum_support(const SupportBody& K, const SupportBody& L, double t);

struct EuclideanSize {
  double volume;
  double boundary_area;
};
EuclideanSize euclidean_size(const SupportBody& body);

// ½∮(h_K h_L − h_K′ h_L′) dθ.
double mixed_area(const SupportBody& K, const SupportBody& L);

void require_same_grid(const SupportBody& K, const SupportBody& L);

}  // namespace pnf
