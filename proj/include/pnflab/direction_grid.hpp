#pragma once

#include "pnflab/common.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace pnf {

// Sample directions on S^{n-1}. In 2D: θ_j = 2πj/M. In 3D: vertices of a subdivided
// icosahedron projected to the sphere, with outward-oriented triangles.
class DirectionGrid {
 public:
  static std::shared_ptr<const DirectionGrid> circle(int M);
  static std::shared_ptr<const DirectionGrid> icosphere(int level);

  int dimension() const { return dim_; }
  int size() const { return static_cast<int>(dirs_.size()); }
  // M in 2D, subdivision level in 3D.
  int resolution() const { return resolution_; }
  std::string resolution_label() const;

  const Vec& direction(int i) const { return dirs_[i]; }
  // n×(n-1) orthonormal tangent basis at direction i. In 2D the single column is u⊥.
  const Mat& frame(int i) const { return frames_[i]; }
  double angle(int i) const { return 2.0 * kPi * i / resolution_; }
  // Quadrature weight of direction i on the sphere; the weights sum to |S^{n-1}|.
  double cell_weight(int i) const { return cell_[i]; }
  // Index of -u_i.
  int antipode(int i) const { return antipode_[i]; }

  // 3D only.
  const std::vector<std::array<int, 3>>& triangles() const { return tris_; }
  const std::vector<std::vector<int>>& neighbors() const { return nbrs_; }

  // Typical angular spacing: 2π/M, or mean edge angle of the triangulation.
  double spacing() const { return spacing_; }

  bool same_as(const DirectionGrid& other) const {
    return dim_ == other.dim_ && resolution_ == other.resolution_;
  }

 private:
  DirectionGrid() = default;
  int dim_ = 2;
  int resolution_ = 0;
  double spacing_ = 0.0;
  std::vector<Vec> dirs_;
  std::vector<Mat> frames_;
  std::vector<double> cell_;
  std::vector<int> antipode_;
  std::vector<std::array<int, 3>> tris_;
  std::vector<std::vector<int>> nbrs_;
};

using GridPtr = std::shared_ptr<const DirectionGrid>;

// Tangent frame used for 3D directions: e1 = normalize(ref × u), e2 = u × e1.
Mat tangent_frame(const Eigen::Vector3d& u);

// Area of the spherical triangle with unit vertices a, b, c.
double spherical_triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                               const Eigen::Vector3d& c);

}  // namespace pnf
