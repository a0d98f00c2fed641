#include "pnflab/direction_grid.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace pnf {

std::string DirectionGrid::resolution_label() const {
  return (dim_ == 2 ? "M=" : "L=") + std::to_string(resolution_);
}

Mat tangent_frame(const Eigen::Vector3d& u) {
  const Eigen::Vector3d ref =
      std::abs(u.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d e1 = ref.cross(u).normalized();
  const Eigen::Vector3d e2 = u.cross(e1);
  Mat F(3, 2);
  F.col(0) = e1;
  F.col(1) = e2;
  return F;
}

double spherical_triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                               const Eigen::Vector3d& c) {
  const double num = std::abs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

std::shared_ptr<const DirectionGrid> DirectionGrid::circle(int M) {
  if (M < 8 || M % 2 != 0) throw Error(ErrorKind::Dimension, "circle grid needs even M >= 8");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const DirectionGrid>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(M); it != cache.end()) return it->second;

  std::shared_ptr<DirectionGrid> g(new DirectionGrid());
  g->dim_ = 2;
  g->resolution_ = M;
  g->spacing_ = 2.0 * kPi / M;
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * kPi * j / M;
    Vec u(2);
    u << std::cos(th), std::sin(th);
    Mat F(2, 1);
    F << -std::sin(th), std::cos(th);
    g->dirs_.push_back(u);
    g->frames_.push_back(F);
    g->cell_.push_back(2.0 * kPi / M);
    g->antipode_.push_back((j + M / 2) % M);
  }
  cache.emplace(M, g);
  return g;
}

std::shared_ptr<const DirectionGrid> DirectionGrid::icosphere(int level) {
  if (level < 0 || level > 7) throw Error(ErrorKind::Dimension, "icosphere level must be 0..7");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const DirectionGrid>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(level); it != cache.end()) return it->second;

  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {{-1, p, 0}, {1, p, 0},  {-1, -p, 0}, {1, -p, 0},
                                    {0, -1, p}, {0, 1, p},  {0, -1, -p}, {0, 1, -p},
                                    {p, 0, -1}, {p, 0, 1},  {-p, 0, -1}, {-p, 0, 1}};
  for (auto& x : v) x.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < level; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      if (auto it = mid.find(key); it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> nf;
    nf.reserve(f.size() * 4);
    for (const auto& t : f) {
      const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
      nf.push_back({t[0], ab, ca});
      nf.push_back({t[1], bc, ab});
      nf.push_back({t[2], ca, bc});
      nf.push_back({ab, bc, ca});
    }
    f.swap(nf);
  }
  for (auto& t : f) {
    const Eigen::Vector3d n = (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]);
    if (n.dot(v[t[0]] + v[t[1]] + v[t[2]]) < 0) std::swap(t[1], t[2]);
  }

  std::shared_ptr<DirectionGrid> g(new DirectionGrid());
  g->dim_ = 3;
  g->resolution_ = level;
  const int n = static_cast<int>(v.size());
  g->cell_.assign(n, 0.0);
  g->nbrs_.assign(n, {});
  double edge_sum = 0.0;
  int edge_count = 0;
  for (const auto& t : f) {
    const double A = spherical_triangle_area(v[t[0]], v[t[1]], v[t[2]]);
    for (int k = 0; k < 3; ++k) {
      g->cell_[t[k]] += A / 3.0;
      const int a = t[k], b = t[(k + 1) % 3];
      g->nbrs_[a].push_back(b);
      g->nbrs_[b].push_back(a);
      if (a < b) {
        edge_sum += std::acos(std::clamp(v[a].dot(v[b]), -1.0, 1.0));
        ++edge_count;
      }
    }
  }
  for (auto& nb : g->nbrs_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  // Each edge appears in two triangles with opposite orientation; a < b counted it once.
  g->spacing_ = edge_sum / edge_count;
  std::map<std::tuple<long long, long long, long long>, int> lookup;
  auto key = [](const Eigen::Vector3d& x) {
    return std::make_tuple(std::llround(x.x() * 1e9), std::llround(x.y() * 1e9),
                           std::llround(x.z() * 1e9));
  };
  for (int i = 0; i < n; ++i) lookup.emplace(key(v[i]), i);
  for (int i = 0; i < n; ++i) {
    Vec u = v[i];
    g->dirs_.push_back(u);
    g->frames_.push_back(tangent_frame(v[i]));
    auto it = lookup.find(key(-v[i]));
    g->antipode_.push_back(it == lookup.end() ? -1 : it->second);
  }
  g->tris_ = std::move(f);
  cache.emplace(level, g);
  return g;
}

}  // namespace pnf
