#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spherecon::detail {

enum class Solid { tetrahedron, octahedron, cube, icosahedron, dodecahedron };

/// Unit-norm vertex sets of the platonic solids, built from the standard
/// exact coordinates (golden ratio for the icosahedron/dodecahedron) and then
/// normalized, so the residual tests downstream sit at machine precision.
inline std::vector<Eigen::Vector3d> platonic_vertices(Solid solid) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v;
  switch (solid) {
    case Solid::tetrahedron:
      v = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
      break;
    case Solid::octahedron:
      v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      break;
    case Solid::cube:
      for (double x : {-1.0, 1.0})
        for (double y : {-1.0, 1.0})
          for (double z : {-1.0, 1.0}) v.emplace_back(x, y, z);
      break;
    case Solid::icosahedron:
      for (double a : {-1.0, 1.0})
        for (double b : {-phi, phi}) {
          v.emplace_back(0.0, a, b);
          v.emplace_back(a, b, 0.0);
          v.emplace_back(b, 0.0, a);
        }
      break;
    case Solid::dodecahedron:
      for (double x : {-1.0, 1.0})
        for (double y : {-1.0, 1.0})
          for (double z : {-1.0, 1.0}) v.emplace_back(x, y, z);
      for (double a : {-1.0 / phi, 1.0 / phi})
        for (double b : {-phi, phi}) {
          v.emplace_back(0.0, a, b);
          v.emplace_back(a, b, 0.0);
          v.emplace_back(b, 0.0, a);
        }
      break;
  }
  for (auto& x : v) x.normalize();
  return v;
}

/// Edges of the polytope: every pair whose inner product attains the maximal
/// off-diagonal value. For all five solids the nearest-neighbor pairs are
/// exactly the polytope edges.
inline std::vector<std::pair<int, int>> nearest_neighbor_edges(
    const std::vector<Eigen::Vector3d>& vertices) {
  const int n = static_cast<int>(vertices.size());
  double max_dot = -2.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      max_dot = std::max(max_dot, vertices[i].dot(vertices[j]));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (vertices[i].dot(vertices[j]) > max_dot - 1e-9) edges.emplace_back(i, j);
  return edges;
}

}  // namespace spherecon::detail
