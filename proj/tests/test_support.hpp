#pragma once

#include <spherecon/protocols.hpp>

#include <Eigen/Dense>

#include <vector>

namespace spherecon::testing {

/// Haar-ish random rotation of R^d via QR of a Gaussian matrix, sign-fixed to
/// det +1.
inline Eigen::MatrixXd random_rotation_matrix(int d, Rng& rng) {
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = standard_normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

inline SphereConfig random_sphere_config(int n_agents, int dim, Rng& rng) {
  std::vector<UnitVector> states;
  states.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) states.push_back(sample_unit_sphere(dim, rng));
  return SphereConfig(std::move(states));
}

inline RotationConfig random_rotation_config(int n_agents, Rng& rng) {
  std::vector<Rotation3> states;
  states.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) states.push_back(sample_uniform_rotation(rng));
  return RotationConfig(std::move(states));
}

/// Connected random graph: a uniform spanning-path skeleton plus extra edges.
inline Graph random_connected_graph(int n_nodes, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  std::vector<int> order(n_nodes);
  for (int i = 0; i < n_nodes; ++i) order[i] = i;
  for (int i = n_nodes - 1; i > 0; --i) {
    const int j = static_cast<int>(uniform01(rng) * (i + 1));
    std::swap(order[i], order[j]);
  }
  for (int i = 0; i + 1 < n_nodes; ++i) edges.emplace_back(order[i], order[i + 1]);
  Graph skeleton(n_nodes, edges);
  for (int a = 0; a < n_nodes; ++a) {
    for (int b = a + 1; b < n_nodes; ++b) {
      if (skeleton.edge_index(a, b) < 0 && uniform01(rng) < 0.3) edges.emplace_back(a, b);
    }
  }
  return Graph(n_nodes, edges);
}

}  // namespace spherecon::testing
