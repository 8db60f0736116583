#pragma once

#include <spherecon/protocols.hpp>

#include <vector>

namespace spherecon {

/// Value of the edge-integral potential together with its per-edge terms
/// (aligned with graph.edges()).
struct EnergyValue {
  double V = 0.0;
  std::vector<double> per_edge;
};

namespace kernel {

inline double potential_value(const StateList& x, const Graph& graph, const GainTable& gains) {
  double v = 0.0;
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    v += gains[graph.edge_gain(e)].integral(chordal_s(x[i], x[j]));
  }
  return v;
}

inline double potential_value_so3(const RotationList& r, const Graph& graph,
                                  const GainTable& gains) {
  double v = 0.0;
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    v += 0.5 * gains[graph.edge_gain(e)].integral(so3_chordal(r[i], r[j]));
  }
  return v;
}

/// Closed form of the energy decrease identity:
/// dV/dt = -2 sum_i (|u_i|^2 - <u_i, x_i>^2) <= 0.
inline double energy_rate_value(const StateList& x, const Graph& graph, const GainTable& gains,
                                StateList& u_buf) {
  sphere_input_into(x, graph, gains, u_buf);
  double rate = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double un2 = u_buf[i].squaredNorm();
    const double proj = u_buf[i].dot(x[i]);
    rate += un2 - proj * proj;
  }
  return -2.0 * rate;
}

}  // namespace kernel

/// Lyapunov potential V = sum_{edges} integral_0^{s_ij} f_ij(r) dr.
inline EnergyValue potential(const SphereConfig& cfg, const Graph& graph, const GainTable& gains) {
  if (graph.num_nodes() != cfg.size()) {
    throw std::invalid_argument("potential: graph/config size mismatch");
  }
  EnergyValue out;
  out.per_edge.reserve(graph.num_edges());
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    const double s = geodesic_and_chordal(cfg[i], cfg[j]).s;
    const double term = gains[graph.edge_gain(e)].integral(s);
    out.per_edge.push_back(term);
    out.V += term;
  }
  return out;
}

/// Rotation-space potential V = (1/2) sum_{edges} integral_0^{s_ij} f dr with
/// s_ij = 3 - <R_i, R_j>.
inline EnergyValue potential(const RotationConfig& cfg, const Graph& graph,
                             const GainTable& gains) {
  if (graph.num_nodes() != cfg.size()) {
    throw std::invalid_argument("potential: graph/config size mismatch");
  }
  EnergyValue out;
  out.per_edge.reserve(graph.num_edges());
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    const double s = kernel::so3_chordal(cfg[i].matrix(), cfg[j].matrix());
    const double term = 0.5 * gains[graph.edge_gain(e)].integral(s);
    out.per_edge.push_back(term);
    out.V += term;
  }
  return out;
}

/// Time derivative of V along the closed loop (always <= 0 by Cauchy-Schwarz).
inline double energy_rate(const SphereConfig& cfg, const Graph& graph, const GainTable& gains) {
  auto u = sphere_input(cfg, graph, gains);
  double rate = 0.0;
  for (int i = 0; i < cfg.size(); ++i) {
    const double un2 = u[i].squaredNorm();
    const double proj = u[i].dot(cfg[i].coords());
    rate += un2 - proj * proj;
  }
  return -2.0 * rate;
}

}  // namespace spherecon
