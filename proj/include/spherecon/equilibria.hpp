#pragma once

#include <spherecon/detail/platonic.hpp>
#include <spherecon/protocols.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherecon {

/// A constructed equilibrium configuration paired with the graph that makes
/// it one.
struct NamedEquilibrium {
  SphereConfig config;
  Graph graph;
  std::string kind;
};

/// All agents at the common state c. An equilibrium of any gain over any
/// graph.
inline NamedEquilibrium make_consensus(const UnitVector& c, Graph graph) {
  std::vector<UnitVector> states(graph.num_nodes(), c);
  return NamedEquilibrium{SphereConfig(std::move(states)), std::move(graph), "consensus"};
}

inline NamedEquilibrium make_platonic(detail::Solid solid, const std::string& kind) {
  const auto vertices = detail::platonic_vertices(solid);
  std::vector<UnitVector> states;
  states.reserve(vertices.size());
  for (const auto& v : vertices) states.push_back(UnitVector(Eigen::Vector3d(v)));
  Graph graph(static_cast<int>(vertices.size()), detail::nearest_neighbor_edges(vertices));
  return NamedEquilibrium{SphereConfig(std::move(states)), std::move(graph), kind};
}

/// N agents spread equidistantly over the x-y equator of S^2 (agent k at
/// angle 2 pi k / N) under the cycle graph; every edge has s = 1 - cos(2pi/N).
inline NamedEquilibrium make_great_circle_cycle(int n_agents) {
  if (n_agents < 3) throw std::invalid_argument("great_circle_cycle: need N >= 3");
  std::vector<UnitVector> states;
  states.reserve(n_agents);
  for (int k = 0; k < n_agents; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n_agents;
    states.push_back(UnitVector(Eigen::Vector3d(std::cos(angle), std::sin(angle), 0.0)));
  }
  return NamedEquilibrium{SphereConfig(std::move(states)), Graph::cycle(n_agents),
                          "great_circle_cycle"};
}

/// Named equilibrium by string, as exposed on the command line. `n` applies
/// to consensus (agent count, complete graph, state e1) and to
/// great_circle_cycle.
inline NamedEquilibrium make_equilibrium(const std::string& kind, int n = -1) {
  if (kind == "consensus") {
    const int count = n < 0 ? 3 : n;
    return make_consensus(UnitVector::axis(3, 0), Graph::complete(count));
  }
  if (kind == "octahedron") return make_platonic(detail::Solid::octahedron, kind);
  if (kind == "tetrahedron") return make_platonic(detail::Solid::tetrahedron, kind);
  if (kind == "cube") return make_platonic(detail::Solid::cube, kind);
  if (kind == "icosahedron") return make_platonic(detail::Solid::icosahedron, kind);
  if (kind == "dodecahedron") return make_platonic(detail::Solid::dodecahedron, kind);
  if (kind == "great_circle_cycle") return make_great_circle_cycle(n < 0 ? 6 : n);
  throw std::invalid_argument("make_equilibrium: unknown kind '" + kind + "'");
}

/// Equilibrium categories of the input/state alignment: u_i parallel to x_i
/// with positive sign, negative sign, or u_i = 0.
enum class AgentCategory { aligned, anti_aligned, null_input };

inline std::string to_string(AgentCategory c) {
  switch (c) {
    case AgentCategory::aligned: return "aligned";
    case AgentCategory::anti_aligned: return "anti-aligned";
    case AgentCategory::null_input: return "null-input";
  }
  return "null-input";
}

/// Per-agent categorization at an equilibrium. Rejects configurations whose
/// residual exceeds 1e-8, reporting the offending value.
inline std::vector<AgentCategory> categorize(const SphereConfig& cfg, const Graph& graph,
                                             const GainTable& gains) {
  const double residual = equilibrium_residual(cfg, graph, gains);
  if (residual >= 1e-8) {
    throw std::invalid_argument("categorize: not an equilibrium (residual " +
                                std::to_string(residual) + ")");
  }
  const auto u = sphere_input(cfg, graph, gains);
  std::vector<AgentCategory> out;
  out.reserve(u.size());
  for (int i = 0; i < cfg.size(); ++i) {
    if (u[i].norm() <= 1e-10) {
      out.push_back(AgentCategory::null_input);
    } else if (u[i].dot(cfg[i].coords()) > 0.0) {
      out.push_back(AgentCategory::aligned);
    } else {
      out.push_back(AgentCategory::anti_aligned);
    }
  }
  return out;
}

}  // namespace spherecon
