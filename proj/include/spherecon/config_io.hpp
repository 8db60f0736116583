#pragma once

#include <spherecon/equilibria.hpp>
#include <spherecon/experiments.hpp>
#include <spherecon/linearization.hpp>
#include <spherecon/simulation.hpp>

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace spherecon {

using nlohmann::json;

/// Raised on malformed configuration input; the message carries a pointer to
/// the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Graph literal: {"kind": "cycle", "n": 6} or
/// {"edges": [[0,1],[1,2]], "n_nodes": 3}.
inline Graph parse_graph(const json& j) {
  try {
    if (j.contains("kind")) {
      return named_graph(j.at("kind").get<std::string>(), j.value("n", -1));
    }
    if (j.contains("edges")) {
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw ConfigError("graph.edges: expected [i, j] pairs");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
      int n_nodes = j.value("n_nodes", -1);
      if (n_nodes < 0) {
        for (auto [a, b] : edges) n_nodes = std::max({n_nodes, a + 1, b + 1});
      }
      return Graph(n_nodes, std::move(edges));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
  throw ConfigError("graph: expected either \"kind\" or \"edges\"");
}

inline json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  return json{{"n_nodes", g.num_nodes()}, {"edges", edges}};
}

/// Gain literal: {"constant": 5.0} or {"power": 1}.
inline GainFunction parse_gain(const json& j) {
  try {
    if (j.contains("constant")) return GainFunction::constant(j.at("constant").get<double>());
    if (j.contains("power")) return GainFunction::power(j.at("power").get<int>());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("gain: ") + e.what());
  }
  throw ConfigError("gain: expected {\"constant\": k} or {\"power\": k}");
}

/// Flag form "constant:5" / "power:1".
inline GainFunction parse_gain_string(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("gain: expected kind:value, e.g. constant:5");
  const std::string kind = spec.substr(0, colon);
  const std::string value = spec.substr(colon + 1);
  try {
    if (kind == "constant") return GainFunction::constant(std::stod(value));
    if (kind == "power") return GainFunction::power(std::stoi(value));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("gain: ") + e.what());
  }
  throw ConfigError("gain: unknown kind '" + kind + "'");
}

inline json sphere_config_to_json(const SphereConfig& cfg) {
  json states = json::array();
  for (int i = 0; i < cfg.size(); ++i) {
    json row = json::array();
    for (int k = 0; k < cfg.ambient_dim(); ++k) row.push_back(cfg[i].coords()(k));
    states.push_back(std::move(row));
  }
  return json{{"dim", cfg.dim()}, {"states", states}};
}

inline SphereConfig parse_sphere_config(const json& states, int expected_ambient) {
  std::vector<UnitVector> list;
  for (const auto& row : states) {
    Eigen::VectorXd v(row.size());
    for (int k = 0; k < static_cast<int>(row.size()); ++k) v(k) = row[k].get<double>();
    if (expected_ambient > 0 && v.size() != expected_ambient) {
      throw ConfigError("initial.states: ambient dimension mismatch");
    }
    list.push_back(UnitVector::normalized(v));
  }
  if (list.empty()) throw ConfigError("initial.states: empty");
  return SphereConfig(std::move(list));
}

inline json rotation_config_to_json(const RotationConfig& cfg) {
  json states = json::array();
  for (int i = 0; i < cfg.size(); ++i) {
    json row = json::array();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) row.push_back(cfg[i].matrix()(a, b));
    states.push_back(std::move(row));
  }
  return json{{"states", states}};
}

inline RotationConfig parse_rotation_config(const json& states) {
  std::vector<Rotation3> list;
  for (const auto& row : states) {
    if (row.size() != 9) throw ConfigError("initial.states: expected 9 row-major entries");
    Eigen::Matrix3d m;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) m(a, b) = row[3 * a + b].get<double>();
    list.push_back(Rotation3::orthonormalized(m));
  }
  if (list.empty()) throw ConfigError("initial.states: empty");
  return RotationConfig(std::move(list));
}

inline json report_to_json(const LinearizationReport& report) {
  json spectrum = json::array();
  for (int i = 0; i < report.spectrum.size(); ++i) spectrum.push_back(report.spectrum(i));
  json tangent = json::array();
  for (int i = 0; i < report.tangent_spectrum.size(); ++i) {
    tangent.push_back(report.tangent_spectrum(i));
  }
  return json{{"residual", report.residual},
              {"verdict", to_string(report.verdict)},
              {"trace_G", report.trace_G},
              {"max_eig", report.max_eig},
              {"n_zero_tangent", report.n_zero_tangent},
              {"spectrum", spectrum},
              {"tangent_spectrum", tangent}};
}

inline json sim_summary_json(const SphereSimResult& r) {
  return json{{"outcome", to_string(r.outcome)},
              {"elapsed_model_time", r.elapsed_model_time},
              {"terminal_residual", r.terminal_residual},
              {"max_edge_s", r.max_edge_s},
              {"V_final", r.V_final},
              {"steps", r.steps}};
}

inline json sim_summary_json(const So3SimResult& r) {
  return json{{"outcome", to_string(r.outcome)},
              {"elapsed_model_time", r.elapsed_model_time},
              {"terminal_residual", r.terminal_residual},
              {"max_edge_s", r.max_edge_s},
              {"V_final", r.V_final},
              {"steps", r.steps}};
}

inline json batch_to_json(const TrialBatch& batch, const json& spec_echo) {
  json digests = json::array();
  for (const auto& d : batch.failure_digests) {
    digests.push_back(json{{"trial", d.trial},
                           {"terminal_residual", d.terminal_residual},
                           {"max_edge_s", d.max_edge_s},
                           {"min_edge_s", d.min_edge_s},
                           {"V_final", d.V_final}});
  }
  return json{{"spec", spec_echo},
              {"trials", batch.trials},
              {"seed", batch.seed},
              {"consensus", batch.consensus},
              {"failures", batch.failures},
              {"timeouts", batch.timeouts},
              {"aborted", batch.aborted},
              {"failure_fraction", batch.failure_fraction},
              {"inconclusive", batch.inconclusive},
              {"wall_time_s", batch.wall_time_s},
              {"failure_digests", digests}};
}

/// Trajectory CSV, one row per (sample, agent): t,agent,c0..c{n}.
inline void write_sphere_trajectory_csv(std::ostream& out, const SphereSimResult& result,
                                        int sphere_dim) {
  out << "t,agent";
  for (int k = 0; k <= sphere_dim; ++k) out << ",c" << k;
  out << "\n";
  out.precision(17);
  for (const auto& sample : result.trajectory) {
    for (std::size_t agent = 0; agent < sample.states.size(); ++agent) {
      out << sample.t << "," << agent;
      for (int k = 0; k <= sphere_dim; ++k) out << "," << sample.states[agent](k);
      out << "\n";
    }
  }
}

/// Trajectory CSV for rotations: t,agent,r00..r22 (row-major).
inline void write_so3_trajectory_csv(std::ostream& out, const So3SimResult& result) {
  out << "t,agent";
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out << ",r" << a << b;
  out << "\n";
  out.precision(17);
  for (const auto& sample : result.trajectory) {
    for (std::size_t agent = 0; agent < sample.states.size(); ++agent) {
      out << sample.t << "," << agent;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out << "," << sample.states[agent](a, b);
      out << "\n";
    }
  }
}

}  // namespace spherecon
