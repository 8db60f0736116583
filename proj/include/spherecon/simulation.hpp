#pragma once

#include <spherecon/energy.hpp>
#include <spherecon/protocols.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherecon {

/// Raised when a state turns non-finite mid-run (the usual cause is a step
/// size too large for the gain magnitudes).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimOptions {
  double dt = 0.0;  // 0 selects the default: 0.01/maxgain (sphere), 0.005/maxgain (SO(3))
  double t_max = 2000.0;
  double consensus_tol = 1e-9;
  double equilibrium_tol = 1e-10;
  bool backward = false;  // integrate the negated vector field
  bool record_trajectory = false;
  int record_stride = 50;
};

enum class Outcome { consensus, non_consensus_equilibrium, timeout };

inline std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::consensus: return "consensus";
    case Outcome::non_consensus_equilibrium: return "non-consensus-equilibrium";
    case Outcome::timeout: return "timeout";
  }
  return "timeout";
}

struct SphereSample {
  double t;
  std::vector<Eigen::VectorXd> states;
  double V;
};

struct SphereSimResult {
  Outcome outcome;
  SphereConfig final_state;
  double elapsed_model_time = 0.0;
  double terminal_residual = 0.0;
  double max_edge_s = 0.0;
  double V_final = 0.0;
  long steps = 0;
  /// Largest per-step potential change against the flow direction, normalized
  /// by max(1, V); stays below 1e-8 for a healthy run.
  double max_v_violation = 0.0;
  std::vector<SphereSample> trajectory;
};

enum class So3Protocol { naive, composite };

struct So3Sample {
  double t;
  std::vector<Eigen::Matrix3d> states;
  double V;
};

struct So3SimResult {
  Outcome outcome;
  RotationConfig final_state;
  double elapsed_model_time = 0.0;
  double terminal_residual = 0.0;
  double max_edge_s = 0.0;
  double V_final = 0.0;
  long steps = 0;
  double max_v_violation = 0.0;  // meaningful for the naive (gradient) protocol
  std::vector<So3Sample> trajectory;
};

namespace detail {

inline void ensure_finite(const std::vector<Eigen::VectorXd>& x) {
  for (const auto& v : x) {
    if (!v.allFinite()) {
      throw NumericalError("integrate_sphere: state became non-finite (dt too large?)");
    }
  }
}

inline void ensure_finite(const std::vector<Eigen::Matrix3d>& r) {
  for (const auto& m : r) {
    if (!m.allFinite()) {
      throw NumericalError("integrate_so3: state became non-finite (dt too large?)");
    }
  }
}

}  // namespace detail

/// Classical RK4 on the ambient representation followed by per-agent
/// renormalization (an exact retraction on the sphere). Terminates on
/// consensus (max edge s below consensus_tol), equilibrium (residual below
/// equilibrium_tol), or timeout.
inline SphereSimResult integrate_sphere(const SphereConfig& cfg0, const Graph& graph,
                                        const GainTable& gains, const SimOptions& opts = {}) {
  if (!graph.is_connected()) {
    throw std::invalid_argument("integrate_sphere: graph must be connected");
  }
  if (graph.num_nodes() != cfg0.size()) {
    throw std::invalid_argument("integrate_sphere: graph/config size mismatch");
  }
  const double dt = opts.dt > 0.0 ? opts.dt : 0.01 / std::max(gains.max_abs(0.0, 2.0), 1e-8);
  const double dir = opts.backward ? -1.0 : 1.0;
  const int N = cfg0.size();
  const int n1 = cfg0.ambient_dim();

  auto x = cfg0.raw();
  using kernel::StateList;
  StateList u(N, Eigen::VectorXd::Zero(n1));
  StateList k1 = u, k2 = u, k3 = u, k4 = u, xs = x;

  double t = 0.0;
  long steps = 0;
  double v_now = kernel::potential_value(x, graph, gains);
  double max_violation = 0.0;
  Outcome outcome = Outcome::timeout;

  SphereSimResult result{outcome, cfg0};
  auto record = [&](double time, double v) {
    if (opts.record_trajectory) result.trajectory.push_back(SphereSample{time, x, v});
  };
  record(0.0, v_now);

  double residual = 0.0;
  while (true) {
    kernel::sphere_rhs_into(x, graph, gains, u, k1);
    residual = 0.0;
    for (const auto& k : k1) residual = std::max(residual, k.norm());
    const double max_s = kernel::max_edge_chordal(x, graph);
    if (max_s < opts.consensus_tol) {
      outcome = Outcome::consensus;
      break;
    }
    if (residual < opts.equilibrium_tol) {
      outcome = Outcome::non_consensus_equilibrium;
      break;
    }
    if (t >= opts.t_max) {
      outcome = Outcome::timeout;
      break;
    }

    for (int i = 0; i < N; ++i) xs[i] = x[i] + dir * (0.5 * dt) * k1[i];
    kernel::sphere_rhs_into(xs, graph, gains, u, k2);
    for (int i = 0; i < N; ++i) xs[i] = x[i] + dir * (0.5 * dt) * k2[i];
    kernel::sphere_rhs_into(xs, graph, gains, u, k3);
    for (int i = 0; i < N; ++i) xs[i] = x[i] + dir * dt * k3[i];
    kernel::sphere_rhs_into(xs, graph, gains, u, k4);
    for (int i = 0; i < N; ++i) {
      x[i] += dir * (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      const double norm = x[i].norm();
      if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw NumericalError("integrate_sphere: state became non-finite (dt too large?)");
      }
      x[i] /= norm;
    }
    t += dt;
    ++steps;

    const double v_next = kernel::potential_value(x, graph, gains);
    max_violation =
        std::max(max_violation, dir * (v_next - v_now) / std::max(1.0, std::abs(v_now)));
    v_now = v_next;
    if (opts.record_trajectory && steps % opts.record_stride == 0) record(t, v_now);
  }

  result.outcome = outcome;
  result.final_state = SphereConfig::from_raw(x);
  result.elapsed_model_time = t;
  result.terminal_residual = residual;
  result.max_edge_s = kernel::max_edge_chordal(x, graph);
  result.V_final = v_now;
  result.steps = steps;
  result.max_v_violation = max_violation;
  if (opts.record_trajectory && (result.trajectory.empty() || result.trajectory.back().t != t)) {
    record(t, v_now);
  }
  return result;
}

/// Lie-Euler step R <- exp(dt Omega) R via the Rodrigues closed form, so the
/// states stay in SO(3) to machine precision; a cheap column re-orthogonali-
/// zation each step keeps the drift of long runs below 1e-12.
inline So3SimResult integrate_so3(const RotationConfig& cfg0, const Graph& graph,
                                  const GainTable& gains, So3Protocol protocol,
                                  const CircleProtocol& circle = CircleProtocol{2},
                                  const SimOptions& opts = {}) {
  if (!graph.is_connected()) {
    throw std::invalid_argument("integrate_so3: graph must be connected");
  }
  if (graph.num_nodes() != cfg0.size()) {
    throw std::invalid_argument("integrate_so3: graph/config size mismatch");
  }
  if (protocol == So3Protocol::composite && circle.n_bound < cfg0.size()) {
    throw std::invalid_argument("integrate_so3: circle protocol bound below agent count");
  }
  const double dt = opts.dt > 0.0 ? opts.dt : 0.005 / std::max(gains.max_abs(0.0, 4.0), 1e-8);
  const double dir = opts.backward ? -1.0 : 1.0;
  const int N = cfg0.size();

  auto r = cfg0.raw();
  using kernel::RotationList;
  RotationList omega(N, Eigen::Matrix3d::Zero());

  double t = 0.0;
  long steps = 0;
  double v_now = kernel::potential_value_so3(r, graph, gains);
  double max_violation = 0.0;
  Outcome outcome = Outcome::timeout;

  So3SimResult result{outcome, cfg0};
  auto record = [&](double time, double v) {
    if (opts.record_trajectory) result.trajectory.push_back(So3Sample{time, r, v});
  };
  record(0.0, v_now);

  double residual = 0.0;
  while (true) {
    if (protocol == So3Protocol::naive) {
      kernel::so3_naive_into(r, graph, gains, omega);
    } else {
      kernel::so3_composite_into(r, graph, gains, circle, omega);
    }
    residual = 0.0;
    for (const auto& w : omega) residual = std::max(residual, w.norm());
    const double max_s = kernel::max_edge_chordal_so3(r, graph);
    if (max_s < opts.consensus_tol) {
      outcome = Outcome::consensus;
      break;
    }
    if (residual < opts.equilibrium_tol) {
      outcome = Outcome::non_consensus_equilibrium;
      break;
    }
    if (t >= opts.t_max) {
      outcome = Outcome::timeout;
      break;
    }

    for (int i = 0; i < N; ++i) {
      const Eigen::Vector3d w(omega[i](2, 1), omega[i](0, 2), omega[i](1, 0));
      r[i] = rotation_exp(dir * dt * w) * r[i];
      if (!r[i].allFinite()) {
        throw NumericalError("integrate_so3: state became non-finite (dt too large?)");
      }
      // column Gram-Schmidt repair
      r[i].col(0).normalize();
      r[i].col(1) = (r[i].col(1) - r[i].col(1).dot(r[i].col(0)) * r[i].col(0)).normalized();
      r[i].col(2) = r[i].col(0).cross(r[i].col(1));
    }
    t += dt;
    ++steps;

    const double v_next = kernel::potential_value_so3(r, graph, gains);
    max_violation =
        std::max(max_violation, dir * (v_next - v_now) / std::max(1.0, std::abs(v_now)));
    v_now = v_next;
    if (opts.record_trajectory && steps % opts.record_stride == 0) record(t, v_now);
  }

  result.outcome = outcome;
  result.final_state = RotationConfig::from_raw(r);
  result.elapsed_model_time = t;
  result.terminal_residual = residual;
  result.max_edge_s = kernel::max_edge_chordal_so3(r, graph);
  result.V_final = v_now;
  result.steps = steps;
  result.max_v_violation = max_violation;
  if (opts.record_trajectory && (result.trajectory.empty() || result.trajectory.back().t != t)) {
    record(t, v_now);
  }
  return result;
}

}  // namespace spherecon
