#pragma once

#include <spherecon/gains.hpp>
#include <spherecon/geometry.hpp>
#include <spherecon/topology.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spherecon {

/// Ordered list of N agent states on a common n-sphere.
class SphereConfig {
 public:
  explicit SphereConfig(std::vector<UnitVector> states) : states_(std::move(states)) {
    if (states_.empty()) throw std::invalid_argument("SphereConfig: empty");
    for (const auto& x : states_) {
      if (x.dim() != states_.front().dim()) {
        throw std::invalid_argument("SphereConfig: mixed sphere dimensions");
      }
    }
  }

  int size() const { return static_cast<int>(states_.size()); }
  int dim() const { return states_.front().dim(); }
  int ambient_dim() const { return dim() + 1; }
  const UnitVector& operator[](int i) const { return states_.at(i); }
  const std::vector<UnitVector>& states() const { return states_; }

  /// Raw coordinate copies for the integrator kernels.
  std::vector<Eigen::VectorXd> raw() const {
    std::vector<Eigen::VectorXd> out;
    out.reserve(states_.size());
    for (const auto& x : states_) out.push_back(x.coords());
    return out;
  }

  static SphereConfig from_raw(const std::vector<Eigen::VectorXd>& raw) {
    std::vector<UnitVector> states;
    states.reserve(raw.size());
    for (const auto& v : raw) states.push_back(UnitVector::normalized(v));
    return SphereConfig(std::move(states));
  }

 private:
  std::vector<UnitVector> states_;
};

/// Ordered list of N agent attitudes in SO(3).
class RotationConfig {
 public:
  explicit RotationConfig(std::vector<Rotation3> states) : states_(std::move(states)) {
    if (states_.empty()) throw std::invalid_argument("RotationConfig: empty");
  }

  int size() const { return static_cast<int>(states_.size()); }
  const Rotation3& operator[](int i) const { return states_.at(i); }
  const std::vector<Rotation3>& states() const { return states_; }

  std::vector<Eigen::Matrix3d> raw() const {
    std::vector<Eigen::Matrix3d> out;
    out.reserve(states_.size());
    for (const auto& r : states_) out.push_back(r.matrix());
    return out;
  }

  static RotationConfig from_raw(const std::vector<Eigen::Matrix3d>& raw) {
    std::vector<Rotation3> states;
    states.reserve(raw.size());
    for (const auto& m : raw) states.push_back(Rotation3::orthonormalized(m));
    return RotationConfig(std::move(states));
  }

 private:
  std::vector<Rotation3> states_;
};

/// Piecewise-linear circle reshaping map with breakpoints at +-pi/N. It is
/// continuous with g(-pi) = g(pi) = 0 and odd on (-pi, pi); the identity
/// branch near zero keeps local consensus dynamics untouched.
inline double circle_reshape(double theta, int n_bound) {
  if (n_bound < 2) throw std::invalid_argument("circle_reshape: N bound must be >= 2");
  constexpr double pi = std::numbers::pi;
  if (theta < -pi - 1e-12 || theta > pi + 1e-12) {
    throw std::invalid_argument("circle_reshape: theta outside (-pi, pi]");
  }
  theta = std::clamp(theta, -pi, pi);
  const double split = pi / n_bound;
  if (theta < -split) return -(pi + theta) / (n_bound - 1);
  if (theta > split) return (pi - theta) / (n_bound - 1);
  return theta;
}

/// The circle protocol used inside Algorithm 4. Its only global parameter is
/// an upper bound on the number of agents.
struct CircleProtocol {
  int n_bound;
  double g(double theta) const { return circle_reshape(theta, n_bound); }
};

namespace kernel {

using StateList = std::vector<Eigen::VectorXd>;
using RotationList = std::vector<Eigen::Matrix3d>;

/// u_i = sum_{j in N_i} f_ij(s_ij) x_j on raw coordinates.
inline void sphere_input_into(const StateList& x, const Graph& graph, const GainTable& gains,
                              StateList& u) {
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) u[i].setZero();
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    const double s = chordal_s(x[i], x[j]);
    const double f = gains[graph.edge_gain(e)].evaluate_unchecked(s).first;
    u[i] += f * x[j];
    u[j] += f * x[i];
  }
}

/// dx_i/dt = P_i u_i. `u` is an in/out scratch buffer receiving the inputs.
inline void sphere_rhs_into(const StateList& x, const Graph& graph, const GainTable& gains,
                            StateList& u, StateList& out) {
  sphere_input_into(x, graph, gains, u);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = u[i] - u[i].dot(x[i]) * x[i];
  }
}

inline double max_edge_chordal(const StateList& x, const Graph& graph) {
  double m = 0.0;
  for (const auto& [i, j] : graph.edges()) m = std::max(m, chordal_s(x[i], x[j]));
  return m;
}

inline double so3_chordal(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return 3.0 - (a.transpose() * b).trace();
}

inline double max_edge_chordal_so3(const RotationList& r, const Graph& graph) {
  double m = 0.0;
  for (const auto& [i, j] : graph.edges()) m = std::max(m, so3_chordal(r[i], r[j]));
  return m;
}

/// Algorithm 3 input in the world frame:
/// Omega_i = sum_j f_ij(s_ij) (R_j R_i^T - R_i R_j^T), s_ij = 3 - <R_i, R_j>.
/// With the closed loop dR_i/dt = Omega_i R_i this is the gradient descent
/// flow of the rotation-space potential (the relative-rotation form
/// R_i^T R_j - R_j^T R_i is the same input expressed in the body frame and
/// yields the identical closed loop under right multiplication).
inline void so3_naive_into(const RotationList& r, const Graph& graph, const GainTable& gains,
                           RotationList& omega) {
  const int n = static_cast<int>(r.size());
  for (int i = 0; i < n; ++i) omega[i].setZero();
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    const double s = so3_chordal(r[i], r[j]);
    const double f = gains[graph.edge_gain(e)].evaluate_rotation(s).first;
    const Eigen::Matrix3d m = f * (r[j] * r[i].transpose());
    omega[i] += m - m.transpose();
    const Eigen::Matrix3d mj = f * (r[i] * r[j].transpose());
    omega[j] += mj - mj.transpose();
  }
  for (int i = 0; i < n; ++i) {
    omega[i] = 0.5 * (omega[i] - omega[i].transpose().eval());
  }
}

inline double sign_positive_zero(double v) { return v < 0.0 ? -1.0 : 1.0; }

/// Algorithm 4 input: Omega_i = S(x_i cross u_i + (sum_j g_ij) x_i) where u_i
/// is the Algorithm 2 input on the first columns and g_ij lifts the circle
/// protocol through the signed relative arc of the y/z columns.
inline void so3_composite_into(const RotationList& r, const Graph& graph, const GainTable& gains,
                               const CircleProtocol& circle, RotationList& omega) {
  const int n = static_cast<int>(r.size());
  if (circle.n_bound < n) {
    throw std::invalid_argument("so3_composite: circle protocol bound below agent count");
  }
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    double g_sum = 0.0;
    const Eigen::Vector3d x_i = r[i].col(0);
    const Eigen::Vector3d y_i = r[i].col(1);
    const Eigen::Vector3d z_i = r[i].col(2);
    for (auto [j, e] : graph.incident(i)) {
      const Eigen::Vector3d x_j = r[j].col(0);
      const double s = 1.0 - std::clamp(x_i.dot(x_j), -1.0, 1.0);
      u += gains[graph.edge_gain(e)].evaluate_unchecked(s).first * x_j;
      const Eigen::Vector3d y_j = r[j].col(1);
      const double a = y_i.dot(y_j);
      const double b = z_i.dot(y_j);
      const double denom2 = a * a + b * b;
      if (denom2 < 1e-24) continue;  // y_j parallel to x_i: measure-zero, g_ij := 0
      const double arc =
          std::acos(std::clamp(a / std::sqrt(denom2), -1.0, 1.0)) * sign_positive_zero(b);
      g_sum += circle.g(arc);
    }
    omega[i] = skew(x_i.cross(u) + g_sum * x_i);
  }
}

}  // namespace kernel

/// Algorithm 2 input signals; with constant gains this is Algorithm 1.
inline std::vector<Eigen::VectorXd> sphere_input(const SphereConfig& cfg, const Graph& graph,
                                                 const GainTable& gains) {
  if (graph.num_nodes() != cfg.size()) {
    throw std::invalid_argument("sphere_input: graph/config size mismatch");
  }
  auto x = cfg.raw();
  std::vector<Eigen::VectorXd> u(x.size(), Eigen::VectorXd::Zero(cfg.ambient_dim()));
  kernel::sphere_input_into(x, graph, gains, u);
  return u;
}

/// Closed-loop right-hand side of System 1: dx_i/dt = P_i u_i.
inline std::vector<TangentVector> sphere_rhs(const SphereConfig& cfg, const Graph& graph,
                                             const GainTable& gains) {
  auto u = sphere_input(cfg, graph, gains);
  std::vector<TangentVector> out;
  out.reserve(u.size());
  for (int i = 0; i < cfg.size(); ++i) {
    out.push_back(project(cfg[i], u[i]));
  }
  return out;
}

/// Max_i |P_i u_i|: distance from equilibrium in the flow metric.
inline double equilibrium_residual(const SphereConfig& cfg, const Graph& graph,
                                   const GainTable& gains) {
  double r = 0.0;
  for (const auto& v : sphere_rhs(cfg, graph, gains)) r = std::max(r, v.norm());
  return r;
}

inline std::vector<Eigen::Matrix3d> so3_naive_input(const RotationConfig& cfg, const Graph& graph,
                                                    const GainTable& gains) {
  if (graph.num_nodes() != cfg.size()) {
    throw std::invalid_argument("so3_naive_input: graph/config size mismatch");
  }
  auto r = cfg.raw();
  std::vector<Eigen::Matrix3d> omega(r.size(), Eigen::Matrix3d::Zero());
  kernel::so3_naive_into(r, graph, gains, omega);
  return omega;
}

inline std::vector<Eigen::Matrix3d> so3_composite_input(const RotationConfig& cfg,
                                                        const Graph& graph,
                                                        const GainTable& gains,
                                                        const CircleProtocol& circle) {
  if (graph.num_nodes() != cfg.size()) {
    throw std::invalid_argument("so3_composite_input: graph/config size mismatch");
  }
  auto r = cfg.raw();
  std::vector<Eigen::Matrix3d> omega(r.size(), Eigen::Matrix3d::Zero());
  kernel::so3_composite_into(r, graph, gains, circle, omega);
  return omega;
}

}  // namespace spherecon
