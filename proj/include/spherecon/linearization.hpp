#pragma once

#include <spherecon/energy.hpp>
#include <spherecon/jacobi.hpp>
#include <spherecon/protocols.hpp>

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace spherecon {

/// Linearization matrix H (the negative Riemannian Hessian of the potential)
/// in ambient block coordinates. Block (i,i) is
///   -<u_i, x_i> P_i - sum_{j in N_i} f'_ij P_i X_j P_i,
/// block (i,j) for an edge is P_i (f_ij I - f'_ij x_j x_i^T) P_j, and zero
/// otherwise. Off-diagonal blocks satisfy H_ji = H_ij^T by construction.
inline Eigen::MatrixXd assemble_hessian(const SphereConfig& cfg, const Graph& graph,
                                        const GainTable& gains) {
  if (graph.num_nodes() != cfg.size()) {
    throw std::invalid_argument("assemble_hessian: graph/config size mismatch");
  }
  const int n1 = cfg.ambient_dim();
  const int N = cfg.size();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n1, n1);

  std::vector<Eigen::MatrixXd> proj;
  proj.reserve(N);
  for (int i = 0; i < N; ++i) {
    const auto& x = cfg[i].coords();
    proj.push_back(id - x * x.transpose());
  }
  const auto u = sphere_input(cfg, graph, gains);

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(N * n1, N * n1);
  for (int i = 0; i < N; ++i) {
    h.block(i * n1, i * n1, n1, n1) = -u[i].dot(cfg[i].coords()) * proj[i];
  }
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    const auto& xi = cfg[i].coords();
    const auto& xj = cfg[j].coords();
    const double s = 1.0 - std::clamp(xi.dot(xj), -1.0, 1.0);
    const auto [f, fp] = gains[graph.edge_gain(e)].evaluate(s);

    h.block(i * n1, i * n1, n1, n1) -= fp * proj[i] * (xj * xj.transpose()) * proj[i];
    h.block(j * n1, j * n1, n1, n1) -= fp * proj[j] * (xi * xi.transpose()) * proj[j];

    const Eigen::MatrixXd block_ij = proj[i] * (f * id - fp * xj * xi.transpose()) * proj[j];
    h.block(i * n1, j * n1, n1, n1) = block_ij;
    h.block(j * n1, i * n1, n1, n1) = block_ij.transpose();
  }
  return h;
}

struct ReducedMatrix {
  Eigen::MatrixXd G;
  double trace = 0.0;
};

/// G = sum_i H_ii + sum_i sum_{j in N_i} H_ij, the (n+1)x(n+1) matrix whose
/// trace certifies instability of non-consensus equilibria.
inline ReducedMatrix reduced_g(const SphereConfig& cfg, const Graph& graph,
                               const GainTable& gains) {
  const Eigen::MatrixXd h = assemble_hessian(cfg, graph, gains);
  const int n1 = cfg.ambient_dim();
  ReducedMatrix out;
  out.G = Eigen::MatrixXd::Zero(n1, n1);
  for (int i = 0; i < cfg.size(); ++i) {
    out.G += h.block(i * n1, i * n1, n1, n1);
    for (auto [j, e] : graph.incident(i)) {
      out.G += h.block(i * n1, j * n1, n1, n1);
    }
  }
  out.trace = out.G.trace();
  return out;
}

/// trace G = sum_i sum_{j in N_i} f_ij (n-2+s_ij) s_ij - f'_ij (2-s_ij) s_ij^2
/// evaluated directly, without assembling any blocks.
inline double trace_g_closed_form(const SphereConfig& cfg, const Graph& graph,
                                  const GainTable& gains) {
  const double n = cfg.dim();
  double trace = 0.0;
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto [i, j] = graph.edges()[e];
    const double s = geodesic_and_chordal(cfg[i], cfg[j]).s;
    const auto [f, fp] = gains[graph.edge_gain(e)].evaluate(s);
    trace += 2.0 * (f * (n - 2.0 + s) * s - fp * (2.0 - s) * s * s);
  }
  return trace;
}

/// Block-diagonal orthonormal basis of the tangent space at cfg: column block
/// i spans x_i-perp. Used to deflate the N structural radial zero directions
/// of the ambient assembly before any spectral verdict.
inline Eigen::MatrixXd tangent_basis(const SphereConfig& cfg) {
  const int n1 = cfg.ambient_dim();
  const int n = cfg.dim();
  const int N = cfg.size();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(N * n1, N * n);
  for (int i = 0; i < N; ++i) {
    Eigen::MatrixXd col = cfg[i].coords();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(col);
    Eigen::MatrixXd q = qr.householderQ();
    basis.block(i * n1, i * n, n1, n) = q.rightCols(n);
  }
  return basis;
}

enum class Verdict { consensus_stable, exponentially_unstable, indeterminate };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consensus_stable: return "consensus-stable";
    case Verdict::exponentially_unstable: return "exponentially-unstable";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

struct LinearizationReport {
  Eigen::MatrixXd H;
  Eigen::MatrixXd G;
  double trace_G = 0.0;
  Eigen::VectorXd spectrum;          // ambient spectrum of H (ascending)
  Eigen::VectorXd tangent_spectrum;  // spectrum restricted to the tangent subspace
  Eigen::MatrixXd tangent_vectors;   // ambient coordinates, aligned with tangent_spectrum
  double max_eig = 0.0;              // largest tangent eigenvalue
  int n_zero_tangent = 0;
  double residual = 0.0;
  Verdict verdict = Verdict::indeterminate;
};

/// Spectral classification of an equilibrium. The verdict uses relative
/// thresholds (1e-8 * spectral radius) to split zero from signed eigenvalues,
/// since the consensus manifold forces an exact n-dimensional kernel that
/// floating point smears. A residual above `residual_tol` downgrades the
/// verdict to indeterminate rather than classifying a non-equilibrium.
inline LinearizationReport classify_equilibrium(const SphereConfig& cfg, const Graph& graph,
                                                const GainTable& gains,
                                                double residual_tol = 1e-8) {
  LinearizationReport report;
  report.residual = equilibrium_residual(cfg, graph, gains);
  report.H = assemble_hessian(cfg, graph, gains);
  const auto reduced = reduced_g(cfg, graph, gains);
  report.G = reduced.G;
  report.trace_G = reduced.trace;

  report.spectrum = symmetric_spectrum(report.H).values;

  const Eigen::MatrixXd basis = tangent_basis(cfg);
  const Eigen::MatrixXd ht = basis.transpose() * report.H * basis;
  const auto tangent = symmetric_spectrum(ht);
  report.tangent_spectrum = tangent.values;
  report.tangent_vectors = basis * tangent.vectors;

  const int nt = static_cast<int>(tangent.values.size());
  report.max_eig = tangent.values(nt - 1);
  const double radius = std::max(std::abs(tangent.values(0)), std::abs(tangent.values(nt - 1)));
  const double threshold = 1e-8 * std::max(radius, 1e-300);
  for (int k = 0; k < nt; ++k) {
    if (std::abs(tangent.values(k)) <= threshold) ++report.n_zero_tangent;
  }

  if (report.residual >= residual_tol) {
    report.verdict = Verdict::indeterminate;
    return report;
  }

  if (report.max_eig > threshold) {
    report.verdict = Verdict::exponentially_unstable;
  } else {
    const bool at_consensus = kernel::max_edge_chordal(cfg.raw(), graph) < 1e-10;
    const bool kernel_dim_matches = report.n_zero_tangent == cfg.dim();
    if (at_consensus && graph.is_connected() && kernel_dim_matches && radius > 0.0) {
      report.verdict = Verdict::consensus_stable;
    } else {
      report.verdict = Verdict::indeterminate;
    }
  }

  // Rayleigh certificate (min-max argument): a positive trace of G forces a
  // positive tangent eigenvalue of at least trace(G) / (N (n+1)).
  if (report.trace_G > 1e-8 * std::max(1.0, radius)) {
    const double bound = report.trace_G / (cfg.size() * cfg.ambient_dim());
    if (report.max_eig < bound - threshold) {
      throw std::logic_error("classify_equilibrium: trace certificate violated");
    }
  }
  return report;
}

}  // namespace spherecon
