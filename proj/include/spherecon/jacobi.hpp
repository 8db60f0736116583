#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace spherecon {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns aligned with values
};

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations, swept until
/// the off-diagonal Frobenius norm falls below 1e-12 * |M|_F. The matrices in
/// this toolkit are small dense linearizations, where Jacobi delivers
/// uniformly accurate eigenpairs. Input asymmetry beyond 1e-8 * scale is
/// rejected; smaller asymmetry is symmetrized away.
inline SymmetricEigen symmetric_spectrum(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("symmetric_spectrum: not square");
  const int n = static_cast<int>(m.rows());
  const double scale = std::max(1.0, m.norm());
  if ((m - m.transpose()).norm() > 1e-8 * scale) {
    throw std::invalid_argument("symmetric_spectrum: matrix is not symmetric");
  }
  Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double norm = a.norm();
  const double tol = 1e-12 * std::max(norm, 1e-300);

  auto off_norm = [&]() {
    double sum = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) sum += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(sum);
  };

  constexpr int max_sweeps = 64;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > tol) {
    throw std::runtime_error("symmetric_spectrum: Jacobi iteration failed to converge");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace spherecon
