#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "hyperstab/errors.hpp"

namespace hyperstab {

struct JacobiResult {
  Eigen::VectorXd eigenvalues;   // unsorted, diag of the rotated matrix
  Eigen::MatrixXd eigenvectors;  // orthonormal, column k for eigenvalue k
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for real symmetric matrices.  Sweeps rotate
/// every off-diagonal pair in a fixed (p,q) order until the off-diagonal
/// Frobenius norm falls below tol_factor * ||A||_F, with a hard cap of
/// max_sweeps sweeps.  Deterministic: the same input always produces the
/// same rotations.
inline JacobiResult jacobi_eigen(const Eigen::MatrixXd& A,
                                 double tol_factor = 1e-12,
                                 int max_sweeps = 100) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw ValidationError("jacobi_eigen: matrix not square");
  Eigen::MatrixXd M = A;
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);

  const double norm = M.norm();
  const double target = tol_factor * norm;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += M(p, q) * M(p, q);
    return std::sqrt(2.0 * s);
  };

  JacobiResult res;
  for (res.sweeps = 0; res.sweeps < max_sweeps; ++res.sweeps) {
    if (off_norm() <= target) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = M(p, q);
        if (apq == 0.0) continue;
        const double app = M(p, p);
        const double aqq = M(q, q);
        // Skip rotations that cannot change anything at working precision.
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (aqq - app) / (2.0 * apq);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // M <- J^T M J with J the (p,q) rotation.
        for (int k = 0; k < n; ++k) {
          const double mkp = M(k, p);
          const double mkq = M(k, q);
          M(k, p) = c * mkp - s * mkq;
          M(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = M(p, k);
          const double mqk = M(q, k);
          M(p, k) = c * mpk - s * mqk;
          M(q, k) = s * mpk + c * mqk;
        }
        // Zero the target pair explicitly to avoid residue buildup.
        M(p, q) = 0.0;
        M(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = V(k, p);
          const double vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  res.eigenvalues = M.diagonal();
  res.eigenvectors = std::move(V);
  return res;
}

}  // namespace hyperstab
