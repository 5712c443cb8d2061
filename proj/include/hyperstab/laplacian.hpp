#pragma once

#include <Eigen/Dense>

#include "hyperstab/hypergraph.hpp"
#include "hyperstab/incidence.hpp"

namespace hyperstab {

/// Normalized hypergraph Laplacian L = D^-1 S S^T, where S is the oriented
/// incidence matrix and D the diagonal of vertex degrees.  For hypergraphs
/// built from graphs this reduces to the normalized graph Laplacian
/// (Lu)(i) = u(i) - (1/deg i) * sum_{j~i} u(j).
struct LaplacianMatrix {
  Eigen::MatrixXd dense;    // N x N
  Eigen::VectorXd degrees;  // the D diagonal used
};

/// Assembles the Laplacian.  Every vertex must have degree >= 1; catalyst
/// contributions cancel out of S, so a vertex that is a catalyst in every
/// hyperedge it touches counts as isolated and is rejected.
inline LaplacianMatrix laplacian(const ChemicalHypergraph& H) {
  const IncidenceMatrices inc = incidence(H);
  const int n = H.n_vertices();
  for (int i = 0; i < n; ++i) {
    if (inc.degrees(i) == 0)
      throw DomainError("vertex " + H.vertex_name(i) +
                        " has degree 0 (isolated or catalyst-only); "
                        "Laplacian undefined");
  }
  // S S^T in exact integer arithmetic keeps the result bit-identical under
  // orientation swaps (which only flip column signs of S).
  const Eigen::MatrixXi gram = inc.oriented * inc.oriented.transpose();
  LaplacianMatrix L;
  L.degrees = inc.degrees.cast<double>();
  L.dense.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      L.dense(i, j) = static_cast<double>(gram(i, j)) / L.degrees(i);
  return L;
}

/// Symmetric similar matrix K = D^-1/2 S S^T D^-1/2.  Shares the spectrum
/// of L; eigenvectors map back through D^-1/2.
inline Eigen::MatrixXd symmetrized_laplacian(const LaplacianMatrix& L) {
  const int n = static_cast<int>(L.dense.rows());
  Eigen::VectorXd sqrt_d = L.degrees.cwiseSqrt();
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // L(i,j) = gram(i,j)/d_i, so gram(i,j) = L(i,j)*d_i.
      const double kij = L.dense(i, j) * L.degrees(i) / (sqrt_d(i) * sqrt_d(j));
      K(i, j) = kij;
      K(j, i) = kij;
    }
  }
  return K;
}

}  // namespace hyperstab
