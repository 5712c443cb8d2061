#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "hyperstab/jacobi.hpp"
#include "hyperstab/laplacian.hpp"

namespace hyperstab {

/// Full real spectrum of a hypergraph Laplacian.
///
/// eigenvalues are sorted ascending; eigenvectors (columns) belong to L
/// itself and are obtained from the orthonormal eigenvectors of the
/// symmetric similar matrix K by the D^-1/2 back-transformation.  The
/// K-coordinate eigenvectors are kept alongside because the kernel
/// projector and modal decompositions are exact in those coordinates.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;      // of L, column k for eigenvalue k
  Eigen::MatrixXd sym_eigenvectors;  // of K, orthonormal
  Eigen::VectorXd degrees;
  double zero_tol = 0.0;
  int zero_multiplicity = 0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

inline double default_zero_tol(int n) { return 1e-9 * n; }

/// Computes the full eigendecomposition of L via cyclic Jacobi rotations on
/// K = D^-1/2 S S^T D^-1/2.  Tiny negative eigenvalues (>= -zero_tol) are
/// clamped to zero; anything more negative violates the PSD structure and
/// raises an internal-consistency error.
inline Spectrum spectrum(const LaplacianMatrix& L, double zero_tol = -1.0) {
  const int n = static_cast<int>(L.dense.rows());
  if (zero_tol < 0.0) zero_tol = default_zero_tol(n);

  const Eigen::MatrixXd K = symmetrized_laplacian(L);
  JacobiResult jr = jacobi_eigen(K);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return jr.eigenvalues(a) < jr.eigenvalues(b);
  });

  Spectrum s;
  s.zero_tol = zero_tol;
  s.degrees = L.degrees;
  s.eigenvalues.resize(n);
  s.sym_eigenvectors.resize(n, n);
  s.eigenvectors.resize(n, n);
  const Eigen::VectorXd inv_sqrt_d = L.degrees.cwiseSqrt().cwiseInverse();

  for (int k = 0; k < n; ++k) {
    double lam = jr.eigenvalues(order[k]);
    if (lam < -zero_tol)
      throw InternalError("eigenvalue " + std::to_string(lam) +
                          " below -zero_tol: PSD structure violated");
    if (lam < 0.0) lam = 0.0;
    s.eigenvalues(k) = lam;

    Eigen::VectorXd w = jr.eigenvectors.col(order[k]);
    // Deterministic sign: largest-magnitude entry positive, ties to the
    // lowest index.
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(w(i)) > std::abs(w(imax))) imax = i;
    if (w(imax) < 0.0) w = -w;
    s.sym_eigenvectors.col(k) = w;
    s.eigenvectors.col(k) = inv_sqrt_d.asDiagonal() * w;
  }

  s.zero_multiplicity = 0;
  for (int k = 0; k < n; ++k)
    if (s.eigenvalues(k) <= zero_tol) ++s.zero_multiplicity;
  return s;
}

inline Spectrum spectrum(const ChemicalHypergraph& H, double zero_tol = -1.0) {
  return spectrum(laplacian(H), zero_tol);
}

struct SpectralSummary {
  int zero_multiplicity = 0;
  std::optional<double> lambda_min_nonzero;  // absent when all modes neutral
  double lambda_max = 0.0;
};

inline SpectralSummary spectral_summary(const Spectrum& s) {
  SpectralSummary sum;
  sum.zero_multiplicity = s.zero_multiplicity;
  if (s.zero_multiplicity < s.size())
    sum.lambda_min_nonzero = s.eigenvalues(s.zero_multiplicity);
  sum.lambda_max = s.eigenvalues(s.size() - 1);
  return sum;
}

/// Projector onto the zero-eigenvalue eigenspace, orthogonal with respect
/// to the degree-weighted inner product: P = D^-1/2 W0 W0^T D^1/2 with W0
/// the orthonormal K-coordinate kernel basis.  Satisfies P^2 = P and
/// L P = 0 up to rounding.
inline Eigen::MatrixXd kernel_projector(const Spectrum& s) {
  if (s.zero_multiplicity == 0)
    throw SyncPrecludedError(
        "no neutral modes; synchronized dynamics precluded");
  const int n = s.size();
  const int k0 = s.zero_multiplicity;
  const Eigen::MatrixXd W0 = s.sym_eigenvectors.leftCols(k0);
  const Eigen::VectorXd sqrt_d = s.degrees.cwiseSqrt();
  return sqrt_d.cwiseInverse().asDiagonal() * (W0 * W0.transpose()) *
         sqrt_d.asDiagonal();
}

struct BipartiteBoundReport {
  double lambda_max = 0.0;      // largest eigenvalue of H
  double lambda_max_bip = 0.0;  // largest eigenvalue of the comparison H_bip
  bool bound_holds = false;     // lambda_max <= lambda_max_bip + 1e-9
};

/// Instance check of the extremal property of bipartite hypergraphs: H_bip
/// must have the same number of hyperedges and the same per-hyperedge
/// counts of pure inputs and pure outputs as H.  Reports both largest
/// eigenvalues and whether the bound holds; this checks one instance, it
/// proves nothing.
inline BipartiteBoundReport bipartite_bound_check(const ChemicalHypergraph& H,
                                                  const ChemicalHypergraph& H_bip) {
  if (H.n_hyperedges() != H_bip.n_hyperedges())
    throw ValidationError("bipartite_bound_check: hyperedge counts differ");
  for (int h = 0; h < H.n_hyperedges(); ++h) {
    const Hyperedge& a = H.hyperedge(h);
    const Hyperedge& b = H_bip.hyperedge(h);
    const int ca = static_cast<int>(a.catalysts().size());
    const int cb = static_cast<int>(b.catalysts().size());
    const int a_in = static_cast<int>(a.inputs.size()) - ca;
    const int a_out = static_cast<int>(a.outputs.size()) - ca;
    const int b_in = static_cast<int>(b.inputs.size()) - cb;
    const int b_out = static_cast<int>(b.outputs.size()) - cb;
    if (a_in != b_in || a_out != b_out)
      throw ValidationError("bipartite_bound_check: hyperedge " +
                            std::to_string(h) +
                            " input/output counts differ between operands");
  }
  BipartiteBoundReport rep;
  rep.lambda_max = spectral_summary(spectrum(H)).lambda_max;
  rep.lambda_max_bip = spectral_summary(spectrum(H_bip)).lambda_max;
  rep.bound_holds = rep.lambda_max <= rep.lambda_max_bip + 1e-9;
  return rep;
}

}  // namespace hyperstab
