#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hyperstab/hypergraph.hpp"

namespace hyperstab {

/// Incidence structure of a chemical hypergraph.
///
/// binary(i,h)   = 1 iff vertex i is a member of hyperedge h.
/// oriented(i,h) = +1 for a pure input, -1 for a pure output, 0 for a
///                 catalyst or a non-member.
/// degrees(i)    = number of hyperedges in which i participates with a
///                 nonzero oriented entry, i.e. catalyst memberships do
///                 not count.
struct IncidenceMatrices {
  Eigen::MatrixXi binary;
  Eigen::MatrixXi oriented;
  Eigen::VectorXi degrees;
};

inline IncidenceMatrices incidence(const ChemicalHypergraph& H) {
  const int n = H.n_vertices();
  const int m = H.n_hyperedges();
  IncidenceMatrices inc;
  inc.binary = Eigen::MatrixXi::Zero(n, m);
  inc.oriented = Eigen::MatrixXi::Zero(n, m);
  inc.degrees = Eigen::VectorXi::Zero(n);
  for (int h = 0; h < m; ++h) {
    const Hyperedge& he = H.hyperedge(h);
    for (int v : he.inputs) {
      inc.binary(v, h) = 1;
      inc.oriented(v, h) = 1;
    }
    for (int v : he.outputs) {
      inc.binary(v, h) = 1;
      // A vertex that is also an input becomes a catalyst: net orientation 0.
      inc.oriented(v, h) -= 1;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int h = 0; h < m; ++h)
      if (inc.oriented(i, h) != 0) ++inc.degrees(i);
  return inc;
}

/// Codegree matrix: entry (i,j) counts the hyperedges containing both i and
/// j.  Computed as binary * binary^T, so it is symmetric PSD; the diagonal
/// holds per-vertex membership counts.
inline Eigen::MatrixXi codegree_matrix(const ChemicalHypergraph& H) {
  const Eigen::MatrixXi B = incidence(H).binary;
  return B * B.transpose();
}

struct RegularityReport {
  bool regular = false;        // all binary row sums equal
  Eigen::VectorXi row_sums;    // per-vertex membership counts
};

/// Checks whether every vertex belongs to the same number of hyperedges
/// (row sums of the binary incidence matrix are constant).
inline RegularityReport check_regular_incidence(const ChemicalHypergraph& H) {
  RegularityReport rep;
  rep.row_sums = incidence(H).binary.rowwise().sum();
  rep.regular = true;
  for (int i = 1; i < rep.row_sums.size(); ++i)
    if (rep.row_sums(i) != rep.row_sums(0)) rep.regular = false;
  return rep;
}

struct SyncInvarianceReport {
  bool invariant = false;       // constant vector lies in ker(S^T)
  std::vector<int> imbalance;   // per-hyperedge |V\W| - |W\V|
};

/// The fully synchronized state is dynamically invariant under Laplacian
/// coupling exactly when every hyperedge has as many pure inputs as pure
/// outputs; this reports the per-hyperedge imbalances.
inline SyncInvarianceReport sync_invariance_check(const ChemicalHypergraph& H) {
  SyncInvarianceReport rep;
  rep.invariant = true;
  rep.imbalance.reserve(H.n_hyperedges());
  for (const Hyperedge& he : H.hyperedges()) {
    int b = he.imbalance();
    rep.imbalance.push_back(b);
    if (b != 0) rep.invariant = false;
  }
  return rep;
}

}  // namespace hyperstab
