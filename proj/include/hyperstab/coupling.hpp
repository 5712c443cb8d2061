#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hyperstab/dynamics.hpp"
#include "hyperstab/incidence.hpp"
#include "hyperstab/laplacian.hpp"

namespace hyperstab {

/// Instantaneous state of the full coupled system: row i of x is the state
/// of vertex i (N x m).
struct SystemState {
  double t = 0.0;
  Eigen::MatrixXd x;
};

struct RowSumReport {
  Eigen::VectorXd sums;
  bool constant = false;  // all row sums equal within 1e-12 (abs+rel)
  double value = 0.0;     // the common value when constant
};

inline RowSumReport row_sum_report(const Eigen::MatrixXd& A) {
  RowSumReport r;
  r.sums = A.rowwise().sum();
  const double lo = r.sums.minCoeff();
  const double hi = r.sums.maxCoeff();
  const double scale = std::max(1.0, r.sums.cwiseAbs().maxCoeff());
  r.constant = (hi - lo) <= 1e-12 * scale;
  r.value = r.constant ? r.sums(0) : 0.0;
  return r;
}

/// Pairwise coupling through an explicit matrix:
/// dx_i = f(x_i) + sum_j A_ij * h(x_j).
struct MatrixCoupling {
  Eigen::MatrixXd A;
  VertexDynamics h;
  RowSumReport row_sums;  // constancy makes the diagonal a synchronized orbit
};

inline MatrixCoupling make_matrix_coupling(Eigen::MatrixXd A,
                                           VertexDynamics h) {
  if (A.rows() != A.cols())
    throw ValidationError("coupling matrix must be square");
  MatrixCoupling c;
  c.row_sums = row_sum_report(A);
  c.A = std::move(A);
  c.h = std::move(h);
  return c;
}

/// Diffusive coupling through the hypergraph Laplacian applied to the
/// f-values: dx_i = f(x_i) - sigma * sum_j L_ij * f(x_j).
struct LaplacianDiffusive {
  double sigma = 0.0;
  LaplacianMatrix L;
};

inline LaplacianDiffusive make_laplacian_diffusive(double sigma,
                                                   LaplacianMatrix L) {
  return LaplacianDiffusive{sigma, std::move(L)};
}

enum class Aggregator { ArithmeticMean, GeometricMean };

/// Scalar function applied componentwise to the aggregated hyperedge state.
struct ScalarMap {
  std::string name;
  std::function<double(double)> g;
  std::function<double(double)> dg;
};

inline ScalarMap make_scalar_map(const std::string& name) {
  ScalarMap m;
  m.name = name;
  if (name == "identity") {
    m.g = [](double x) { return x; };
    m.dg = [](double) { return 1.0; };
  } else if (name == "tanh") {
    m.g = [](double x) { return std::tanh(x); };
    m.dg = [](double x) {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    };
  } else if (name == "sin") {
    m.g = [](double x) { return std::sin(x); };
    m.dg = [](double x) { return std::cos(x); };
  } else {
    throw UsageError("unknown scalar map '" + name +
                     "' (built-ins: identity, tanh, sin)");
  }
  return m;
}

/// Symmetric hyperedge coupling: dx_i = f(x_i) + sum_{h : i in h} a_ih *
/// g(aggregate over all members of h), aggregation componentwise over the
/// member states.  Membership weights a_ih are the binary incidence, so
/// catalysts participate like any other member.
struct HyperedgeSymmetric {
  ChemicalHypergraph H;
  Eigen::MatrixXi binary;                 // a_ih weights
  std::vector<std::vector<int>> members;  // support of each column, ascending
  ScalarMap g;
  Aggregator aggregator = Aggregator::ArithmeticMean;
};

inline HyperedgeSymmetric make_hyperedge_coupling(
    ChemicalHypergraph H, ScalarMap g,
    Aggregator agg = Aggregator::ArithmeticMean) {
  Eigen::MatrixXi binary = incidence(H).binary;
  std::vector<std::vector<int>> members(H.n_hyperedges());
  for (int h = 0; h < H.n_hyperedges(); ++h)
    for (int i = 0; i < H.n_vertices(); ++i)
      if (binary(i, h) != 0) members[h].push_back(i);
  return HyperedgeSymmetric{std::move(H), std::move(binary),
                            std::move(members), std::move(g), agg};
}

using CouplingSpec =
    std::variant<MatrixCoupling, LaplacianDiffusive, HyperedgeSymmetric>;

inline std::string coupling_description(const CouplingSpec& c) {
  if (const auto* mc = std::get_if<MatrixCoupling>(&c))
    return "matrix(" + std::to_string(mc->A.rows()) + "x" +
           std::to_string(mc->A.cols()) + ", h=" + mc->h.name + ")";
  if (const auto* ld = std::get_if<LaplacianDiffusive>(&c))
    return "laplacian(sigma=" + std::to_string(ld->sigma) + ")";
  const auto& hs = std::get<HyperedgeSymmetric>(c);
  return std::string("hyperedge(g=") + hs.g.name + ", " +
         (hs.aggregator == Aggregator::ArithmeticMean ? "arithmetic"
                                                      : "geometric") +
         ")";
}

namespace detail {

// Evaluates f at every vertex, checking finiteness; rows of the result are
// f(x_i).
inline Eigen::MatrixXd vertexwise(const VertexDynamics& dyn,
                                  const SystemState& s) {
  const int n = static_cast<int>(s.x.rows());
  Eigen::MatrixXd F(n, dyn.dim);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd fi = dyn.f(s.x.row(i).transpose());
    if (!fi.allFinite()) throw DivergenceError(i, s.t);
    F.row(i) = fi.transpose();
  }
  return F;
}

// Componentwise aggregate of the member states of one hyperedge.
inline Eigen::RowVectorXd aggregate(const HyperedgeSymmetric& c, int h,
                                    const Eigen::MatrixXd& x) {
  const auto& mem = c.members[h];
  const double inv_m = 1.0 / static_cast<double>(mem.size());
  const int m = static_cast<int>(x.cols());
  Eigen::RowVectorXd agg = Eigen::RowVectorXd::Zero(m);
  if (c.aggregator == Aggregator::ArithmeticMean) {
    for (int j : mem) agg += x.row(j);
    agg *= inv_m;
    return agg;
  }
  // Geometric mean via exp of the mean log; requires positive entries.
  for (int j : mem)
    for (int col = 0; col < m; ++col) {
      const double v = x(j, col);
      if (!(v > 0.0))
        throw DomainError(
            "geometric mean requires positive states; vertex " +
            std::to_string(j) + ", component " + std::to_string(col) +
            ", hyperedge " + std::to_string(h) + " has value " +
            std::to_string(v));
      agg(col) += std::log(v);
    }
  return (inv_m * agg).array().exp();
}

}  // namespace detail

/// Full right-hand side of the coupled system; rows indexed by vertex.
inline Eigen::MatrixXd rhs(const VertexDynamics& dyn, const CouplingSpec& c,
                           const SystemState& s) {
  const Eigen::MatrixXd F = detail::vertexwise(dyn, s);
  if (const auto* mc = std::get_if<MatrixCoupling>(&c)) {
    const Eigen::MatrixXd Hm = detail::vertexwise(mc->h, s);
    return F + mc->A * Hm;
  }
  if (const auto* ld = std::get_if<LaplacianDiffusive>(&c))
    return F - ld->sigma * (ld->L.dense * F);
  const auto& hs = std::get<HyperedgeSymmetric>(c);
  Eigen::MatrixXd out = F;
  for (int h = 0; h < hs.H.n_hyperedges(); ++h) {
    const Eigen::RowVectorXd agg = detail::aggregate(hs, h, s.x);
    Eigen::RowVectorXd val(agg.size());
    for (int col = 0; col < agg.size(); ++col) val(col) = hs.g.g(agg(col));
    for (int i : hs.members[h]) out.row(i) += val;
  }
  return out;
}

/// Linearization of rhs at the state s_star, applied to the perturbation
/// eps (N x m): d eps_i = Df(x*_i) eps_i + coupling derivative terms.
inline Eigen::MatrixXd linearized_rhs(const VertexDynamics& dyn,
                                      const CouplingSpec& c,
                                      const SystemState& s_star,
                                      const Eigen::MatrixXd& eps) {
  const int n = static_cast<int>(s_star.x.rows());
  Eigen::MatrixXd G(n, dyn.dim);  // rows Df(x*_j) eps_j
  for (int j = 0; j < n; ++j)
    G.row(j) =
        (dyn.jacobian(s_star.x.row(j).transpose()) * eps.row(j).transpose())
            .transpose();

  if (const auto* mc = std::get_if<MatrixCoupling>(&c)) {
    Eigen::MatrixXd Gh(n, mc->h.dim);
    for (int j = 0; j < n; ++j)
      Gh.row(j) = (mc->h.jacobian(s_star.x.row(j).transpose()) *
                   eps.row(j).transpose())
                      .transpose();
    return G + mc->A * Gh;
  }
  if (const auto* ld = std::get_if<LaplacianDiffusive>(&c))
    return G - ld->sigma * (ld->L.dense * G);

  const auto& hs = std::get<HyperedgeSymmetric>(c);
  Eigen::MatrixXd out = G;
  const int m = dyn.dim;
  for (int h = 0; h < hs.H.n_hyperedges(); ++h) {
    const auto& mem = hs.members[h];
    const double inv_m = 1.0 / static_cast<double>(mem.size());
    const Eigen::RowVectorXd agg = detail::aggregate(hs, h, s_star.x);
    // d g(agg_c) = g'(agg_c) * sum_{j in h} (d agg_c / d x_jc) eps_jc.
    Eigen::RowVectorXd dval = Eigen::RowVectorXd::Zero(m);
    for (int col = 0; col < m; ++col) {
      double acc = 0.0;
      for (int j : mem) {
        const double dagg =
            hs.aggregator == Aggregator::ArithmeticMean
                ? inv_m
                : agg(col) * inv_m / s_star.x(j, col);
        acc += dagg * eps(j, col);
      }
      dval(col) = hs.g.dg(agg(col)) * acc;
    }
    for (int i : mem) out.row(i) += dval;
  }
  return out;
}

}  // namespace hyperstab
