#pragma once

#include <Eigen/Dense>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "hyperstab/lyapunov.hpp"

namespace hyperstab {

/// Options for the master-stability curve.  The reference orbit solves
/// x' = f(x) + a*h(x) (a = 0 by default: for Laplacian-style coupling the
/// synchronized orbit is exactly the uncoupled orbit).  Unset horizon
/// fields default to t_total=200, renorm 0.5, transient 20 for flows (one
/// run per grid point, so shorter than the plain Lyapunov default) and to
/// the standard map defaults for maps.
struct MsfOptions {
  double a = 0.0;
  LyapMode mode = LyapMode::Flow;
  LyapunovOptions lyap{};  // negative fields = use the defaults above
  int threads = 1;
};

/// Maximal growth rate of the variational system
///   d eps/dt = (Df(x*(t)) + alpha * Dh(x*(t))) eps
/// along the reference orbit, for each alpha in the grid.  Returns
/// (alpha, rate) pairs in grid order.
inline std::vector<std::pair<double, double>> msf_curve(
    const VertexDynamics& f, const VertexDynamics& h,
    const std::vector<double>& alpha_grid, const Eigen::VectorXd& x0,
    MsfOptions opt = {}) {
  if (f.dim != h.dim)
    throw ValidationError("msf_curve: f and h dimensions differ");
  if (alpha_grid.empty())
    throw ValidationError("msf_curve: empty alpha grid");
  if (opt.mode == LyapMode::Flow) {
    if (opt.lyap.t_total < 0.0) opt.lyap.t_total = 200.0;
    if (opt.lyap.renorm_interval < 0.0) opt.lyap.renorm_interval = 0.5;
    if (opt.lyap.transient < 0.0) opt.lyap.transient = 20.0;
  }

  const double a = opt.a;
  const int n_pts = static_cast<int>(alpha_grid.size());
  std::vector<std::pair<double, double>> out(n_pts);
  std::exception_ptr first_error = nullptr;
  std::mutex err_mutex;

  auto run_point = [&](int idx) {
    const double alpha = alpha_grid[idx];
    detail::VariationalSystem sys;
    sys.dim = f.dim;
    sys.drift = [&f, &h, a](const Eigen::VectorXd& x) {
      Eigen::VectorXd v = f.f(x);
      if (a != 0.0) v += a * h.f(x);
      return v;
    };
    sys.varmat = [&f, &h, alpha](const Eigen::VectorXd& x) {
      Eigen::MatrixXd J = f.jacobian(x);
      if (alpha != 0.0) J += alpha * h.jacobian(x);
      return J;
    };
    out[idx] = {alpha, detail::benettin(sys, x0, opt.mode, opt.lyap).lambda_max};
  };

  const int n_threads = std::max(1, std::min(opt.threads, n_pts));
  if (n_threads == 1) {
    for (int i = 0; i < n_pts; ++i) run_point(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&, t]() {
        for (int i = t; i < n_pts; i += n_threads) {
          try {
            run_point(i);
          } catch (...) {
            std::lock_guard<std::mutex> guard(err_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  return out;
}

inline std::vector<std::pair<double, double>> msf_curve(
    const VertexDynamics& f, const std::vector<double>& alpha_grid,
    const Eigen::VectorXd& x0, MsfOptions opt = {}) {
  return msf_curve(f, f, alpha_grid, x0, opt);
}

}  // namespace hyperstab
