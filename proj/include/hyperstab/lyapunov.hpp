#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "hyperstab/dynamics.hpp"

namespace hyperstab {

enum class LyapMode { Flow, Map };

/// Horizon parameters for the tangent-vector growth estimator.  Negative
/// entries select the per-mode defaults: flows use dt=1e-3, renormalization
/// every 1.0 time units, transient 100, total 2000; maps renormalize every
/// step, discard 1e3 steps and run 1e6 in total.
struct LyapunovOptions {
  double t_total = -1.0;
  double renorm_interval = -1.0;
  double transient = -1.0;
  double dt = 1e-3;       // flows only
  double tolerance = 1e-3;  // declared convergence tolerance on the history
};

struct LyapunovEstimate {
  double lambda_max = 0.0;     // additive exponential rate
  double growth_factor = 1.0;  // exp(lambda_max)
  double t_total = 0.0;
  double renorm_interval = 0.0;
  double transient_discarded = 0.0;
  std::vector<double> history;  // running estimates after the transient
};

namespace detail {

struct VariationalSystem {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> varmat;
  int dim = 1;
};

inline void fill_defaults(LyapunovOptions& o, LyapMode mode) {
  if (mode == LyapMode::Flow) {
    if (o.t_total < 0.0) o.t_total = 2000.0;
    if (o.renorm_interval < 0.0) o.renorm_interval = 1.0;
    if (o.transient < 0.0) o.transient = 100.0;
  } else {
    if (o.t_total < 0.0) o.t_total = 1e6;
    if (o.renorm_interval < 0.0) o.renorm_interval = 1.0;
    if (o.transient < 0.0) o.transient = 1e3;
  }
}

[[noreturn]] inline void diverged_error() {
  throw DomainError(
      "trajectory diverged to non-finite values during Lyapunov "
      "estimation; try a smaller dt or a different x0");
}

// Single-vector tangent-growth estimation: advance the base state and the
// tangent vector together, renormalize the tangent periodically, and
// average the log norms collected after the transient.
inline LyapunovEstimate benettin(const VariationalSystem& sys,
                                 Eigen::VectorXd x, LyapMode mode,
                                 LyapunovOptions opt) {
  fill_defaults(opt, mode);
  if (!(opt.renorm_interval > 0.0))
    throw ValidationError("lyapunov: renorm_interval must be positive");
  if (!(opt.t_total > opt.transient) || !(opt.transient >= 0.0))
    throw ValidationError("lyapunov: need t_total > transient >= 0");
  if (mode == LyapMode::Flow && !(opt.dt > 0.0))
    throw ValidationError("lyapunov: dt must be positive");

  const long long renorms = std::llround(opt.t_total / opt.renorm_interval);
  const long long skip = std::llround(opt.transient / opt.renorm_interval);
  if (renorms <= skip)
    throw ValidationError("lyapunov: horizon shorter than the transient");
  const long long steps_per_renorm =
      mode == LyapMode::Flow
          ? std::max<long long>(1, std::llround(opt.renorm_interval / opt.dt))
          : std::llround(opt.renorm_interval);
  if (steps_per_renorm < 1)
    throw ValidationError("lyapunov: renorm_interval shorter than one step");

  Eigen::VectorXd u = Eigen::VectorXd::Ones(sys.dim).normalized();
  double sum_log = 0.0;
  LyapunovEstimate est;
  est.renorm_interval = opt.renorm_interval;
  est.transient_discarded = double(skip) * opt.renorm_interval;
  est.t_total = double(renorms) * opt.renorm_interval;
  const long long hist_stride =
      std::max<long long>(1, (renorms - skip) / 100);

  const double dt = opt.dt;
  for (long long block = 0; block < renorms; ++block) {
    for (long long step = 0; step < steps_per_renorm; ++step) {
      if (mode == LyapMode::Map) {
        u = sys.varmat(x) * u;
        x = sys.drift(x);
      } else {
        // One RK4 step of the joint system (x, u).
        const Eigen::VectorXd k1x = sys.drift(x);
        const Eigen::VectorXd k1u = sys.varmat(x) * u;
        const Eigen::VectorXd x2 = x + 0.5 * dt * k1x;
        const Eigen::VectorXd k2x = sys.drift(x2);
        const Eigen::VectorXd k2u = sys.varmat(x2) * (u + 0.5 * dt * k1u);
        const Eigen::VectorXd x3 = x + 0.5 * dt * k2x;
        const Eigen::VectorXd k3x = sys.drift(x3);
        const Eigen::VectorXd k3u = sys.varmat(x3) * (u + 0.5 * dt * k2u);
        const Eigen::VectorXd x4 = x + dt * k3x;
        const Eigen::VectorXd k4x = sys.drift(x4);
        const Eigen::VectorXd k4u = sys.varmat(x4) * (u + dt * k3u);
        x += (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        u += (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      }
    }
    if (!x.allFinite() || !u.allFinite()) diverged_error();
    const double nrm = u.norm();
    if (nrm == 0.0)
      throw DomainError(
          "tangent vector vanished exactly during Lyapunov estimation");
    u /= nrm;
    if (block >= skip) {
      sum_log += std::log(nrm);
      const long long done = block - skip + 1;
      if (done % hist_stride == 0 || block == renorms - 1) {
        const double t_acc = double(done) * opt.renorm_interval;
        const double running = sum_log / t_acc;
        if (est.history.empty() || block == renorms - 1 ||
            running != est.history.back())
          est.history.push_back(running);
      }
    }
  }

  const double t_acc = double(renorms - skip) * opt.renorm_interval;
  est.lambda_max = sum_log / t_acc;
  est.growth_factor = std::exp(est.lambda_max);
  if (est.history.empty() || est.history.back() != est.lambda_max)
    est.history.push_back(est.lambda_max);
  return est;
}

}  // namespace detail

/// Maximal Lyapunov exponent of an uncoupled vertex system, as an additive
/// rate per unit time (flows) or per step (maps).
inline LyapunovEstimate lyapunov_exponent(const VertexDynamics& dyn,
                                          const Eigen::VectorXd& x0,
                                          LyapMode mode,
                                          LyapunovOptions opt = {}) {
  detail::VariationalSystem sys{dyn.f, dyn.jacobian, dyn.dim};
  return detail::benettin(sys, x0, mode, opt);
}

inline LyapunovEstimate lyapunov_exponent(const VertexDynamics& dyn,
                                          LyapMode mode,
                                          LyapunovOptions opt = {}) {
  return lyapunov_exponent(dyn, dyn.default_x0, mode, opt);
}

}  // namespace hyperstab
