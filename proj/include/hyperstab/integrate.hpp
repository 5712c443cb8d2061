#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "hyperstab/coupling.hpp"

namespace hyperstab {

struct TrajectoryMeta {
  std::string integrator;        // "rk4" or "cml"
  double dt = 0.0;               // internal step (1.0 for maps)
  std::string coupling;          // human-readable coupling description
  bool diverged = false;         // run aborted on non-finite state
  std::string diagnostic;        // populated when diverged
};

/// Uniformly sampled trajectory; samples[0] is the initial state.
struct Trajectory {
  std::vector<SystemState> samples;
  double dt_out = 0.0;
  TrajectoryMeta meta;
};

/// One classical fixed-step RK4 step of the coupled system.
inline SystemState rk4_step(const VertexDynamics& dyn, const CouplingSpec& c,
                            const SystemState& s, double dt) {
  const Eigen::MatrixXd k1 = rhs(dyn, c, s);
  const Eigen::MatrixXd k2 =
      rhs(dyn, c, SystemState{s.t + 0.5 * dt, s.x + 0.5 * dt * k1});
  const Eigen::MatrixXd k3 =
      rhs(dyn, c, SystemState{s.t + 0.5 * dt, s.x + 0.5 * dt * k2});
  const Eigen::MatrixXd k4 = rhs(dyn, c, SystemState{s.t + dt, s.x + dt * k3});
  return SystemState{s.t + dt,
                     s.x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)};
}

/// Fixed-step RK4 integration from s0 to t_end, recording a sample every
/// dt_out (which must be an integer multiple of dt).  On divergence the
/// partial trajectory collected so far is returned with meta.diverged set.
inline Trajectory integrate(const VertexDynamics& dyn, const CouplingSpec& c,
                            const SystemState& s0, double dt, double t_end,
                            double dt_out) {
  if (!(dt > 0.0)) throw ValidationError("integrate: dt must be positive");
  if (!(t_end > s0.t))
    throw ValidationError("integrate: t_end must exceed the initial time");
  const double ratio = dt_out / dt;
  const long long every = std::llround(ratio);
  if (every < 1 || std::abs(ratio - double(every)) > 1e-9)
    throw ValidationError(
        "integrate: dt_out must be an integer multiple of dt");

  const long long n_steps = std::llround((t_end - s0.t) / dt);
  Trajectory traj;
  traj.dt_out = dt_out;
  traj.meta.integrator = "rk4";
  traj.meta.dt = dt;
  traj.meta.coupling = coupling_description(c);
  traj.samples.push_back(s0);

  SystemState s = s0;
  for (long long step = 1; step <= n_steps; ++step) {
    try {
      s = rk4_step(dyn, c, s, dt);
    } catch (const DivergenceError& e) {
      traj.meta.diverged = true;
      traj.meta.diagnostic = e.what();
      return traj;
    }
    s.t = s0.t + double(step) * dt;  // avoid accumulated time drift
    if (!s.x.allFinite()) {
      traj.meta.diverged = true;
      traj.meta.diagnostic =
          "state became non-finite at t = " + std::to_string(s.t);
      return traj;
    }
    if (step % every == 0) traj.samples.push_back(s);
  }
  return traj;
}

/// One synchronous coupled-map update: x(t+1) = (Id - sigma L) applied to
/// the vector of f-values, the discrete-time analogue of the diffusive
/// flow coupling.
inline SystemState cml_step(const VertexDynamics& dyn,
                            const LaplacianMatrix& L, const SystemState& s,
                            double sigma) {
  const Eigen::MatrixXd F = detail::vertexwise(dyn, s);
  Eigen::MatrixXd next = F - sigma * (L.dense * F);
  if (!next.allFinite()) throw DivergenceError(-1, s.t + 1.0);
  return SystemState{s.t + 1.0, std::move(next)};
}

/// Iterates cml_step, recording every record_every steps (step 0 included).
inline Trajectory iterate_cml(const VertexDynamics& dyn,
                              const LaplacianMatrix& L, const SystemState& s0,
                              double sigma, long long steps,
                              long long record_every = 1) {
  if (steps < 1) throw ValidationError("iterate_cml: steps must be >= 1");
  if (record_every < 1)
    throw ValidationError("iterate_cml: record_every must be >= 1");
  Trajectory traj;
  traj.dt_out = double(record_every);
  traj.meta.integrator = "cml";
  traj.meta.dt = 1.0;
  traj.meta.coupling = "laplacian(sigma=" + std::to_string(sigma) + ")";
  traj.samples.push_back(s0);
  SystemState s = s0;
  for (long long step = 1; step <= steps; ++step) {
    try {
      s = cml_step(dyn, L, s, sigma);
    } catch (const DivergenceError& e) {
      traj.meta.diverged = true;
      traj.meta.diagnostic = e.what();
      return traj;
    }
    if (step % record_every == 0) traj.samples.push_back(s);
  }
  return traj;
}

/// Distance from the generalized synchronization class described by the
/// projector P: max-norm of x - P x, applied per state component.
inline double sync_error(const SystemState& s, const Eigen::MatrixXd& P) {
  return (s.x - P * s.x).cwiseAbs().maxCoeff();
}

/// Distance from exact (constant) synchrony: max_i,c |x_ic - mean_i x_ic|.
inline double sync_error_constants(const SystemState& s) {
  const Eigen::RowVectorXd mean = s.x.colwise().mean();
  return (s.x.rowwise() - mean).cwiseAbs().maxCoeff();
}

}  // namespace hyperstab
