#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "hyperstab/integrate.hpp"
#include "hyperstab/stability.hpp"

namespace hyperstab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stable per-work-item seed, independent of execution order.
inline std::uint64_t trial_seed(std::uint64_t seed, int sigma_idx, int trial) {
  return splitmix64(splitmix64(seed + 0x632be59bd9b4e019ULL *
                                          (std::uint64_t(sigma_idx) + 1)) +
                    std::uint64_t(trial));
}

}  // namespace detail

struct SweepRow {
  double sigma = 0.0;
  bool theory_stable = false;
  double sync_fraction = 0.0;     // trials with final error < threshold
  double mean_final_error = 0.0;  // infinite when a trial diverged
  bool near_boundary = false;     // within 0.02 of a window edge
};

struct VerifyReport {
  std::optional<SigmaWindow> window;
  double agreement = 0.0;  // fraction of off-boundary trials matching theory
  int trials = 0;
  long long steps = 0;
  std::vector<SweepRow> rows;
};

struct VerifyOptions {
  int trials = 20;
  long long steps = 500;
  double sync_threshold = 1e-6;
  double boundary_margin = 0.02;
  double zero_tol = -1.0;  // negative: spectrum default
  std::uint64_t seed = 42;
  int threads = 1;
};

/// Runs randomized coupled-map simulations over the sampled coupling
/// strengths and compares the observed synchronization against the
/// per-sigma theoretical verdict.  Initial states are drawn uniformly from
/// the dynamics' bounding box with a per-(sigma, trial) seed, so results
/// are identical for any thread count.  Divergent runs count as
/// unsynchronized.  Sigma values within boundary_margin of a window edge
/// are excluded from the agreement statistic (critical slowing down).
inline VerifyReport verify_window(const ChemicalHypergraph& H,
                                  const VertexDynamics& dyn,
                                  double lambda_max,
                                  const std::vector<double>& sigmas,
                                  VerifyOptions opt = {}) {
  if (sigmas.empty()) throw ValidationError("verify_window: no sigma samples");
  if (opt.trials < 1) throw ValidationError("verify_window: trials must be >= 1");
  if (opt.steps < 1) throw ValidationError("verify_window: steps must be >= 1");

  const LaplacianMatrix L = laplacian(H);
  const Spectrum s = spectrum(L, opt.zero_tol);
  const Eigen::MatrixXd P = kernel_projector(s);  // throws when k0 = 0

  VerifyReport rep;
  rep.trials = opt.trials;
  rep.steps = opt.steps;
  rep.window = sigma_window(s, lambda_max);  // throws when k0 = N

  const int n_sigma = static_cast<int>(sigmas.size());
  const int n = H.n_vertices();
  // final_err(idx) for work item idx = sigma_idx * trials + trial.
  std::vector<double> final_err(std::size_t(n_sigma) * opt.trials, 0.0);

  auto run_trial = [&](int sigma_idx, int trial) {
    std::mt19937_64 rng(detail::trial_seed(opt.seed, sigma_idx, trial));
    SystemState st;
    st.x.resize(n, dyn.dim);
    for (int i = 0; i < n; ++i)
      st.x.row(i) = random_state(dyn, rng).transpose();
    const double sigma = sigmas[sigma_idx];
    double err = std::numeric_limits<double>::infinity();
    try {
      for (long long k = 0; k < opt.steps; ++k)
        st = cml_step(dyn, L, st, sigma);
      err = sync_error(st, P);
      if (!std::isfinite(err))
        err = std::numeric_limits<double>::infinity();
    } catch (const DivergenceError&) {
      // counted as unsynchronized
    }
    final_err[std::size_t(sigma_idx) * opt.trials + trial] = err;
  };

  const long long n_items = (long long)n_sigma * opt.trials;
  const int n_threads =
      std::max<int>(1, std::min<long long>(opt.threads, n_items));
  if (n_threads == 1) {
    for (int i = 0; i < n_sigma; ++i)
      for (int j = 0; j < opt.trials; ++j) run_trial(i, j);
  } else {
    std::exception_ptr first_error = nullptr;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&, t]() {
        for (long long idx = t; idx < n_items; idx += n_threads) {
          try {
            run_trial(int(idx / opt.trials), int(idx % opt.trials));
          } catch (...) {
            std::lock_guard<std::mutex> guard(err_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  long long agree = 0, counted = 0;
  for (int i = 0; i < n_sigma; ++i) {
    SweepRow row;
    row.sigma = sigmas[i];
    row.theory_stable =
        stability_report(s, lambda_max, row.sigma).overall_stable;
    if (rep.window)
      row.near_boundary =
          std::abs(row.sigma - rep.window->lo) < opt.boundary_margin ||
          std::abs(row.sigma - rep.window->hi) < opt.boundary_margin;
    int synced = 0;
    double sum = 0.0;
    for (int j = 0; j < opt.trials; ++j) {
      const double e = final_err[std::size_t(i) * opt.trials + j];
      const bool is_sync = e < opt.sync_threshold;
      if (is_sync) ++synced;
      sum += e;
      if (!row.near_boundary) {
        ++counted;
        if (is_sync == row.theory_stable) ++agree;
      }
    }
    row.sync_fraction = double(synced) / double(opt.trials);
    row.mean_final_error = sum / double(opt.trials);
    rep.rows.push_back(row);
  }
  rep.agreement = counted > 0 ? double(agree) / double(counted) : 1.0;
  return rep;
}

}  // namespace hyperstab
