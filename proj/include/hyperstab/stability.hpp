#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hyperstab/spectrum.hpp"

namespace hyperstab {

/// Per-mode transverse growth rate: log|1 - sigma*lam| + lambda_max, the
/// additive form of the multiplicative condition |1 - sigma*lam| *
/// exp(lambda_max) < 1.  An exactly annihilated mode (sigma*lam == 1)
/// returns -infinity.
constexpr double kVerdictTol = 1e-12;

inline double msf_mode_rate(double lambda_max, double sigma, double lam) {
  const double prod = sigma * lam;
  if (prod == 1.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(1.0 - prod)) + lambda_max;
}

enum class ModeVerdict { Stable, Marginal, Unstable, Neutral };

inline const char* to_string(ModeVerdict v) {
  switch (v) {
    case ModeVerdict::Stable: return "stable";
    case ModeVerdict::Marginal: return "marginal";
    case ModeVerdict::Unstable: return "unstable";
    case ModeVerdict::Neutral: default: return "neutral";
  }
}

struct ModeReport {
  int k = 0;  // 1-based, ascending eigenvalue order
  double eigenvalue = 0.0;
  double rate = 0.0;
  ModeVerdict verdict = ModeVerdict::Neutral;
};

struct StabilityReport {
  double sigma = 0.0;
  double lambda_max = 0.0;
  std::vector<ModeReport> per_mode;
  std::vector<int> neutral_modes;  // 1-based indices with eigenvalue <= tol
  bool overall_stable = false;     // all non-neutral modes strictly stable
  bool sync_precluded = false;     // no neutral modes at all
};

/// Evaluates the per-mode stability condition over a full spectrum.  Modes
/// with eigenvalue <= zero_tol span the generalized synchronization class
/// and are classified neutral, exempt from the decay requirement.
inline StabilityReport stability_report(const Spectrum& s, double lambda_max,
                                        double sigma, double zero_tol = -1.0) {
  if (zero_tol < 0.0) zero_tol = s.zero_tol;
  StabilityReport rep;
  rep.sigma = sigma;
  rep.lambda_max = lambda_max;
  bool all_stable = true;
  for (int k = 0; k < s.size(); ++k) {
    ModeReport m;
    m.k = k + 1;
    m.eigenvalue = s.eigenvalues(k);
    m.rate = msf_mode_rate(lambda_max, sigma, m.eigenvalue);
    if (m.eigenvalue <= zero_tol) {
      m.verdict = ModeVerdict::Neutral;
      rep.neutral_modes.push_back(m.k);
    } else if (m.rate < -kVerdictTol) {
      m.verdict = ModeVerdict::Stable;
    } else if (m.rate > kVerdictTol) {
      m.verdict = ModeVerdict::Unstable;
      all_stable = false;
    } else {
      m.verdict = ModeVerdict::Marginal;
      all_stable = false;  // strict inequality required
    }
    rep.per_mode.push_back(m);
  }
  rep.overall_stable = all_stable;
  rep.sync_precluded = rep.neutral_modes.empty();
  return rep;
}

struct SigmaWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Open interval of coupling strengths for which every transverse mode is
/// strictly stable: ((1 - 1/Lambda)/lam_min, (1 + 1/Lambda)/lam_max)
/// intersected with [0, 1], where Lambda = exp(lambda_max).  Returns
/// nullopt when the interval is empty.
inline std::optional<SigmaWindow> sigma_window(const Spectrum& s,
                                               double lambda_max) {
  if (!std::isfinite(lambda_max))
    throw ValidationError("sigma_window: lambda_max must be finite");
  const SpectralSummary sum = spectral_summary(s);
  if (!sum.lambda_min_nonzero)
    throw NoTransverseModesError(
        "every mode is neutral; no transverse modes to stabilize");
  const double Lambda = std::exp(lambda_max);
  const double lo =
      std::max(0.0, (1.0 - 1.0 / Lambda) / *sum.lambda_min_nonzero);
  const double hi = std::min(1.0, (1.0 + 1.0 / Lambda) / sum.lambda_max);
  if (!(lo < hi)) return std::nullopt;
  return SigmaWindow{lo, hi};
}

/// Coefficients of eps in the Laplacian eigenvector basis: row k of the
/// result holds the mode-k coefficients of each state component.  The
/// back-transformed basis is inverted exactly through the symmetric
/// similarity (coeff = W^T D^{1/2} eps), and the reconstruction is checked.
inline Eigen::MatrixXd modal_decomposition(const Spectrum& s,
                                           const Eigen::MatrixXd& eps) {
  if (eps.rows() != s.size())
    throw ValidationError("modal_decomposition: row count must equal N");
  const Eigen::VectorXd sqrt_d = s.degrees.cwiseSqrt();
  const Eigen::MatrixXd coeff =
      s.sym_eigenvectors.transpose() * (sqrt_d.asDiagonal() * eps);
  const Eigen::MatrixXd recon = s.eigenvectors * coeff;
  const double scale = std::max(1.0, eps.cwiseAbs().maxCoeff());
  if ((recon - eps).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw InternalError(
        "modal_decomposition: eigenbasis failed to reconstruct the input");
  return coeff;
}

}  // namespace hyperstab
