#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperstab/stability.hpp"
#include "hyperstab/verify.hpp"

namespace hyperstab {

/// A coupling-strength (or alpha) argument: either a single value or an
/// inclusive lo:hi:steps grid.
struct GridSpec {
  bool is_grid = false;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;

  std::vector<double> values() const {
    if (!is_grid) return {lo};
    std::vector<double> v(steps);
    for (int k = 0; k < steps; ++k)
      v[k] = lo + (hi - lo) * double(k) / double(steps - 1);
    return v;
  }
};

namespace detail {
inline double parse_number(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw UsageError("bad numeric value '" + s + "' in " + what);
  return v;
}
}  // namespace detail

/// Parses "x" or "lo:hi:steps".  Grids need lo < hi and steps >= 2.
inline GridSpec parse_grid_spec(const std::string& spec,
                                const std::string& what = "grid spec") {
  GridSpec g;
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) {
    g.lo = g.hi = detail::parse_number(spec, what);
    return g;
  }
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
    throw UsageError("expected 'x' or 'lo:hi:steps' in " + what + ", got '" +
                     spec + "'");
  g.is_grid = true;
  g.lo = detail::parse_number(spec.substr(0, c1), what);
  g.hi = detail::parse_number(spec.substr(c1 + 1, c2 - c1 - 1), what);
  const double steps_f =
      detail::parse_number(spec.substr(c2 + 1), what + " step count");
  if (!(steps_f >= 2.0 && steps_f <= 1e6))
    throw UsageError(what + ": grid needs steps >= 2 (and at most 1e6)");
  g.steps = int(steps_f);
  if (double(g.steps) != steps_f)
    throw UsageError(what + ": step count must be an integer");
  if (!(g.lo < g.hi)) throw UsageError(what + ": grid needs lo < hi");
  return g;
}

/// JSON cannot carry infinities; report rates as strings when non-finite.
inline nlohmann::ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline nlohmann::ordered_json to_json(const StabilityReport& rep,
                                      const std::optional<SigmaWindow>& win) {
  nlohmann::ordered_json j;
  j["sigma"] = rep.sigma;
  j["lambda_max"] = rep.lambda_max;
  auto modes = nlohmann::ordered_json::array();
  for (const ModeReport& m : rep.per_mode) {
    nlohmann::ordered_json jm;
    jm["k"] = m.k;
    jm["eigenvalue"] = m.eigenvalue;
    jm["rate"] = json_number(m.rate);
    jm["verdict"] = to_string(m.verdict);
    modes.push_back(jm);
  }
  j["modes"] = modes;
  j["neutral"] = rep.neutral_modes;
  j["overall"] = rep.overall_stable ? "stable" : "unstable";
  j["sync_precluded"] = rep.sync_precluded;
  if (win) {
    j["window"] = {{"lo", win->lo}, {"hi", win->hi}};
  } else {
    j["window"] = nullptr;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const SigmaWindow& w) {
  return nlohmann::ordered_json{{"lo", w.lo}, {"hi", w.hi}};
}

inline nlohmann::ordered_json to_json(const VerifyReport& rep) {
  nlohmann::ordered_json j;
  if (rep.window) {
    j["window"] = to_json(*rep.window);
  } else {
    j["window"] = nullptr;
  }
  j["trials"] = rep.trials;
  j["steps"] = rep.steps;
  j["agreement"] = rep.agreement;
  auto rows = nlohmann::ordered_json::array();
  for (const SweepRow& r : rep.rows) {
    nlohmann::ordered_json jr;
    jr["sigma"] = r.sigma;
    jr["theory_stable"] = r.theory_stable;
    jr["sync_fraction"] = r.sync_fraction;
    jr["mean_final_error"] = json_number(r.mean_final_error);
    jr["near_boundary"] = r.near_boundary;
    rows.push_back(jr);
  }
  j["rows"] = rows;
  return j;
}

}  // namespace hyperstab
