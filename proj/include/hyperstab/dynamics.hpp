#pragma once

#include <Eigen/Dense>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "hyperstab/errors.hpp"

namespace hyperstab {

/// Whether f is meant as a vector field (dx/dt = f(x)) or as a map
/// (x(t+1) = f(x(t))).  Coupled-map iteration always reads f as a map;
/// integrators always read it as a field.  The tag records the natural
/// interpretation so front ends can pick sensible defaults.
enum class DynKind { Flow, Map };

/// Per-vertex dynamical system: state dimension, vector field (or map) and
/// its Jacobian, plus a bounding box used for random probes and initial
/// conditions.
struct VertexDynamics {
  std::string name;
  int dim = 1;
  DynKind kind = DynKind::Flow;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;
  Eigen::VectorXd default_x0;
};

/// f(x) = a*x.  Usable as a flow (exponential growth rate a) or as a map
/// (per-step growth factor a).
inline VertexDynamics make_linear(double a) {
  VertexDynamics d;
  d.name = "linear";
  d.dim = 1;
  d.kind = DynKind::Flow;
  d.f = [a](const Eigen::VectorXd& x) { return Eigen::VectorXd(a * x); };
  d.jacobian = [a](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Constant(1, 1, a);
  };
  d.box_lo = Eigen::VectorXd::Constant(1, -1.0);
  d.box_hi = Eigen::VectorXd::Constant(1, 1.0);
  d.default_x0 = Eigen::VectorXd::Constant(1, 1.0);
  return d;
}

/// Logistic map f(x) = r*x*(1-x) on [0,1].
inline VertexDynamics make_logistic(double r) {
  VertexDynamics d;
  d.name = "logistic";
  d.dim = 1;
  d.kind = DynKind::Map;
  d.f = [r](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(1);
    y(0) = r * x(0) * (1.0 - x(0));
    return y;
  };
  d.jacobian = [r](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Constant(1, 1, r * (1.0 - 2.0 * x(0)));
  };
  d.box_lo = Eigen::VectorXd::Constant(1, 0.0);
  d.box_hi = Eigen::VectorXd::Constant(1, 1.0);
  // Generic seed point; rational seeds like 1/2 can land on the unstable
  // fixed point at 0 in exact arithmetic.
  d.default_x0 = Eigen::VectorXd::Constant(1, 0.6180339887498949);
  return d;
}

inline VertexDynamics make_lorenz(double s, double r, double b) {
  VertexDynamics d;
  d.name = "lorenz";
  d.dim = 3;
  d.kind = DynKind::Flow;
  d.f = [s, r, b](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(3);
    y(0) = s * (x(1) - x(0));
    y(1) = x(0) * (r - x(2)) - x(1);
    y(2) = x(0) * x(1) - b * x(2);
    return y;
  };
  d.jacobian = [s, r, b](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J(3, 3);
    J << -s, s, 0.0, r - x(2), -1.0, -x(0), x(1), x(0), -b;
    return J;
  };
  d.box_lo = (Eigen::VectorXd(3) << -20.0, -25.0, 5.0).finished();
  d.box_hi = (Eigen::VectorXd(3) << 20.0, 25.0, 45.0).finished();
  d.default_x0 = (Eigen::VectorXd(3) << 1.0, 1.0, 1.0).finished();
  return d;
}

inline VertexDynamics make_rossler(double a, double b, double c) {
  VertexDynamics d;
  d.name = "rossler";
  d.dim = 3;
  d.kind = DynKind::Flow;
  d.f = [a, b, c](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(3);
    y(0) = -x(1) - x(2);
    y(1) = x(0) + a * x(1);
    y(2) = b + x(2) * (x(0) - c);
    return y;
  };
  d.jacobian = [a, c](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J(3, 3);
    J << 0.0, -1.0, -1.0, 1.0, a, 0.0, x(2), 0.0, x(0) - c;
    return J;
  };
  d.box_lo = (Eigen::VectorXd(3) << -10.0, -10.0, 0.0).finished();
  d.box_hi = (Eigen::VectorXd(3) << 10.0, 10.0, 20.0).finished();
  d.default_x0 = (Eigen::VectorXd(3) << 1.0, 1.0, 1.0).finished();
  return d;
}

namespace detail {

// "name" or "name:key=val,key=val" -> (name, params).
inline std::pair<std::string, std::map<std::string, double>> parse_dynamics_spec(
    const std::string& spec) {
  std::map<std::string, double> params;
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  if (name.empty()) throw UsageError("empty dynamics name in '" + spec + "'");
  if (colon == std::string::npos) return {name, params};
  std::string rest = spec.substr(colon + 1);
  size_t pos = 0;
  while (pos < rest.size()) {
    size_t comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    const std::string item = rest.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("expected key=value in dynamics spec, got '" + item +
                       "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    char* end = nullptr;
    const double x = std::strtod(val.c_str(), &end);
    if (val.empty() || end != val.c_str() + val.size())
      throw UsageError("bad numeric value '" + val + "' for dynamics key '" +
                       key + "'");
    if (!params.emplace(key, x).second)
      throw UsageError("duplicate dynamics key '" + key + "'");
    pos = comma + 1;
  }
  return {name, params};
}

inline double take_param(std::map<std::string, double>& params,
                         const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  return v;
}

}  // namespace detail

/// Builds a built-in dynamics from a CLI-style spec string, e.g.
/// "linear:a=-1", "logistic:r=4", "lorenz", "rossler:c=5.7".
inline VertexDynamics make_dynamics(const std::string& spec) {
  auto [name, params] = detail::parse_dynamics_spec(spec);
  VertexDynamics d;
  if (name == "linear") {
    d = make_linear(detail::take_param(params, "a", 1.0));
  } else if (name == "logistic") {
    d = make_logistic(detail::take_param(params, "r", 4.0));
  } else if (name == "lorenz") {
    d = make_lorenz(detail::take_param(params, "sigma", 10.0),
                    detail::take_param(params, "rho", 28.0),
                    detail::take_param(params, "beta", 8.0 / 3.0));
  } else if (name == "rossler") {
    d = make_rossler(detail::take_param(params, "a", 0.2),
                     detail::take_param(params, "b", 0.2),
                     detail::take_param(params, "c", 5.7));
  } else {
    throw UsageError("unknown dynamics '" + name +
                     "' (built-ins: linear, logistic, lorenz, rossler)");
  }
  if (!params.empty())
    throw UsageError("unknown parameter '" + params.begin()->first +
                     "' for dynamics '" + name + "'");
  return d;
}

/// Uniform sample in the dynamics' bounding box.
inline Eigen::VectorXd random_state(const VertexDynamics& dyn,
                                    std::mt19937_64& rng) {
  Eigen::VectorXd x(dyn.dim);
  for (int c = 0; c < dyn.dim; ++c) {
    std::uniform_real_distribution<double> u(dyn.box_lo(c), dyn.box_hi(c));
    x(c) = u(rng);
  }
  return x;
}

}  // namespace hyperstab
