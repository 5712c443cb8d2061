// Command-line front end: spectra, stability reports, coupling windows,
// trajectories, MSF curves and sigma sweeps, as CSV/JSON for external
// plotting.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hyperstab/cli.hpp"
#include "hyperstab/csv.hpp"
#include "hyperstab/hypergraph_io.hpp"
#include "hyperstab/integrate.hpp"
#include "hyperstab/lyapunov.hpp"
#include "hyperstab/msf.hpp"
#include "hyperstab/spectrum.hpp"
#include "hyperstab/stability.hpp"
#include "hyperstab/verify.hpp"

namespace hs = hyperstab;

namespace {

struct Options {
  std::string hypergraph;
  std::string dynamics;
  std::string dynamics_h;
  std::string sigma;
  std::string alpha;
  std::string out;
  std::string format;
  std::string mode;
  std::string x0;
  std::uint64_t seed = 42;
  int threads = 0;  // 0 = hardware concurrency
  double zero_tol = -1.0;
  double lambda_max = std::numeric_limits<double>::quiet_NaN();
  bool vectors = false;
  double dt = 1e-3;
  double t_end = 10.0;
  double dt_out = 0.1;
  long long steps = 0;  // per-command default resolved later
  long long record_every = 1;
  int trials = 20;
  double msf_a = 0.0;
  double t_total = -1.0;
  double transient = -1.0;
  double renorm = -1.0;
};

int resolved_threads(const Options& o) {
  if (o.threads > 0) return o.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Output sink: file when --out is given, standard output otherwise.
class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw hs::IoError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool to_file() const { return file_.is_open(); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream file_;
};

void require_format(const Options& o, const std::string& supported,
                    const std::string& cmd) {
  if (!o.format.empty() && o.format != supported)
    throw hs::UsageError(cmd + " emits " + supported + " only (got --format " +
                         o.format + ")");
}

double require_scalar_sigma(const Options& o, const std::string& cmd) {
  if (o.sigma.empty())
    throw hs::UsageError(cmd + " requires --sigma <value>");
  const hs::GridSpec g = hs::parse_grid_spec(o.sigma, "--sigma");
  if (g.is_grid)
    throw hs::UsageError(cmd + " expects a single --sigma value, not a grid");
  return g.lo;
}

hs::LyapMode parse_mode(const std::string& mode, const hs::VertexDynamics& d) {
  if (mode.empty())
    return d.kind == hs::DynKind::Map ? hs::LyapMode::Map : hs::LyapMode::Flow;
  if (mode == "flow") return hs::LyapMode::Flow;
  if (mode == "map") return hs::LyapMode::Map;
  throw hs::UsageError("--mode must be 'flow' or 'map', got '" + mode + "'");
}

std::vector<double> parse_x0_list(const std::string& text) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    vals.push_back(
        hs::detail::parse_number(text.substr(pos, comma - pos), "--x0"));
    pos = comma + 1;
  }
  return vals;
}

// Initial condition for an N-vertex system: --x0 with m values replicates
// one vertex state everywhere, N*m values give the full state row by row;
// absent, every vertex is drawn from the dynamics' bounding box.
hs::SystemState initial_state(const Options& o, const hs::VertexDynamics& dyn,
                              int n) {
  hs::SystemState s;
  s.x.resize(n, dyn.dim);
  if (!o.x0.empty()) {
    const std::vector<double> vals = parse_x0_list(o.x0);
    if (static_cast<int>(vals.size()) == dyn.dim) {
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < dyn.dim; ++c) s.x(i, c) = vals[c];
    } else if (static_cast<int>(vals.size()) == n * dyn.dim) {
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < dyn.dim; ++c) s.x(i, c) = vals[i * dyn.dim + c];
    } else {
      throw hs::UsageError("--x0 needs " + std::to_string(dyn.dim) + " or " +
                           std::to_string(n * dyn.dim) + " values, got " +
                           std::to_string(vals.size()));
    }
    return s;
  }
  std::mt19937_64 rng(hs::detail::splitmix64(o.seed));
  for (int i = 0; i < n; ++i)
    s.x.row(i) = hs::random_state(dyn, rng).transpose();
  return s;
}

double resolve_lambda_max(const Options& o) {
  if (std::isfinite(o.lambda_max)) return o.lambda_max;
  if (o.dynamics.empty())
    throw hs::UsageError(
        "need --lambda-max <rate> or --dynamics <spec> to estimate it");
  const hs::VertexDynamics dyn = hs::make_dynamics(o.dynamics);
  const hs::LyapMode mode = parse_mode(o.mode, dyn);
  const hs::LyapunovEstimate est = hs::lyapunov_exponent(dyn, mode);
  std::cerr << "estimated lambda_max = " << hs::format_double(est.lambda_max)
            << " (" << (mode == hs::LyapMode::Map ? "map" : "flow")
            << " mode)\n";
  return est.lambda_max;
}

bool is_graph_input(const hs::ChemicalHypergraph& H) {
  for (const hs::Hyperedge& he : H.hyperedges())
    if (he.inputs.size() != 1 || he.outputs.size() != 1 ||
        !he.catalysts().empty())
      return false;
  return H.n_hyperedges() > 0;
}

void print_spectrum_summary(const hs::ChemicalHypergraph& H,
                            const hs::Spectrum& s) {
  const hs::SpectralSummary sum = hs::spectral_summary(s);
  std::cerr << "N=" << H.n_vertices() << " M=" << H.n_hyperedges()
            << " k0=" << sum.zero_multiplicity;
  if (sum.lambda_min_nonzero)
    std::cerr << " lambda_min_nonzero="
              << hs::format_double(*sum.lambda_min_nonzero);
  std::cerr << " lambda_max=" << hs::format_double(sum.lambda_max) << "\n";
  if (sum.zero_multiplicity == 0)
    std::cerr << "no neutral modes; synchronized dynamics precluded\n";
  if (is_graph_input(H) && std::abs(sum.lambda_max - 2.0) <= 1e-9)
    std::cerr << "graph input attains lambda_max = 2 (bipartite)\n";
}

int cmd_spectrum(const Options& o) {
  require_format(o, "csv", "spectrum");
  const hs::ChemicalHypergraph H = hs::load_hypergraph(o.hypergraph);
  const hs::Spectrum s = hs::spectrum(H, o.zero_tol);
  Output out(o.out);
  hs::write_spectrum_csv(out.stream(), s);
  if (o.vectors) {
    if (!out.to_file())
      throw hs::UsageError("--vectors needs --out (writes <out>.vectors.csv)");
    std::ofstream vf(out.path() + ".vectors.csv");
    if (!vf)
      throw hs::IoError("cannot open '" + out.path() + ".vectors.csv'");
    hs::write_eigenvectors_csv(vf, s);
  }
  print_spectrum_summary(H, s);
  return 0;
}

int cmd_stability(const Options& o) {
  require_format(o, "json", "stability");
  const double sigma = require_scalar_sigma(o, "stability");
  const double lambda = resolve_lambda_max(o);
  const hs::ChemicalHypergraph H = hs::load_hypergraph(o.hypergraph);
  const hs::Spectrum s = hs::spectrum(H, o.zero_tol);
  const hs::StabilityReport rep =
      hs::stability_report(s, lambda, sigma, o.zero_tol);
  std::optional<hs::SigmaWindow> win;
  try {
    win = hs::sigma_window(s, lambda);
  } catch (const hs::NoTransverseModesError&) {
    // every mode neutral: report carries a null window
  }
  Output out(o.out);
  out.stream() << hs::to_json(rep, win).dump(2) << "\n";
  return 0;
}

int cmd_window(const Options& o) {
  require_format(o, "json", "window");
  const double lambda = resolve_lambda_max(o);
  const hs::ChemicalHypergraph H = hs::load_hypergraph(o.hypergraph);
  const hs::Spectrum s = hs::spectrum(H, o.zero_tol);
  const std::optional<hs::SigmaWindow> win = hs::sigma_window(s, lambda);
  Output out(o.out);
  if (win) {
    out.stream() << hs::to_json(*win).dump(2) << "\n";
  } else {
    out.stream() << "null\n";
  }
  return 0;
}

int write_trajectory(const Options& o, const hs::Trajectory& traj, int n,
                     int dim) {
  Output out(o.out);
  hs::write_trajectory_csv(out.stream(), traj, n, dim);
  if (traj.meta.diverged) {
    std::cerr << "aborted: " << traj.meta.diagnostic
              << " (partial trajectory written)\n";
    return 3;
  }
  return 0;
}

int cmd_simulate(const Options& o) {
  require_format(o, "csv", "simulate");
  if (o.dynamics.empty())
    throw hs::UsageError("simulate requires --dynamics");
  const double sigma = o.sigma.empty() ? 0.0 : require_scalar_sigma(o, "simulate");
  const hs::ChemicalHypergraph H = hs::load_hypergraph(o.hypergraph);
  const hs::VertexDynamics dyn = hs::make_dynamics(o.dynamics);
  const hs::CouplingSpec coupling =
      hs::make_laplacian_diffusive(sigma, hs::laplacian(H));
  const hs::SystemState s0 = initial_state(o, dyn, H.n_vertices());
  const hs::Trajectory traj =
      hs::integrate(dyn, coupling, s0, o.dt, o.t_end, o.dt_out);
  return write_trajectory(o, traj, H.n_vertices(), dyn.dim);
}

int cmd_cml(const Options& o) {
  require_format(o, "csv", "cml");
  if (o.dynamics.empty()) throw hs::UsageError("cml requires --dynamics");
  const double sigma = o.sigma.empty() ? 0.0 : require_scalar_sigma(o, "cml");
  const hs::ChemicalHypergraph H = hs::load_hypergraph(o.hypergraph);
  const hs::VertexDynamics dyn = hs::make_dynamics(o.dynamics);
  const hs::LaplacianMatrix L = hs::laplacian(H);
  const hs::SystemState s0 = initial_state(o, dyn, H.n_vertices());
  const long long steps = o.steps > 0 ? o.steps : 200;
  const hs::Trajectory traj =
      hs::iterate_cml(dyn, L, s0, sigma, steps, o.record_every);
  return write_trajectory(o, traj, H.n_vertices(), dyn.dim);
}

int cmd_msf_curve(const Options& o) {
  require_format(o, "csv", "msf-curve");
  if (o.dynamics.empty())
    throw hs::UsageError("msf-curve requires --dynamics");
  if (o.alpha.empty())
    throw hs::UsageError("msf-curve requires --alpha <lo:hi:steps>");
  const hs::VertexDynamics f = hs::make_dynamics(o.dynamics);
  const hs::VertexDynamics h =
      o.dynamics_h.empty() ? f : hs::make_dynamics(o.dynamics_h);
  hs::MsfOptions opt;
  opt.a = o.msf_a;
  opt.mode = parse_mode(o.mode, f);
  opt.threads = resolved_threads(o);
  opt.lyap.t_total = o.t_total;
  opt.lyap.renorm_interval = o.renorm;
  opt.lyap.transient = o.transient;
  if (o.dt > 0) opt.lyap.dt = o.dt;
  Eigen::VectorXd x0 = f.default_x0;
  if (!o.x0.empty()) {
    const std::vector<double> vals = parse_x0_list(o.x0);
    if (static_cast<int>(vals.size()) != f.dim)
      throw hs::UsageError("--x0 needs " + std::to_string(f.dim) +
                           " values for msf-curve");
    for (int c = 0; c < f.dim; ++c) x0(c) = vals[c];
  }
  const hs::GridSpec grid = hs::parse_grid_spec(o.alpha, "--alpha");
  const auto curve = hs::msf_curve(f, h, grid.values(), x0, opt);
  Output out(o.out);
  hs::write_msf_csv(out.stream(), curve);
  return 0;
}

hs::VerifyReport run_sweep(const Options& o, const std::string& cmd) {
  if (o.dynamics.empty())
    throw hs::UsageError(cmd + " requires --dynamics");
  if (o.sigma.empty())
    throw hs::UsageError(cmd + " requires --sigma <lo:hi:steps>");
  const hs::GridSpec grid = hs::parse_grid_spec(o.sigma, "--sigma");
  if (!grid.is_grid)
    throw hs::UsageError(cmd + " needs a sigma grid lo:hi:steps");
  const hs::ChemicalHypergraph H = hs::load_hypergraph(o.hypergraph);
  const hs::VertexDynamics dyn = hs::make_dynamics(o.dynamics);
  const double lambda = resolve_lambda_max(o);
  hs::VerifyOptions vo;
  vo.trials = o.trials;
  vo.steps = o.steps > 0 ? o.steps : 500;
  vo.zero_tol = o.zero_tol;
  vo.seed = o.seed;
  vo.threads = resolved_threads(o);
  const hs::VerifyReport rep =
      hs::verify_window(H, dyn, lambda, grid.values(), vo);
  if (rep.window)
    std::cerr << "window (" << hs::format_double(rep.window->lo) << ", "
              << hs::format_double(rep.window->hi) << "); agreement "
              << hs::format_double(rep.agreement) << "\n";
  else
    std::cerr << "empty window; agreement "
              << hs::format_double(rep.agreement) << "\n";
  return rep;
}

int cmd_sweep(const Options& o) {
  require_format(o, "csv", "sweep");
  const hs::VerifyReport rep = run_sweep(o, "sweep");
  Output out(o.out);
  hs::write_sweep_csv(out.stream(), rep.rows);
  return 0;
}

int cmd_verify(const Options& o) {
  require_format(o, "json", "verify");
  const hs::VerifyReport rep = run_sweep(o, "verify");
  Output out(o.out);
  out.stream() << hs::to_json(rep).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectra, stability windows and synchronization experiments for "
      "coupled dynamics on oriented hypergraphs"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "output file (default: stdout)");
    sub->add_option("--format", o.format, "output format (csv|json)");
    sub->add_option("--seed", o.seed, "PRNG seed (default 42)");
    sub->add_option("--threads", o.threads,
                    "worker threads (default: all cores)");
    sub->add_option("--zero-tol", o.zero_tol,
                    "neutral-mode threshold (default 1e-9*N)");
    return sub;
  };
  auto add_hypergraph = [&](CLI::App* sub) {
    sub->add_option("--hypergraph", o.hypergraph, "hypergraph JSON file")
        ->required();
  };

  CLI::App* sc_spectrum =
      add_common(app.add_subcommand("spectrum", "eigenvalues of the "
                                                "normalized Laplacian"));
  add_hypergraph(sc_spectrum);
  sc_spectrum->add_flag("--vectors", o.vectors,
                        "also write eigenvectors to <out>.vectors.csv");

  CLI::App* sc_stability = add_common(
      app.add_subcommand("stability", "per-mode stability report (JSON)"));
  add_hypergraph(sc_stability);
  sc_stability->add_option("--sigma", o.sigma, "coupling strength");
  sc_stability->add_option("--lambda-max", o.lambda_max,
                           "maximal Lyapunov rate of the vertex dynamics");
  sc_stability->add_option("--dynamics", o.dynamics,
                           "estimate lambda-max from this dynamics");
  sc_stability->add_option("--mode", o.mode, "flow|map for the estimate");

  CLI::App* sc_window = add_common(
      app.add_subcommand("window", "admissible coupling window (JSON)"));
  add_hypergraph(sc_window);
  sc_window->add_option("--lambda-max", o.lambda_max,
                        "maximal Lyapunov rate of the vertex dynamics");
  sc_window->add_option("--dynamics", o.dynamics,
                        "estimate lambda-max from this dynamics");
  sc_window->add_option("--mode", o.mode, "flow|map for the estimate");

  CLI::App* sc_simulate = add_common(app.add_subcommand(
      "simulate", "RK4 trajectory under diffusive coupling (CSV)"));
  add_hypergraph(sc_simulate);
  sc_simulate->add_option("--dynamics", o.dynamics, "vertex dynamics spec");
  sc_simulate->add_option("--sigma", o.sigma, "coupling strength (default 0)");
  sc_simulate->add_option("--dt", o.dt, "integration step (default 1e-3)");
  sc_simulate->add_option("--t-end", o.t_end, "final time (default 10)");
  sc_simulate->add_option("--dt-out", o.dt_out,
                          "sampling interval (default 0.1)");
  sc_simulate->add_option("--x0", o.x0,
                          "initial state: m or N*m comma-separated values");

  CLI::App* sc_cml = add_common(
      app.add_subcommand("cml", "coupled-map trajectory (CSV)"));
  add_hypergraph(sc_cml);
  sc_cml->add_option("--dynamics", o.dynamics, "vertex map spec");
  sc_cml->add_option("--sigma", o.sigma, "coupling strength (default 0)");
  sc_cml->add_option("--steps", o.steps, "iterations (default 200)");
  sc_cml->add_option("--record-every", o.record_every,
                     "sampling stride (default 1)");
  sc_cml->add_option("--x0", o.x0,
                     "initial state: m or N*m comma-separated values");

  CLI::App* sc_msf = add_common(app.add_subcommand(
      "msf-curve", "transverse growth rate over a coupling-eigenvalue grid"));
  sc_msf->add_option("--dynamics", o.dynamics, "vertex dynamics f");
  sc_msf->add_option("--dynamics-h", o.dynamics_h,
                     "coupling function h (default: f)");
  sc_msf->add_option("--alpha", o.alpha, "grid lo:hi:steps")->required();
  sc_msf->add_option("--mode", o.mode, "flow|map (default: dynamics kind)");
  sc_msf->add_option("--a", o.msf_a,
                     "coupling constant of the reference orbit (default 0)");
  sc_msf->add_option("--t-total", o.t_total, "horizon override");
  sc_msf->add_option("--transient", o.transient, "transient override");
  sc_msf->add_option("--renorm", o.renorm, "renormalization interval");
  sc_msf->add_option("--dt", o.dt, "integration step (flow mode)");
  sc_msf->add_option("--x0", o.x0, "reference orbit start (m values)");

  CLI::App* sc_sweep = add_common(app.add_subcommand(
      "sweep", "empirical synchronization over a sigma grid (CSV)"));
  add_hypergraph(sc_sweep);
  sc_sweep->add_option("--dynamics", o.dynamics, "vertex map spec");
  sc_sweep->add_option("--sigma", o.sigma, "grid lo:hi:steps");
  sc_sweep->add_option("--trials", o.trials, "trials per sigma (default 20)");
  sc_sweep->add_option("--steps", o.steps, "map steps per trial (default 500)");
  sc_sweep->add_option("--lambda-max", o.lambda_max,
                       "maximal Lyapunov rate (default: estimate)");
  sc_sweep->add_option("--mode", o.mode, "flow|map for the estimate");

  CLI::App* sc_verify = add_common(app.add_subcommand(
      "verify", "theory-vs-simulation agreement report (JSON)"));
  add_hypergraph(sc_verify);
  sc_verify->add_option("--dynamics", o.dynamics, "vertex map spec");
  sc_verify->add_option("--sigma", o.sigma, "grid lo:hi:steps");
  sc_verify->add_option("--trials", o.trials, "trials per sigma (default 20)");
  sc_verify->add_option("--steps", o.steps,
                        "map steps per trial (default 500)");
  sc_verify->add_option("--lambda-max", o.lambda_max,
                        "maximal Lyapunov rate (default: estimate)");
  sc_verify->add_option("--mode", o.mode, "flow|map for the estimate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 64;
  }

  try {
    if (app.got_subcommand(sc_spectrum)) return cmd_spectrum(o);
    if (app.got_subcommand(sc_stability)) return cmd_stability(o);
    if (app.got_subcommand(sc_window)) return cmd_window(o);
    if (app.got_subcommand(sc_simulate)) return cmd_simulate(o);
    if (app.got_subcommand(sc_cml)) return cmd_cml(o);
    if (app.got_subcommand(sc_msf)) return cmd_msf_curve(o);
    if (app.got_subcommand(sc_sweep)) return cmd_sweep(o);
    if (app.got_subcommand(sc_verify)) return cmd_verify(o);
    std::cerr << "no command dispatched\n";
    return 70;
  } catch (const hs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}
