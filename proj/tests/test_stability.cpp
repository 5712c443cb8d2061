#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "hyperstab/integrate.hpp"
#include "hyperstab/lyapunov.hpp"
#include "hyperstab/msf.hpp"
#include "hyperstab/stability.hpp"
#include "hyperstab/verify.hpp"
#include "support/fixtures.hpp"

using namespace hyperstab;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

TEST_CASE("benettin recovers exact linear rates") {
  LyapunovOptions opt;
  opt.t_total = 200.0;
  opt.renorm_interval = 1.0;
  opt.transient = 50.0;

  SECTION("growing flow") {
    auto est = lyapunov_exponent(make_linear(0.35), LyapMode::Flow, opt);
    REQUIRE_THAT(est.lambda_max, WithinAbs(0.35, 1e-9));
    REQUIRE_THAT(est.growth_factor, WithinAbs(std::exp(0.35), 1e-8));
    REQUIRE(est.transient_discarded > 0.0);
  }

  SECTION("decaying flow") {
    auto est = lyapunov_exponent(make_linear(-0.5), LyapMode::Flow, opt);
    REQUIRE_THAT(est.lambda_max, WithinAbs(-0.5, 1e-9));
  }

  SECTION("map with negative multiplier") {
    LyapunovOptions mopt;
    mopt.t_total = 600.0;
    mopt.renorm_interval = 1.0;
    mopt.transient = 100.0;
    auto est = lyapunov_exponent(make_linear(-1.5), LyapMode::Map, mopt);
    REQUIRE_THAT(est.lambda_max, WithinAbs(std::log(1.5), 1e-12));
  }
}

TEST_CASE("benettin on the fully chaotic logistic map yields log 2") {
  auto est = lyapunov_exponent(make_logistic(4.0), LyapMode::Map);
  REQUIRE_THAT(est.lambda_max, WithinAbs(kLn2, 0.01));
  REQUIRE_THAT(est.growth_factor, WithinAbs(2.0, 0.02));
  REQUIRE(est.history.size() >= 2);
  const double last = est.history.back();
  const double prev = est.history[est.history.size() - 2];
  REQUIRE(std::abs(last - prev) <= 1e-3);
}

TEST_CASE("logistic estimate is insensitive to the renormalization stride") {
  LyapunovOptions one, two;
  one.renorm_interval = 1.0;
  two.renorm_interval = 2.0;
  const double a = lyapunov_exponent(make_logistic(4.0), LyapMode::Map, one)
                       .lambda_max;
  const double b = lyapunov_exponent(make_logistic(4.0), LyapMode::Map, two)
                       .lambda_max;
  REQUIRE_THAT(a, WithinAbs(kLn2, 0.01));
  REQUIRE_THAT(b, WithinAbs(kLn2, 0.01));
  REQUIRE_THAT(a, WithinAbs(b, 0.01));
}

TEST_CASE("benettin on the lorenz attractor matches the known exponent") {
  auto est = lyapunov_exponent(make_lorenz(10.0, 28.0, 8.0 / 3.0),
                               LyapMode::Flow);
  REQUIRE_THAT(est.lambda_max, WithinAbs(0.9056, 0.02));
}

TEST_CASE("benettin rejects blow-ups and dead tangents") {
  // exp(10 t) overflows the base orbit long before the default horizon.
  REQUIRE_THROWS_AS(lyapunov_exponent(make_linear(10.0), LyapMode::Flow),
                    DomainError);
  // a = 0 kills the tangent vector on the first map step.
  LyapunovOptions opt;
  opt.t_total = 10.0;
  opt.transient = 0.0;
  REQUIRE_THROWS_AS(lyapunov_exponent(make_linear(0.0), LyapMode::Map, opt),
                    DomainError);
}

TEST_CASE("per-mode rate closed-form spot checks") {
  REQUIRE(msf_mode_rate(0.12, 0.0, 1.5) == 0.12);
  REQUIRE_THAT(msf_mode_rate(kLn2, 0.6, 1.5), WithinAbs(std::log(0.2), 1e-12));
  REQUIRE_THAT(msf_mode_rate(kLn2, 0.4, 3.0), WithinAbs(std::log(0.4), 1e-12));
  REQUIRE(msf_mode_rate(kLn2, 0.1, 1.5) > 0.0);
  REQUIRE_THAT(msf_mode_rate(kLn2, 0.1, 1.5), WithinAbs(std::log(1.7), 1e-12));
  const double r = msf_mode_rate(0.3, 0.5, 2.0);  // sigma*lam == 1 exactly
  REQUIRE(std::isinf(r));
  REQUIRE(r < 0.0);
  // |1 - sigma*lam| is what matters: overshoot equals undershoot.
  REQUIRE_THAT(msf_mode_rate(0.0, 0.4, 2.0),
               WithinAbs(msf_mode_rate(0.0, 0.6, 2.0), 1e-12));
}

TEST_CASE("additive and multiplicative conventions agree") {
  std::mt19937 rng(83);
  std::uniform_real_distribution<double> ul(-1.0, 1.0), us(0.0, 1.0),
      ue(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double lm = ul(rng), sigma = us(rng), lam = ue(rng);
    const double rate = msf_mode_rate(lm, sigma, lam);
    if (std::abs(rate) <= 1e-12) continue;  // boundary, either rounding wins
    const bool additive = rate < 0.0;
    const bool multiplicative =
        std::abs(1.0 - sigma * lam) * std::exp(lm) < 1.0;
    REQUIRE(additive == multiplicative);
  }
}

TEST_CASE("stability report on the input-splitter hypergraph") {
  const Spectrum s = spectrum(fixtures::splitter());

  SECTION("sigma = 0.5 parks the transverse mode on the margin") {
    StabilityReport rep = stability_report(s, kLn2, 0.5);
    REQUIRE(rep.per_mode.size() == 3);
    REQUIRE(rep.neutral_modes == std::vector<int>{1, 2});
    REQUIRE(rep.per_mode[0].verdict == ModeVerdict::Neutral);
    REQUIRE(rep.per_mode[1].verdict == ModeVerdict::Neutral);
    REQUIRE(rep.per_mode[2].k == 3);
    REQUIRE_THAT(rep.per_mode[2].rate, WithinAbs(0.0, 1e-9));
    REQUIRE(rep.per_mode[2].verdict == ModeVerdict::Marginal);
    REQUIRE_FALSE(rep.overall_stable);  // marginal is not stable
    REQUIRE_FALSE(rep.sync_precluded);
  }

  SECTION("sigma = 0.4 damps the transverse mode") {
    StabilityReport rep = stability_report(s, kLn2, 0.4);
    REQUIRE_THAT(rep.per_mode[2].rate, WithinAbs(std::log(0.4), 1e-9));
    REQUIRE(rep.per_mode[2].verdict == ModeVerdict::Stable);
    REQUIRE(rep.overall_stable);
  }

  SECTION("sigma = 0.8 overshoots into instability") {
    StabilityReport rep = stability_report(s, kLn2, 0.8);
    // |1 - 2.4| * 2 = 2.8 > 1
    REQUIRE(rep.per_mode[2].verdict == ModeVerdict::Unstable);
    REQUIRE_FALSE(rep.overall_stable);
  }
}

TEST_CASE("a kernel-free spectrum precludes synchronization") {
  const Spectrum s = spectrum(fixtures::cyclic3());
  StabilityReport rep = stability_report(s, -1.0, 0.1);
  REQUIRE(rep.neutral_modes.empty());
  REQUIRE(rep.sync_precluded);
  for (const ModeReport& m : rep.per_mode)
    REQUIRE(m.verdict == ModeVerdict::Stable);
}

TEST_CASE("coupling windows for frozen graph spectra") {
  SECTION("triangle with log-2 dynamics") {
    auto win = sigma_window(spectrum(fixtures::complete_graph(3)), kLn2);
    REQUIRE(win);
    REQUIRE_THAT(win->lo, WithinAbs(1.0 / 3.0, 1e-9));
    REQUIRE_THAT(win->hi, WithinAbs(1.0, 1e-9));
  }
  SECTION("two vertices with log-2 dynamics") {
    auto win = sigma_window(spectrum(fixtures::p2_graph()), kLn2);
    REQUIRE(win);
    REQUIRE_THAT(win->lo, WithinAbs(0.25, 1e-12));
    REQUIRE_THAT(win->hi, WithinAbs(0.75, 1e-12));
  }
  SECTION("neutral base dynamics opens the window at zero") {
    auto win = sigma_window(spectrum(fixtures::complete_graph(3)), 0.0);
    REQUIRE(win);
    REQUIRE(win->lo == 0.0);
    REQUIRE_THAT(win->hi, WithinAbs(1.0, 1e-9));
  }
  SECTION("contracting base dynamics clamps the lower edge to zero") {
    auto win = sigma_window(spectrum(fixtures::p2_graph()), -0.5);
    REQUIRE(win);
    REQUIRE(win->lo == 0.0);
    REQUIRE(win->hi < 1.0 + 1e-12);
  }
}

TEST_CASE("spread-out spectra can close the window entirely") {
  LaplacianMatrix L;
  L.dense = Eigen::Vector3d(0.0, 0.5, 3.0).asDiagonal();
  L.degrees = Eigen::VectorXd::Ones(3);
  const Spectrum s = spectrum(L);
  // lo = (1 - 1/2)/0.5 = 1.0 >= hi = (1 + 1/2)/3 = 0.5
  REQUIRE_FALSE(sigma_window(s, kLn2).has_value());
  // A report at any sigma in [0, 1] confirms no all-stable point exists.
  for (double sigma : {0.1, 0.3, 0.5, 0.7, 0.9})
    REQUIRE_FALSE(stability_report(s, kLn2, sigma).overall_stable);
}

TEST_CASE("window refuses degenerate inputs") {
  const Spectrum all_neutral = spectrum(fixtures::complete_graph(3), 2.0);
  REQUIRE_THROWS_AS(sigma_window(all_neutral, kLn2), NoTransverseModesError);
  const Spectrum s = spectrum(fixtures::complete_graph(3));
  REQUIRE_THROWS_AS(
      sigma_window(s, std::numeric_limits<double>::quiet_NaN()),
      ValidationError);
  REQUIRE_THROWS_AS(sigma_window(s, std::numeric_limits<double>::infinity()),
                    ValidationError);
}

TEST_CASE("window membership decides overall stability") {
  std::mt19937 rng(89);
  std::uniform_int_distribution<int> nd(3, 8);
  for (int iter = 0; iter < 30; ++iter) {
    const int n = nd(rng);
    auto H = ChemicalHypergraph::from_graph(
        n, fixtures::random_connected_edges(rng, n));
    const Spectrum s = spectrum(H);
    for (double lm : {kLn2, 0.25}) {
      auto win = sigma_window(s, lm);
      if (!win) continue;
      const double mid = 0.5 * (win->lo + win->hi);
      REQUIRE(stability_report(s, lm, mid).overall_stable);
      if (win->lo - 0.01 >= 0.0)
        REQUIRE_FALSE(
            stability_report(s, lm, win->lo - 0.01).overall_stable);
      if (win->hi + 0.01 <= 1.0)
        REQUIRE_FALSE(
            stability_report(s, lm, win->hi + 0.01).overall_stable);
    }
  }
}

TEST_CASE("modal decomposition resolves eigenvector directions") {
  const Spectrum s = spectrum(fixtures::splitter());

  SECTION("a single eigenvector lands in a single row") {
    for (int k = 0; k < 3; ++k) {
      const Eigen::MatrixXd coeff =
          modal_decomposition(s, s.eigenvectors.col(k));
      for (int j = 0; j < 3; ++j) {
        if (j == k)
          REQUIRE_THAT(std::abs(coeff(j, 0)), WithinAbs(1.0, 1e-9));
        else
          REQUIRE(std::abs(coeff(j, 0)) <= 1e-9);
      }
    }
  }

  SECTION("round trip through the eigenbasis") {
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Eigen::MatrixXd eps(3, 3);
    for (int i = 0; i < 9; ++i) eps(i / 3, i % 3) = u(rng);
    const Eigen::MatrixXd coeff = modal_decomposition(s, eps);
    REQUIRE((s.eigenvectors * coeff - eps).cwiseAbs().maxCoeff() <= 1e-8);
  }

  SECTION("constants on a connected graph are purely neutral") {
    const Spectrum sk = spectrum(fixtures::complete_graph(4));
    const Eigen::MatrixXd coeff =
        modal_decomposition(sk, Eigen::MatrixXd::Constant(4, 1, 2.5));
    REQUIRE(std::abs(coeff(0, 0)) > 1.0);
    for (int k = 1; k < 4; ++k) REQUIRE(std::abs(coeff(k, 0)) <= 1e-9);
  }

  SECTION("row-count mismatch is rejected") {
    REQUIRE_THROWS_AS(modal_decomposition(s, Eigen::MatrixXd::Zero(4, 1)),
                      ValidationError);
  }
}

TEST_CASE("graph and hypergraph assemblies yield identical verdicts") {
  // Triangle built directly as I - D^{-1}A and via oriented pair edges:
  // same operator, so reports and windows must coincide.
  Eigen::MatrixXd A(3, 3);
  A << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  LaplacianMatrix direct;
  direct.dense = Eigen::MatrixXd::Identity(3, 3) - A / 2.0;
  direct.degrees = Eigen::VectorXd::Constant(3, 2.0);
  const Spectrum sg = spectrum(direct);
  const Spectrum sh = spectrum(fixtures::complete_graph(3));
  for (double sigma : {0.2, 0.5, 0.9}) {
    const StabilityReport ra = stability_report(sg, kLn2, sigma);
    const StabilityReport rb = stability_report(sh, kLn2, sigma);
    REQUIRE(ra.overall_stable == rb.overall_stable);
    for (int k = 0; k < 3; ++k) {
      REQUIRE(ra.per_mode[k].verdict == rb.per_mode[k].verdict);
      REQUIRE_THAT(ra.per_mode[k].rate,
                   WithinAbs(rb.per_mode[k].rate, 1e-9));
    }
  }
  const auto wg = sigma_window(sg, kLn2);
  const auto wh = sigma_window(sh, kLn2);
  REQUIRE(wg);
  REQUIRE(wh);
  REQUIRE_THAT(wg->lo, WithinAbs(wh->lo, 1e-9));
  REQUIRE_THAT(wg->hi, WithinAbs(wh->hi, 1e-9));
}

TEST_CASE("lattice iterates contract each mode by its predicted factor") {
  auto H = fixtures::splitter();
  const LaplacianMatrix L = laplacian(H);
  const Spectrum s = spectrum(L);
  auto f = make_linear(2.0);
  const double sigma = 0.4;
  SystemState st{0.0, (Eigen::Vector3d(1.0, 0.6, 0.4)).eval()};
  Eigen::MatrixXd prev = modal_decomposition(s, st.x);
  for (int step = 0; step < 10; ++step) {
    st = cml_step(f, L, st, sigma);
    const Eigen::MatrixXd cur = modal_decomposition(s, st.x);
    for (int k = 0; k < 3; ++k) {
      const double factor = (1.0 - sigma * s.eigenvalues(k)) * 2.0;
      REQUIRE_THAT(cur(k, 0), WithinAbs(factor * prev(k, 0), 1e-9));
    }
    prev = cur;
  }
}

TEST_CASE("master stability curve reproduces the linear closed form") {
  auto f = make_linear(0.7);
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(-2.0 + 2.0 * i / 40.0);
  Eigen::VectorXd x0 = Eigen::VectorXd::Ones(1);
  const auto curve = msf_curve(f, grid, x0);
  REQUIRE(curve.size() == grid.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    REQUIRE(curve[i].first == grid[i]);
    REQUIRE_THAT(curve[i].second, WithinAbs((1.0 + grid[i]) * 0.7, 1e-8));
  }

  MsfOptions par;
  par.threads = 4;
  const auto curve4 = msf_curve(f, grid, x0, par);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    REQUIRE(curve4[i].first == curve[i].first);
    REQUIRE(curve4[i].second == curve[i].second);
  }
}

TEST_CASE("map-mode curve shifts the base exponent by log|1+alpha|") {
  auto f = make_logistic(4.0);
  MsfOptions opt;
  opt.mode = LyapMode::Map;
  Eigen::VectorXd x0 = f.default_x0;
  const std::vector<double> grid{0.0, -1.5, -0.5, 0.25};
  const auto curve = msf_curve(f, grid, x0, opt);
  REQUIRE_THAT(curve[0].second, WithinAbs(kLn2, 0.01));
  for (std::size_t i = 1; i < grid.size(); ++i)
    REQUIRE_THAT(curve[i].second - curve[0].second,
                 WithinAbs(std::log(std::abs(1.0 + grid[i])), 1e-9));
}

TEST_CASE("master stability curve validates its inputs") {
  Eigen::VectorXd x1 = Eigen::VectorXd::Ones(1);
  REQUIRE_THROWS_AS(
      msf_curve(make_lorenz(10, 28, 8.0 / 3.0), make_logistic(4.0), {0.0},
                Eigen::VectorXd::Ones(3)),
      ValidationError);
  REQUIRE_THROWS_AS(msf_curve(make_linear(1.0), {}, x1), ValidationError);
}

TEST_CASE("randomized window verification on the triangle") {
  auto H = fixtures::complete_graph(3);
  auto dyn = make_logistic(4.0);
  VerifyOptions opt;

  VerifyReport rep = verify_window(H, dyn, kLn2, {0.2, 0.6}, opt);
  REQUIRE(rep.window);
  REQUIRE_THAT(rep.window->lo, WithinAbs(1.0 / 3.0, 1e-9));
  REQUIRE_THAT(rep.window->hi, WithinAbs(1.0, 1e-9));
  REQUIRE(rep.rows.size() == 2);
  REQUIRE_FALSE(rep.rows[0].theory_stable);
  REQUIRE(rep.rows[0].sync_fraction <= 0.05);
  REQUIRE(rep.rows[1].theory_stable);
  REQUIRE(rep.rows[1].sync_fraction >= 0.95);
  REQUIRE_FALSE(rep.rows[0].near_boundary);
  REQUIRE_FALSE(rep.rows[1].near_boundary);
  REQUIRE(rep.agreement == 1.0);

  SECTION("identical reruns, identical with extra threads") {
    VerifyReport again = verify_window(H, dyn, kLn2, {0.2, 0.6}, opt);
    VerifyOptions par = opt;
    par.threads = 4;
    VerifyReport parallel = verify_window(H, dyn, kLn2, {0.2, 0.6}, par);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      REQUIRE(again.rows[i].sync_fraction == rep.rows[i].sync_fraction);
      REQUIRE(again.rows[i].mean_final_error == rep.rows[i].mean_final_error);
      REQUIRE(parallel.rows[i].sync_fraction == rep.rows[i].sync_fraction);
      REQUIRE(parallel.rows[i].mean_final_error ==
              rep.rows[i].mean_final_error);
    }
  }

  SECTION("samples hugging the window edge are flagged") {
    VerifyReport edge = verify_window(H, dyn, kLn2, {0.34}, opt);
    REQUIRE(edge.rows[0].near_boundary);
    REQUIRE(edge.agreement == 1.0);  // nothing countable remains
  }
}

TEST_CASE("verification refuses impossible set-ups") {
  auto dyn = make_logistic(4.0);
  REQUIRE_THROWS_AS(verify_window(fixtures::cyclic3(), dyn, kLn2, {0.5}),
                    SyncPrecludedError);
  VerifyOptions loose;
  loose.zero_tol = 2.0;  // swallows every eigenvalue of the triangle
  REQUIRE_THROWS_AS(
      verify_window(fixtures::complete_graph(3), dyn, kLn2, {0.5}, loose),
      NoTransverseModesError);
  REQUIRE_THROWS_AS(verify_window(fixtures::complete_graph(3), dyn, kLn2, {}),
                    ValidationError);
  VerifyOptions bad;
  bad.trials = 0;
  REQUIRE_THROWS_AS(
      verify_window(fixtures::complete_graph(3), dyn, kLn2, {0.5}, bad),
      ValidationError);
}

TEST_CASE("per-trial seeds never collide across the grid") {
  const auto s00 = detail::trial_seed(42, 0, 0);
  const auto s01 = detail::trial_seed(42, 0, 1);
  const auto s10 = detail::trial_seed(42, 1, 0);
  REQUIRE(s00 != s01);
  REQUIRE(s00 != s10);
  REQUIRE(s01 != s10);
  REQUIRE(detail::trial_seed(43, 0, 0) != s00);
}
