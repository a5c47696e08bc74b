#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sfc/sfc.hpp"

using sfc::Code;
using sfc::MembershipPdf;
using sfc::Universe;

TEST_CASE("gof accepts exact counts and rejects gross mismatches") {
  const Universe u(4);
  const MembershipPdf law = sfc::make_triangular_pdf(u, 0, 3);

  std::vector<double> exact(u.size(), 0.0);
  for (std::size_t c = 0; c < u.size(); ++c) {
    exact[c] = 16000.0 * law.mass()[c];
  }
  const sfc::GofResult ok = sfc::chi_square_gof(exact, law);
  REQUIRE(ok.statistic == 0.0);
  REQUIRE_FALSE(ok.reject_at_0_01);
  REQUIRE(ok.dof >= 1);

  // Uniform mass over the triangle's support is nothing like the triangle.
  std::vector<double> uniform(u.size(), 0.0);
  for (Code c = 0; c <= 6; ++c) uniform[c] = 16000.0 / 7.0;
  const sfc::GofResult bad = sfc::chi_square_gof(uniform, law);
  REQUIRE(bad.reject_at_0_01);
  REQUIRE(bad.statistic > 10.0 * bad.critical_value);
}

TEST_CASE("gof rejects observations outside the expected support") {
  const Universe u(4);
  const MembershipPdf law = sfc::make_triangular_pdf(u, 0, 3);
  std::vector<double> counts(u.size(), 0.0);
  for (std::size_t c = 0; c < u.size(); ++c) counts[c] = 16000.0 * law.mass()[c];
  counts[15] = 1.0;  // impossible under the law
  const sfc::GofResult r = sfc::chi_square_gof(counts, law);
  REQUIRE(std::isinf(r.statistic));
  REQUIRE(r.reject_at_0_01);
}

TEST_CASE("gof demands a minimum sample size") {
  const Universe u(4);
  const MembershipPdf law = sfc::make_triangular_pdf(u, 0, 3);
  const std::vector<double> tiny(u.size(), 5.0);  // 80 < 160
  REQUIRE_THROWS_AS(sfc::chi_square_gof(tiny, law),
                    sfc::InsufficientSamplesError);
  const std::vector<double> wrong_size(8, 100.0);
  REQUIRE_THROWS_AS(sfc::chi_square_gof(wrong_size, law),
                    std::invalid_argument);
}

TEST_CASE("gof merges thin cells until each bin is credible") {
  const Universe u(4);
  const MembershipPdf law = sfc::make_triangular_pdf(u, 0, 7);  // 15 cells
  std::vector<double> counts(u.size(), 0.0);
  for (std::size_t c = 0; c < u.size(); ++c) counts[c] = 200.0 * law.mass()[c];
  const sfc::GofResult r = sfc::chi_square_gof(counts, law);
  REQUIRE(r.bins.size() < 15);
  REQUIRE(r.bins.size() >= 2);
  for (const sfc::GofBin& b : r.bins) REQUIRE(b.expected >= 5.0);
  REQUIRE(r.dof == static_cast<int>(r.bins.size()) - 1);
  // Edge cells (expected 200/64 ~ 3) cannot stand alone.
  REQUIRE(r.bins.front().hi > r.bins.front().lo);
}

TEST_CASE("gof critical values match the frozen quantile table") {
  for (const int dof : {1, 2, 3, 4, 5, 6, 10, 15}) {
    const Universe u(5);
    std::vector<double> mass(u.size(), 0.0);
    for (int c = 0; c <= dof; ++c) mass[c] = 1.0 / (dof + 1.0);
    const MembershipPdf law(u, mass);
    std::vector<double> counts(u.size(), 0.0);
    for (int c = 0; c <= dof; ++c) counts[c] = 1000.0;
    const sfc::GofResult r = sfc::chi_square_gof(counts, law);
    REQUIRE(r.dof == dof);
    REQUIRE(r.critical_value ==
            Catch::Approx(oracles::frozen_chi2_99(dof)).margin(1e-6));
  }
}

TEST_CASE("gof is calibrated near its significance level", "[slow]") {
  const Universe u(4);
  const MembershipPdf law = sfc::make_triangular_pdf(u, 2, 3);
  std::mt19937 rng(4321);
  std::discrete_distribution<int> draw(law.mass().begin(), law.mass().end());
  int rejections = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> counts(u.size(), 0.0);
    for (int i = 0; i < 20000; ++i) counts[draw(rng)] += 1.0;
    if (sfc::chi_square_gof(counts, law).reject_at_0_01) ++rejections;
  }
  REQUIRE(rejections <= 4);
}

TEST_CASE("log-log slope fitting") {
  std::vector<double> x{100, 316, 1000, 3162, 10000};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 / std::sqrt(v));
  REQUIRE(sfc::fit_loglog_slope(x, y) == Catch::Approx(-0.5).margin(1e-12));

  std::vector<double> noisy;
  oracles::TestRng rng(99);
  for (double v : x) noisy.push_back(3.0 / std::sqrt(v) * (0.99 + 0.02 * rng.unit()));
  REQUIRE(sfc::fit_loglog_slope(x, noisy) == Catch::Approx(-0.5).margin(0.05));

  std::vector<double> with_zero{1.0, 0.0, 2.0, 3.0, 4.0};
  REQUIRE(std::isnan(sfc::fit_loglog_slope(x, with_zero)));
  const std::vector<double> one{1.0};
  REQUIRE_THROWS_AS(sfc::fit_loglog_slope(one, one), std::invalid_argument);
}

TEST_CASE("summary statistics") {
  const std::vector<double> xs{2.0, 4.0, 6.0};
  const sfc::MeanStd ms = sfc::mean_std(xs);
  REQUIRE(ms.mean == 4.0);
  REQUIRE(ms.std_dev == 2.0);

  const std::vector<double> up{1, 2, 3, 4};
  std::vector<double> down{4, 3, 2, 1};
  REQUIRE(sfc::pearson_correlation(up, up) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(sfc::pearson_correlation(up, down) ==
          Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("stride grids cover the universe from zero") {
  const Universe u(4);
  REQUIRE(sfc::stride_grid(u, 3) ==
          std::vector<Code>{0, 3, 6, 9, 12, 15});
  REQUIRE(sfc::stride_grid(u, 1).size() == 16);
  REQUIRE(sfc::stride_grid(u, 20) == std::vector<Code>{0});
  REQUIRE_THROWS_AS(sfc::stride_grid(u, 0), std::invalid_argument);
}

TEST_CASE("surface sweep separates live and skipped points") {
  const sfc::SurfaceReport report = sfc::surface_compare(
      fixtures::single_rule_config(), 3, 40000, 2468);
  REQUIRE(report.grid_a == std::vector<Code>{0, 3, 6, 9, 12, 15});
  REQUIRE(report.points.size() == 36);
  REQUIRE(report.skipped_count == 27);

  for (const sfc::SurfacePoint& pt : report.points) {
    const bool live = pt.xa <= 6 && pt.xb <= 6;
    REQUIRE(pt.skipped == !live);
    if (live) {
      REQUIRE(pt.exact == Catch::Approx(12.0).margin(1e-12));
      REQUIRE(pt.accepted > 0);
      REQUIRE(pt.abs_error == Catch::Approx(std::abs(pt.stochastic - pt.exact))
                                  .margin(1e-15));
      REQUIRE(pt.abs_error < 1.0);
      const double w = sfc::total_fire_strength(
          fixtures::single_rule_base(), pt.xa, pt.xb);
      REQUIRE(pt.analytic_rate == Catch::Approx(w).margin(1e-15));
    }
  }
  REQUIRE(report.max_abs_error < 1.0);
  REQUIRE(report.rmse <= report.max_abs_error);
}

TEST_CASE("surface sweep is deterministic and order-independent") {
  const sfc::SurfaceReport a =
      sfc::surface_compare(fixtures::smb3x3_config(), 5, 20000, 13);
  const sfc::SurfaceReport b =
      sfc::surface_compare(fixtures::smb3x3_config(), 5, 20000, 13);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    REQUIRE(a.points[i].stochastic == b.points[i].stochastic);
    REQUIRE(a.points[i].accepted == b.points[i].accepted);
  }
  REQUIRE(a.max_abs_error == b.max_abs_error);
}

TEST_CASE("more cycles shrink the surface error") {
  // Width 23 keeps long sweeps off short phase sub-orbits; the 16-bit
  // default floors the error instead of shrinking it.
  sfc::ControllerConfig cfg = fixtures::single_rule_config();
  cfg.generator.width = 23;
  cfg.generator.taps = {23, 5};
  const sfc::SurfaceReport coarse = sfc::surface_compare(cfg, 3, 20000, 31415);
  const sfc::SurfaceReport fine = sfc::surface_compare(cfg, 3, 320000, 31415);
  REQUIRE(fine.rmse < coarse.rmse);
}

TEST_CASE("convergence study fits the Monte Carlo rate") {
  const std::vector<std::uint64_t> checkpoints{100, 316, 1000, 3162};
  const sfc::ConvergenceReport report = sfc::convergence_curve(
      fixtures::single_rule_config(), 3, 3, checkpoints, 16, 777);
  REQUIRE(report.replicas == 16);
  REQUIRE(report.checkpoints.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    REQUIRE(report.checkpoints[k].n_accepted == checkpoints[k]);
    REQUIRE(report.checkpoints[k].stderr_est > 0.0);
    REQUIRE(std::abs(report.checkpoints[k].estimate - 12.0) < 0.5);
  }
  REQUIRE(report.checkpoints.front().stderr_est >
          report.checkpoints.back().stderr_est);
  REQUIRE(report.fitted_slope > -0.8);
  REQUIRE(report.fitted_slope < -0.2);
}

TEST_CASE("convergence study validates its inputs") {
  const auto cfg = fixtures::single_rule_config();
  REQUIRE_THROWS_AS(sfc::convergence_curve(cfg, 3, 3, {}, 8, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(sfc::convergence_curve(cfg, 3, 3, {100, 100}, 8, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(sfc::convergence_curve(cfg, 3, 3, {100, 50}, 8, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(sfc::convergence_curve(cfg, 3, 3, {0, 100}, 8, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(sfc::convergence_curve(cfg, 3, 3, {100}, 1, 1),
                    std::invalid_argument);

  // Budget too small to reach the target accepted count.
  auto capped = fixtures::single_rule_config();
  capped.max_cycles = 10000;
  REQUIRE_THROWS_AS(sfc::convergence_curve(capped, 6, 6, {1000}, 4, 1),
                    sfc::Error);
}

TEST_CASE("settling time finds the last band violation") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> trace{5.0, 5.0, 1.2, 1.1, 0.9};
  REQUIRE(sfc::settling_time(trace, 1.0, 0.5) == 2);
  const std::vector<double> immediate{1.0, 1.1, 0.9};
  REQUIRE(sfc::settling_time(immediate, 1.0, 0.5) == 0);
  const std::vector<double> never{5.0, 5.0, 5.0};
  REQUIRE_FALSE(sfc::settling_time(never, 1.0, 0.5).has_value());
  const std::vector<double> late{1.0, 1.0, 9.0};
  REQUIRE_FALSE(sfc::settling_time(late, 1.0, 0.5).has_value());
  const std::vector<double> nan_prefix{nan, nan, 1.0, 1.0};
  REQUIRE(sfc::settling_time(nan_prefix, 1.0, 0.5) == 2);
  REQUIRE_FALSE(sfc::settling_time({}, 1.0, 0.5).has_value());
  REQUIRE_THROWS_AS(sfc::settling_time(trace, 1.0, 0.0),
                    std::invalid_argument);
}
