#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "sfc/controller.hpp"
#include "sfc/stats.hpp"

namespace sfc {

namespace detail {

/// Runs fn(i) for i in [0, n). Work items must be independent; results are
/// written by index, so the outcome does not depend on scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

struct SurfacePoint {
  Code xa = 0;
  Code xb = 0;
  bool skipped = false;      // no rule fires here
  double exact = 0.0;
  double stochastic = 0.0;
  double abs_error = 0.0;
  double acceptance_rate = 0.0;  // empirical
  double analytic_rate = 0.0;    // (1/m) * sum of fire strengths
  std::uint64_t accepted = 0;
};

struct SurfaceReport {
  std::vector<SurfacePoint> points;  // row-major: xa outer, xb inner
  std::vector<Code> grid_a;
  std::vector<Code> grid_b;
  std::uint64_t cycles_per_point = 0;
  double max_abs_error = 0.0;
  double rmse = 0.0;
  std::size_t skipped_count = 0;
};

inline std::vector<Code> stride_grid(const Universe& u, int step) {
  if (step < 1) throw std::invalid_argument("grid step must be >= 1");
  std::vector<Code> grid;
  for (std::uint64_t c = 0; c <= u.max_code(); c += static_cast<std::uint64_t>(step)) {
    grid.push_back(static_cast<Code>(c));
  }
  return grid;
}

/// Sweeps a stride grid over both inputs, running the simulator and the
/// exact engine (sum mode) at every point. Points where no rule fires are
/// recorded as skipped, not errors. Per-point seeds derive from base_seed
/// and the point index, so the sweep is order-independent.
inline SurfaceReport surface_compare(const ControllerConfig& config,
                                     int grid_step,
                                     std::uint64_t cycles_per_point,
                                     std::uint64_t base_seed) {
  SurfaceReport report;
  report.grid_a = stride_grid(config.rulebase.input_a_universe(), grid_step);
  report.grid_b = stride_grid(config.rulebase.input_b_universe(), grid_step);
  report.cycles_per_point = cycles_per_point;
  report.points.resize(report.grid_a.size() * report.grid_b.size());

  detail::parallel_for(report.points.size(), [&](std::size_t idx) {
    SurfacePoint& pt = report.points[idx];
    pt.xa = report.grid_a[idx / report.grid_b.size()];
    pt.xb = report.grid_b[idx % report.grid_b.size()];
    const double total_w = total_fire_strength(config.rulebase, pt.xa, pt.xb);
    pt.analytic_rate =
        total_w / static_cast<double>(config.rulebase.rule_count());
    if (total_w == 0.0) {
      pt.skipped = true;
      return;
    }
    ControllerConfig point_cfg = config;
    point_cfg.generator.seed =
        derive_seed(base_seed, idx, config.generator.width);
    Controller controller(point_cfg);
    const RunResult run =
        controller.run(pt.xa, pt.xb, cycles_per_point);
    pt.exact = exact_output(config.rulebase, pt.xa, pt.xb, UnionMode::kSum);
    pt.stochastic = run.estimate_mean;
    pt.abs_error = std::abs(pt.exact - pt.stochastic);
    pt.acceptance_rate = run.acceptance_rate;
    pt.accepted = run.accepted_count;
  });

  double sq_sum = 0.0;
  std::size_t live = 0;
  for (const SurfacePoint& pt : report.points) {
    if (pt.skipped) {
      ++report.skipped_count;
      continue;
    }
    ++live;
    report.max_abs_error = std::max(report.max_abs_error, pt.abs_error);
    sq_sum += pt.abs_error * pt.abs_error;
  }
  report.rmse = live > 0 ? std::sqrt(sq_sum / static_cast<double>(live)) : 0.0;
  return report;
}

struct ConvergencePoint {
  std::uint64_t n_accepted = 0;
  double estimate = 0.0;   // cross-replica mean of the running mean
  double stderr_est = 0.0; // cross-replica standard deviation
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> checkpoints;
  double fitted_slope = 0.0;  // log(stderr) vs log(n_accepted)
  int replicas = 0;
};

/// Runs independent replicas (derived seeds) to the last accepted-count
/// checkpoint and measures how the cross-replica spread of the estimate
/// shrinks with accepted samples. A healthy estimator fits slope -1/2.
inline ConvergenceReport convergence_curve(
    const ControllerConfig& config, Code xa, Code xb,
    const std::vector<std::uint64_t>& checkpoints, int replicas,
    std::uint64_t base_seed) {
  if (checkpoints.empty() ||
      !std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      std::adjacent_find(checkpoints.begin(), checkpoints.end()) !=
          checkpoints.end() ||
      checkpoints.front() == 0) {
    throw std::invalid_argument(
        "checkpoints must be strictly ascending and positive");
  }
  if (replicas < 2) {
    throw std::invalid_argument("need at least 2 replicas");
  }

  std::vector<std::vector<double>> estimates(
      checkpoints.size(), std::vector<double>(replicas, 0.0));
  std::vector<std::string> failures(replicas);

  detail::parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
    ControllerConfig replica_cfg = config;
    replica_cfg.generator.seed =
        derive_seed(base_seed, r, config.generator.width);
    Controller controller(replica_cfg);
    RunOptions opts;
    opts.accepted_checkpoints = checkpoints;
    opts.stop_after_accepted = checkpoints.back();
    const RunResult run = controller.run(xa, xb, config.max_cycles, opts);
    if (run.checkpoints.size() != checkpoints.size()) {
      failures[r] = "replica " + std::to_string(r) + " reached only " +
                    std::to_string(run.checkpoints.size()) + " of " +
                    std::to_string(checkpoints.size()) +
                    " checkpoints within max_cycles";
      return;
    }
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
      estimates[k][r] = run.checkpoints[k].estimate;
    }
  });
  for (const std::string& f : failures) {
    if (!f.empty()) throw Error(f);
  }

  ConvergenceReport report;
  report.replicas = replicas;
  std::vector<double> ns;
  std::vector<double> spreads;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const MeanStd ms = mean_std(estimates[k]);
    report.checkpoints.push_back({checkpoints[k], ms.mean, ms.std_dev});
    ns.push_back(static_cast<double>(checkpoints[k]));
    spreads.push_back(ms.std_dev);
  }
  report.fitted_slope = fit_loglog_slope(ns, spreads);
  return report;
}

/// First index after which the sequence stays within +-band of target for
/// the rest of the trace; nullopt when it never settles. Non-finite entries
/// (the filter before its first accepted sample) count as outside the band.
inline std::optional<std::uint64_t> settling_time(
    std::span<const double> filtered_sequence, double target, double band) {
  if (!(band > 0.0)) throw std::invalid_argument("band must be > 0");
  if (filtered_sequence.empty()) return std::nullopt;
  std::size_t settled = 0;
  for (std::size_t i = 0; i < filtered_sequence.size(); ++i) {
    const double v = filtered_sequence[i];
    if (!std::isfinite(v) || std::abs(v - target) > band) settled = i + 1;
  }
  if (settled >= filtered_sequence.size()) return std::nullopt;
  return settled;
}

}  // namespace sfc
