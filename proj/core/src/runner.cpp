#include "sesc/runner.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <set>
#include <thread>

#include "sesc/errors.hpp"

namespace sesc {

namespace {

unsigned resolve_jobs(unsigned jobs, std::size_t tasks) {
  if (jobs == 0) {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  return static_cast<unsigned>(
      std::min<std::size_t>(jobs, std::max<std::size_t>(tasks, 1)));
}

// Index-parallel map: deterministic because each slot depends only on its
// own seed.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  if (count == 0) return;
  const unsigned workers = resolve_jobs(jobs, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count;
           i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

void check_seeds(std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) {
    throw ConfigError({"seeds: at least one seed required"});
  }
  std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size()) {
    throw ConfigError({"seeds: duplicate seed in list"});
  }
}

std::vector<double> column(const std::vector<Vector>& rows, int i) {
  std::vector<double> out(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out[k] = rows[k][i];
  }
  return out;
}

void write_plots(const std::string& out_dir, const Trajectory& traj) {
  namespace fs = std::filesystem;
  const int n = traj.dimension();
  auto path = [&](const char* name) {
    return (fs::path(out_dir) / name).string();
  };
  auto labels = [&](const char* stem) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) {
      out.push_back(std::string(stem) + "_" + std::to_string(i));
    }
    return out;
  };
  auto channels = [&](const std::vector<Vector>& rows) {
    std::vector<std::vector<double>> out;
    for (int i = 0; i < n; ++i) out.push_back(column(rows, i));
    return out;
  };

  write_file(path("theta.svg"),
             svg_line_chart("theta(t)", traj.t, channels(traj.theta),
                            labels("theta")));
  write_file(path("theta_hat.svg"),
             svg_line_chart("theta_hat(t)", traj.t, channels(traj.theta_hat),
                            labels("theta_hat")));
  write_file(path("y.svg"),
             svg_line_chart("y(t)", traj.t, {traj.y}, {"y"}));
  write_file(path("u.svg"),
             svg_line_chart("U(t)", traj.t, channels(traj.u), labels("U")));
  write_file(path("ghat.svg"),
             svg_line_chart("Ghat(t)", traj.t, channels(traj.g_hat),
                            labels("Ghat")));
  {
    std::vector<std::vector<double>> series;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        std::vector<double> s(traj.size());
        for (std::size_t k = 0; k < traj.size(); ++k) {
          s[k] = traj.h_hat[k](i, j);
        }
        series.push_back(std::move(s));
        names.push_back("Hhat_" + std::to_string(i + 1) +
                        std::to_string(j + 1));
      }
    }
    write_file(path("hhat.svg"),
               svg_line_chart("Hhat(t)", traj.t, series, names));
  }
  write_file(path("eta.svg"),
             svg_line_chart("eta(t)", traj.t, channels(traj.eta),
                            labels("eta")));
}

}  // namespace

RunArtifacts run_scenario(const ScenarioConfig& config,
                          std::optional<std::uint64_t> seed_override) {
  RunArtifacts artifacts;
  artifacts.seed = seed_override.value_or(config.seed);
  ClosedLoop loop = config.make_loop(artifacts.seed);
  artifacts.trajectory = loop.run();
  artifacts.report =
      residuals(artifacts.trajectory, config.make_map(), config.sim.window_fraction,
                config.batch.max_y_residual);
  return artifacts;
}

std::vector<std::pair<std::string, std::string>> summary_entries(
    const ScenarioConfig& config, const RunArtifacts& artifacts) {
  const auto& report = artifacts.report;
  std::vector<std::pair<std::string, std::string>> entries;
  entries.emplace_back("scenario", config.name);
  entries.emplace_back("status", to_string(report.status));
  entries.emplace_back("seed", std::to_string(artifacts.seed));
  entries.emplace_back("records", std::to_string(artifacts.trajectory.size()));
  entries.emplace_back("t_end",
                       format_double(artifacts.trajectory.t.empty()
                                         ? 0.0
                                         : artifacts.trajectory.t.back()));
  entries.emplace_back("divergence_time",
                       format_double(artifacts.trajectory.divergence_time));
  entries.emplace_back("window_fraction",
                       format_double(report.window_fraction));
  entries.emplace_back("theta_residual", format_double(report.theta_residual));
  entries.emplace_back("y_residual", format_double(report.y_residual));
  entries.emplace_back("u_residual", format_double(report.u_residual));
  entries.emplace_back("u_peak", format_double(report.u_peak));
  entries.emplace_back(
      "u_attenuation",
      format_double(report.u_peak > 0.0 ? report.u_residual / report.u_peak
                                        : 0.0));
  entries.emplace_back("fitted_decay_rate",
                       format_double(report.fitted_decay_rate));
  const int n = config.dimension();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      entries.emplace_back(
          "hhat_tail_" + std::to_string(i + 1) + std::to_string(j + 1),
          format_double(report.h_hat_tail_average(i, j)));
    }
  }
  return entries;
}

RunArtifacts run_scenario_to_dir(const ScenarioConfig& config,
                                 const std::string& out_dir,
                                 std::optional<std::uint64_t> seed_override) {
  RunArtifacts artifacts = run_scenario(config, seed_override);
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "trajectory.csv").string(),
             trajectory_csv(artifacts.trajectory));
  write_file((fs::path(out_dir) / "summary.txt").string(),
             summary_text(summary_entries(config, artifacts)));
  write_plots(out_dir, artifacts.trajectory);
  return artifacts;
}

SuccessEstimate success_probability(
    const ScenarioConfig& config, std::span<const std::uint64_t> seeds,
    const std::function<bool(const ConvergenceReport&)>& criterion,
    unsigned jobs) {
  check_seeds(seeds);
  std::vector<char> ok(seeds.size(), 0);
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    const RunArtifacts artifacts = run_scenario(config, seeds[i]);
    ok[i] = criterion(artifacts.report) ? 1 : 0;
  });
  int successes = 0;
  for (char v : ok) successes += v;
  return binomial_estimate(successes, static_cast<int>(seeds.size()));
}

BatchResult run_batch(const ScenarioConfig& config,
                      std::span<const std::uint64_t> seeds,
                      const std::string& out_dir, unsigned jobs) {
  check_seeds(seeds);
  namespace fs = std::filesystem;

  BatchResult result;
  result.runs.resize(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    if (out_dir.empty()) {
      result.runs[i] = run_scenario(config, seeds[i]);
    } else {
      const std::string seed_dir =
          (fs::path(out_dir) / ("seed_" + std::to_string(seeds[i]))).string();
      result.runs[i] = run_scenario_to_dir(config, seed_dir, seeds[i]);
    }
  });

  int successes = 0;
  for (const auto& run : result.runs) {
    if (config.satisfies(run.report)) {
      ++successes;
    }
  }
  result.estimate =
      binomial_estimate(successes, static_cast<int>(seeds.size()));

  if (!out_dir.empty()) {
    std::vector<std::pair<std::string, std::string>> entries;
    entries.emplace_back("scenario", config.name);
    entries.emplace_back("criterion",
                         config.batch.kind == BatchCriterion::Kind::Diverged
                             ? "diverged"
                             : "converged");
    if (config.batch.kind == BatchCriterion::Kind::Converged) {
      entries.emplace_back("max_y_residual",
                           format_double(config.batch.max_y_residual));
    }
    entries.emplace_back("seeds", std::to_string(seeds.size()));
    entries.emplace_back("successes",
                         std::to_string(result.estimate.successes));
    entries.emplace_back("fraction", format_double(result.estimate.fraction));
    entries.emplace_back("ci_low", format_double(result.estimate.ci_low));
    entries.emplace_back("ci_high", format_double(result.estimate.ci_high));
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto& report = result.runs[i].report;
      entries.emplace_back(
          "seed_" + std::to_string(seeds[i]),
          std::string(to_string(report.status)) +
              ", y_residual=" + format_double(report.y_residual));
    }
    write_file((fs::path(out_dir) / "aggregate.txt").string(),
               summary_text(entries));
  }
  return result;
}

AveragedRunResult run_averaged_scenario(const ScenarioConfig& config,
                                        std::optional<double> c_override,
                                        const std::string& out_dir) {
  const AveragedSystem system = config.make_averaged(c_override);
  AveragedRunResult result = run_averaged(
      system, config.averaged_initial_error(), config.averaged.t_final,
      config.averaged.decimation);

  if (!out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "averaged_trajectory.csv").string(),
               averaged_csv(result));

    std::vector<std::pair<std::string, std::string>> entries;
    entries.emplace_back("scenario", config.name);
    entries.emplace_back("c", format_double(c_override.value_or(
                                  config.controller.c)));
    entries.emplace_back(
        "c_star",
        format_double(critical_filter_gain(config.map_hessian,
                                           config.controller.k_diag)));
    entries.emplace_back("grid_cells",
                         std::to_string(config.averaged.grid_cells));
    entries.emplace_back("dt", format_double(config.averaged.dt));
    entries.emplace_back("t_final", format_double(config.averaged.t_final));
    entries.emplace_back("initial_lyapunov",
                         format_double(result.initial_lyapunov));
    entries.emplace_back("final_lyapunov",
                         format_double(result.lyapunov.back()));
    entries.emplace_back("fitted_decay_rate",
                         format_double(result.fitted_decay_rate));
    entries.emplace_back("max_step_increase",
                         format_double(result.max_step_increase));
    write_file((fs::path(out_dir) / "averaged_summary.txt").string(),
               summary_text(entries));

    std::vector<std::vector<double>> theta_series;
    const int n = config.dimension();
    for (int i = 0; i < n; ++i) {
      std::vector<double> s(result.t.size());
      for (std::size_t k = 0; k < result.t.size(); ++k) {
        s[k] = result.theta_tilde[k][i];
      }
      theta_series.push_back(std::move(s));
    }
    std::vector<std::string> labels;
    for (int i = 1; i <= n; ++i) {
      labels.push_back("theta_tilde_" + std::to_string(i));
    }
    write_file((fs::path(out_dir) / "averaged_theta.svg").string(),
               svg_line_chart("averaged theta_tilde(t)", result.t,
                              theta_series, labels));
    write_file((fs::path(out_dir) / "averaged_lyapunov.svg").string(),
               svg_line_chart("averaged V(t)", result.t, {result.lyapunov},
                              {"V"}));
  }
  return result;
}

}  // namespace sesc
