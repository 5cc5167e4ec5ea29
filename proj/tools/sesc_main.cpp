// Command-line front end: scenario simulation, seed batches, and the
// averaged-system analyzer.
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sesc/errors.hpp"
#include "sesc/presets.hpp"
#include "sesc/runner.hpp"

namespace {

std::string default_out_dir(const std::string& scenario_name,
                            const std::string& cli_out) {
  if (!cli_out.empty()) {
    return cli_out;
  }
  if (const char* env = std::getenv("SESC_OUT_DIR"); env && *env) {
    return (std::filesystem::path(env) / scenario_name).string();
  }
  return (std::filesystem::path("out") / scenario_name).string();
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> seeds;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) {
      return;
    }
    std::size_t used = 0;
    std::uint64_t value = 0;
    try {
      value = std::stoull(cur, &used);
    } catch (...) {
    }
    if (used != cur.size()) {
      throw sesc::ConfigError({"seeds: '" + cur +
                               "' is not a nonnegative integer"});
    }
    seeds.push_back(value);
    cur.clear();
  };
  for (char ch : list + ",") {
    if (ch == ',') {
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  return seeds;
}

struct SweepRange {
  double lo = 0.0, hi = 0.0, step = 0.0;
  bool parse(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) return false;
    try {
      lo = std::stod(text.substr(0, c1));
      hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
      step = std::stod(text.substr(c2 + 1));
    } catch (...) {
      return false;
    }
    return step > 0.0 && hi >= lo;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic extremum seeking with distinct input delays"};
  app.require_subcommand(1);

  std::string config_arg;
  std::string out_arg;
  std::string seeds_arg;
  std::string sweep_arg;
  std::optional<std::uint64_t> seed_opt;
  std::optional<double> c_opt;
  unsigned jobs = 0;

  auto* simulate = app.add_subcommand("simulate", "run one scenario");
  simulate->add_option("config", config_arg, "scenario file or preset name")
      ->required();
  simulate->add_option("--seed", seed_opt, "override the scenario seed");
  simulate->add_option("--out", out_arg, "output directory");

  auto* batch = app.add_subcommand("batch", "run a scenario over many seeds");
  batch->add_option("config", config_arg, "scenario file or preset name")
      ->required();
  batch->add_option("--seeds", seeds_arg, "comma-separated seed list")
      ->required();
  batch->add_option("--out", out_arg, "output directory");
  batch->add_option("--jobs", jobs, "parallel runs (0 = hardware)");

  auto* averaged =
      app.add_subcommand("averaged", "simulate the averaged system");
  averaged->add_option("config", config_arg, "scenario file or preset name")
      ->required();
  averaged->add_option("--c", c_opt, "override the filter gain c");
  averaged->add_option("--sweep-c", sweep_arg, "sweep c over lo:hi:step");
  averaged->add_option("--out", out_arg, "output directory");

  auto* presets = app.add_subcommand("presets", "list or show named presets");
  auto* presets_list = presets->add_subcommand("list", "list preset names");
  std::string preset_name;
  auto* presets_show =
      presets->add_subcommand("show", "print a preset's scenario file");
  presets_show->add_option("name", preset_name, "preset name")->required();
  presets->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets_list->parsed()) {
      for (const auto& name : sesc::preset_names()) {
        std::printf("%s\n", name.c_str());
      }
      return 0;
    }
    if (presets_show->parsed()) {
      std::fputs(sesc::preset_text(preset_name).c_str(), stdout);
      return 0;
    }

    const sesc::ScenarioConfig config = sesc::load_scenario(config_arg);

    if (simulate->parsed()) {
      const std::string out = default_out_dir(config.name, out_arg);
      const sesc::RunArtifacts artifacts =
          sesc::run_scenario_to_dir(config, out, seed_opt);
      std::printf("scenario %s seed %llu: %s\n", config.name.c_str(),
                  static_cast<unsigned long long>(artifacts.seed),
                  sesc::to_string(artifacts.report.status));
      std::printf("  y_residual     = %g\n", artifacts.report.y_residual);
      std::printf("  theta_residual = %g\n", artifacts.report.theta_residual);
      std::printf("  outputs in %s\n", out.c_str());
      return 0;
    }

    if (batch->parsed()) {
      const auto seeds = parse_seeds(seeds_arg);
      const std::string out = default_out_dir(config.name, out_arg);
      const sesc::BatchResult result =
          sesc::run_batch(config, seeds, out, jobs);
      std::printf("scenario %s: %d/%d runs satisfied the criterion "
                  "(fraction %.3f, 95%% CI [%.3f, %.3f])\n",
                  config.name.c_str(), result.estimate.successes,
                  result.estimate.trials, result.estimate.fraction,
                  result.estimate.ci_low, result.estimate.ci_high);
      std::printf("  outputs in %s\n", out.c_str());
      return 0;
    }

    if (averaged->parsed()) {
      if (!c_opt && !(config.controller.c > 0.0)) {
        std::fprintf(stderr,
                     "scenario '%s' has no filter gain (classic mode); "
                     "pass --c VALUE to analyze the averaged loop\n",
                     config.name.c_str());
        return 2;
      }
      const std::string out = default_out_dir(config.name + "_averaged",
                                              out_arg);
      if (!sweep_arg.empty()) {
        SweepRange range;
        if (!range.parse(sweep_arg)) {
          std::fprintf(stderr, "bad --sweep-c range '%s' (want lo:hi:step)\n",
                       sweep_arg.c_str());
          return 2;
        }
        std::string csv = "c,fitted_decay_rate,max_step_increase,final_V\n";
        std::printf("%10s %18s %18s\n", "c", "fitted_decay_rate",
                    "max_step_increase");
        for (double c = range.lo; c <= range.hi + 1e-12; c += range.step) {
          const sesc::AveragedRunResult res =
              sesc::run_averaged_scenario(config, c, "");
          std::printf("%10.4f %18.8f %18.3e\n", c, res.fitted_decay_rate,
                      res.max_step_increase);
          csv += sesc::format_double(c) + "," +
                 sesc::format_double(res.fitted_decay_rate) + "," +
                 sesc::format_double(res.max_step_increase) + "," +
                 sesc::format_double(res.lyapunov.back()) + "\n";
        }
        sesc::write_file(
            (std::filesystem::path(out) / "sweep.csv").string(), csv);
        std::printf("sweep written to %s\n", out.c_str());
        const double c_star = sesc::critical_filter_gain(
            config.map_hessian, config.controller.k_diag);
        std::printf("c_star = %.6f\n", c_star);
        return 0;
      }
      const sesc::AveragedRunResult res =
          sesc::run_averaged_scenario(config, c_opt, out);
      std::printf("averaged %s: V0 = %g, V(end) = %g, fitted rate = %g\n",
                  config.name.c_str(), res.initial_lyapunov,
                  res.lyapunov.back(), res.fitted_decay_rate);
      std::printf("  c_star = %.6f\n",
                  sesc::critical_filter_gain(config.map_hessian,
                                             config.controller.k_diag));
      std::printf("  outputs in %s\n", out.c_str());
      return 0;
    }
  } catch (const sesc::ConfigError& err) {
    std::fprintf(stderr, "%s\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
