#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sesc/io.hpp"
#include "sesc/metrics.hpp"
#include "sesc/scenario.hpp"

namespace sesc {

struct RunArtifacts {
  Trajectory trajectory;
  ConvergenceReport report;
  std::uint64_t seed = 0;
};

// Runs one scenario in memory.
RunArtifacts run_scenario(const ScenarioConfig& config,
                          std::optional<std::uint64_t> seed_override = {});

// Runs and writes trajectory.csv, summary.txt, and per-signal SVG plots into
// out_dir.  A diverged run is a normal outcome here (status lands in the
// summary); only I/O failures throw.
RunArtifacts run_scenario_to_dir(const ScenarioConfig& config,
                                 const std::string& out_dir,
                                 std::optional<std::uint64_t> seed_override = {});

// Fraction of seeds whose report satisfies the criterion, with an exact
// binomial confidence interval.  Seeds must be unique.  jobs = 0 picks the
// hardware concurrency; runs are independent and merge order-independently.
SuccessEstimate success_probability(
    const ScenarioConfig& config, std::span<const std::uint64_t> seeds,
    const std::function<bool(const ConvergenceReport&)>& criterion,
    unsigned jobs = 0);

struct BatchResult {
  SuccessEstimate estimate;
  std::vector<RunArtifacts> runs;  // one per seed, in seed order
};

// Runs every seed, applies the scenario's batch criterion, and (when out_dir
// is non-empty) writes per-seed subdirectories plus an aggregate report.
BatchResult run_batch(const ScenarioConfig& config,
                      std::span<const std::uint64_t> seeds,
                      const std::string& out_dir, unsigned jobs = 0);

// Averaged-system analysis of the scenario (optionally at an overridden
// filter gain); writes averaged_trajectory.csv and averaged_summary.txt when
// out_dir is non-empty.
AveragedRunResult run_averaged_scenario(const ScenarioConfig& config,
                                        std::optional<double> c_override,
                                        const std::string& out_dir);

std::vector<std::pair<std::string, std::string>> summary_entries(
    const ScenarioConfig& config, const RunArtifacts& artifacts);

}  // namespace sesc
