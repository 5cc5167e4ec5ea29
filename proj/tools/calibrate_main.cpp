// Calibration tool: runs a preset over many seeds and prints robust
// statistics (median and median +/- 3*MAD) for the report quantities that
// back fixed test thresholds.  The committed fixtures file under
// tests/fixtures/ is this tool's output.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "sesc/presets.hpp"
#include "sesc/runner.hpp"

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mad(const std::vector<double>& v, double med) {
  std::vector<double> dev;
  dev.reserve(v.size());
  for (double x : v) dev.push_back(std::abs(x - med));
  return median(dev);
}

void print_stat(const char* key, const std::vector<double>& v) {
  const double med = median(v);
  const double m = mad(v, med);
  std::printf("%s_median = %.6g\n", key, med);
  std::printf("%s_mad = %.6g\n", key, m);
  std::printf("%s_upper = %.6g\n", key, med + 3.0 * m);
  std::printf("%s_lower = %.6g\n", key, med - 3.0 * m);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string preset = argc > 1 ? argv[1] : "fig7_predictor_delays";
  const int seeds = argc > 2 ? std::atoi(argv[2]) : 50;

  const sesc::ScenarioConfig config = sesc::load_scenario(preset);
  std::vector<double> y_res, theta_res, atten, h11, h12, h22;
  int diverged = 0;

  std::vector<sesc::RunArtifacts> runs(static_cast<std::size_t>(seeds));
  for (int s = 1; s <= seeds; ++s) {
    runs[static_cast<std::size_t>(s - 1)] =
        sesc::run_scenario(config, static_cast<std::uint64_t>(s));
  }
  for (const auto& run : runs) {
    const auto& r = run.report;
    if (r.status == sesc::RunStatus::Diverged) {
      ++diverged;
      continue;
    }
    y_res.push_back(r.y_residual);
    theta_res.push_back(r.theta_residual);
    if (r.u_peak > 0) atten.push_back(r.u_residual / r.u_peak);
    h11.push_back(r.h_hat_tail_average(0, 0));
    h12.push_back(r.h_hat_tail_average(0, 1));
    if (config.dimension() > 1) {
      h22.push_back(r.h_hat_tail_average(1, 1));
    }
  }

  std::printf("# calibration: preset %s over seeds 1..%d\n", preset.c_str(),
              seeds);
  std::printf("preset = \"%s\"\n", preset.c_str());
  std::printf("seeds = %d\n", seeds);
  std::printf("diverged = %d\n", diverged);
  if (!y_res.empty()) {
    print_stat("y_residual", y_res);
    print_stat("theta_residual", theta_res);
    print_stat("u_attenuation", atten);
    print_stat("hhat_tail_11", h11);
    print_stat("hhat_tail_12", h12);
    if (!h22.empty()) print_stat("hhat_tail_22", h22);
  }
  return 0;
}
