#include "sesc/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sesc/delay_line.hpp"
#include "sesc/errors.hpp"
#include "sesc/toml_lite.hpp"

namespace sesc {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out + "]";
}

std::string fmt(const Matrix& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += fmt(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

// Pulls typed fields out of the parsed table, collecting one error per
// missing/mistyped field so a bad file is reported in full.
class Reader {
 public:
  Reader(const toml::Table& table, std::vector<std::string>& errors)
      : table_(table), errors_(errors) {}

  bool has(const std::string& path) const { return table_.count(path) != 0; }

  double number(const std::string& path, double fallback,
                bool required = false) {
    const auto* v = find(path, required);
    if (!v) return fallback;
    if (v->kind != toml::Value::Kind::Number) {
      errors_.push_back(path + ": expected a number");
      return fallback;
    }
    return v->number;
  }

  std::string string(const std::string& path, std::string fallback,
                     bool required = false) {
    const auto* v = find(path, required);
    if (!v) return fallback;
    if (v->kind != toml::Value::Kind::String) {
      errors_.push_back(path + ": expected a quoted string");
      return fallback;
    }
    return v->string;
  }

  Vector vector(const std::string& path, bool required = false) {
    const auto* v = find(path, required);
    if (!v) return Vector();
    if (v->kind != toml::Value::Kind::NumberArray) {
      errors_.push_back(path + ": expected an array of numbers");
      return Vector();
    }
    Vector out(static_cast<Eigen::Index>(v->array.size()));
    for (std::size_t i = 0; i < v->array.size(); ++i) {
      out[static_cast<Eigen::Index>(i)] = v->array[i];
    }
    return out;
  }

  Matrix matrix(const std::string& path, bool required = false) {
    const auto* v = find(path, required);
    if (!v) return Matrix();
    if (v->kind != toml::Value::Kind::NumberMatrix || v->matrix.empty()) {
      errors_.push_back(path + ": expected an array of number rows");
      return Matrix();
    }
    const std::size_t cols = v->matrix.front().size();
    for (const auto& row : v->matrix) {
      if (row.size() != cols) {
        errors_.push_back(path + ": rows have unequal lengths");
        return Matrix();
      }
    }
    Matrix out(static_cast<Eigen::Index>(v->matrix.size()),
               static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < v->matrix.size(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            v->matrix[i][j];
      }
    }
    return out;
  }

  void mark_known(const std::string& path) { known_.push_back(path); }

  void check_unknown_keys() {
    for (const auto& [path, value] : table_) {
      bool found = false;
      for (const auto& k : known_) {
        if (k == path) {
          found = true;
          break;
        }
      }
      if (!found) {
        errors_.push_back(path + ": unknown key (line " +
                          std::to_string(value.line) + ")");
      }
    }
  }

 private:
  const toml::Value* find(const std::string& path, bool required) {
    mark_known(path);
    const auto it = table_.find(path);
    if (it == table_.end()) {
      if (required) {
        errors_.push_back(path + ": missing required field");
      }
      return nullptr;
    }
    return &it->second;
  }

  const toml::Table& table_;
  std::vector<std::string>& errors_;
  std::vector<std::string> known_;
};

}  // namespace

StaticQuadraticMap ScenarioConfig::make_map() const {
  return StaticQuadraticMap(map_y_star, map_theta_star, map_hessian);
}

ClosedLoop ScenarioConfig::make_loop(
    std::optional<std::uint64_t> seed_override) const {
  return ClosedLoop(make_map(), dither, delays, controller, sim,
                    seed_override.value_or(seed));
}

AveragedSystem ScenarioConfig::make_averaged(
    std::optional<double> c_override) const {
  return AveragedSystem(map_hessian, controller.k_diag,
                        c_override.value_or(controller.c), delays,
                        averaged.grid_cells, averaged.dt);
}

Vector ScenarioConfig::averaged_initial_error() const {
  return sim.theta_hat0 - map_theta_star;
}

bool ScenarioConfig::satisfies(const ConvergenceReport& report) const {
  switch (batch.kind) {
    case BatchCriterion::Kind::Diverged:
      return report.status == RunStatus::Diverged;
    case BatchCriterion::Kind::Converged:
      return report.status != RunStatus::Diverged &&
             report.y_residual <= batch.max_y_residual;
  }
  return false;
}

std::string ScenarioConfig::to_toml() const {
  std::ostringstream out;
  out << "[map]\n";
  out << "y_star = " << fmt(map_y_star) << "\n";
  out << "theta_star = " << fmt(map_theta_star) << "\n";
  out << "hessian = " << fmt(map_hessian) << "\n\n";

  out << "[delays]\n";
  out << "d = " << fmt(delays) << "\n\n";

  out << "[dither]\n";
  out << "a = " << fmt(dither.amplitudes) << "\n";
  out << "omega = " << fmt(dither.omega) << "\n";
  out << "phase = "
      << (dither.phase == PhaseModel::Wiener ? "\"wiener\"" : "\"double_sine\"")
      << "\n";
  out << "seed = " << seed << "\n\n";

  out << "[controller]\n";
  out << "mode = "
      << (controller.mode == ControlMode::Predictor ? "\"predictor\""
                                                    : "\"classic\"")
      << "\n";
  out << "c = " << fmt(controller.c) << "\n";
  out << "k_diag = " << fmt(controller.k_diag) << "\n";
  out << "washout_cutoff = " << fmt(controller.washout_cutoff) << "\n\n";

  out << "[sim]\n";
  out << "dt = " << fmt(sim.dt) << "\n";
  out << "t_final = " << fmt(sim.t_final) << "\n";
  out << "theta_hat0 = " << fmt(sim.theta_hat0) << "\n";
  out << "decimation = " << sim.decimation << "\n";
  out << "divergence_factor = " << fmt(sim.divergence_factor) << "\n";
  out << "window_fraction = " << fmt(sim.window_fraction) << "\n\n";

  out << "[averaged]\n";
  out << "m = " << averaged.grid_cells << "\n";
  out << "dt = " << fmt(averaged.dt) << "\n";
  out << "t_final = " << fmt(averaged.t_final) << "\n";
  out << "decimation = " << averaged.decimation << "\n\n";

  out << "[batch]\n";
  out << "criterion = "
      << (batch.kind == BatchCriterion::Kind::Diverged ? "\"diverged\""
                                                       : "\"converged\"")
      << "\n";
  out << "max_y_residual = " << fmt(batch.max_y_residual) << "\n";
  return out.str();
}

ScenarioConfig ScenarioConfig::from_text(const std::string& text,
                                         const std::string& name) {
  const toml::Table table = toml::parse(text);
  std::vector<std::string> errors;
  Reader reader(table, errors);

  ScenarioConfig cfg;
  cfg.name = name;

  cfg.map_y_star = reader.number("map.y_star", 0.0, true);
  cfg.map_theta_star = reader.vector("map.theta_star", true);
  cfg.map_hessian = reader.matrix("map.hessian", true);
  cfg.delays = reader.vector("delays.d", true);
  cfg.dither.amplitudes = reader.vector("dither.a", true);
  cfg.dither.omega = reader.number("dither.omega", 0.0, true);
  const std::string phase = reader.string("dither.phase", "wiener");
  const double seed_num = reader.number("dither.seed", 1.0);
  const std::string mode = reader.string("controller.mode", "", true);
  cfg.controller.c = reader.number("controller.c", 0.0);
  cfg.controller.k_diag = reader.vector("controller.k_diag", true);
  cfg.controller.washout_cutoff =
      reader.number("controller.washout_cutoff", 0.25);
  cfg.sim.dt = reader.number("sim.dt", 1e-3, true);
  cfg.sim.t_final = reader.number("sim.t_final", 0.0, true);
  cfg.sim.theta_hat0 = reader.vector("sim.theta_hat0", true);
  const double decimation = reader.number("sim.decimation", 1.0);
  cfg.sim.divergence_factor = reader.number("sim.divergence_factor", 100.0);
  cfg.sim.window_fraction = reader.number("sim.window_fraction", 0.2);
  const double grid_cells = reader.number("averaged.m", 200.0);
  cfg.averaged.dt = reader.number("averaged.dt", 0.02);
  cfg.averaged.t_final = reader.number("averaged.t_final", 2000.0);
  const double av_decimation = reader.number("averaged.decimation", 10.0);
  const std::string criterion = reader.string("batch.criterion", "converged");
  cfg.batch.max_y_residual = reader.number("batch.max_y_residual", 0.25);
  reader.check_unknown_keys();

  // Field-level semantic checks, all collected before throwing.
  const auto n = cfg.map_theta_star.size();
  if (n < 1) {
    errors.push_back("map.theta_star: needs at least one entry");
  }
  if (cfg.map_hessian.rows() != n || cfg.map_hessian.cols() != n) {
    errors.push_back("map.hessian: must be " + std::to_string(n) + "x" +
                     std::to_string(n) + " to match map.theta_star");
  } else if (n >= 1) {
    bool symmetric = true;
    for (Eigen::Index i = 0; i < n && symmetric; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (std::abs(cfg.map_hessian(i, j) - cfg.map_hessian(j, i)) > 1e-12) {
          symmetric = false;
          break;
        }
      }
    }
    if (!symmetric) {
      errors.push_back("map.hessian: must be symmetric");
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(cfg.map_hessian);
      const bool neg = (eig.eigenvalues().array() < 0.0).all();
      const bool pos = (eig.eigenvalues().array() > 0.0).all();
      if (!neg && !pos) {
        errors.push_back("map.hessian: must be strictly sign-definite");
      }
    }
  }

  if (cfg.delays.size() != n) {
    errors.push_back("delays.d: needs one delay per channel");
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (cfg.delays[i] < 0.0) {
        errors.push_back("delays.d: entries must be >= 0");
        break;
      }
      if (i > 0 && cfg.delays[i] < cfg.delays[i - 1]) {
        errors.push_back("delays.d: entries must be sorted ascending");
        break;
      }
    }
    if (cfg.sim.dt > 0.0) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (delay_to_steps(cfg.delays[i], cfg.sim.dt) < 0) {
          errors.push_back("delays.d: entry " + std::to_string(i) + " (" +
                           fmt(cfg.delays[i]) +
                           ") is not an integer multiple of sim.dt");
        }
      }
    }
  }

  if (cfg.dither.amplitudes.size() != n) {
    errors.push_back("dither.a: needs one amplitude per channel");
  } else if (!(cfg.dither.amplitudes.array() > 0.0).all()) {
    errors.push_back("dither.a: amplitudes must be > 0");
  }
  if (!(cfg.dither.omega > 0.0)) {
    errors.push_back("dither.omega: must be > 0");
  }
  if (phase == "wiener") {
    cfg.dither.phase = PhaseModel::Wiener;
  } else if (phase == "double_sine") {
    cfg.dither.phase = PhaseModel::DoubleSine;
  } else {
    errors.push_back("dither.phase: expected \"wiener\" or \"double_sine\"");
  }
  if (!(seed_num >= 0.0) || seed_num != std::floor(seed_num)) {
    errors.push_back("dither.seed: must be a nonnegative integer");
  } else {
    cfg.seed = static_cast<std::uint64_t>(seed_num);
  }

  if (mode == "classic") {
    cfg.controller.mode = ControlMode::Classic;
  } else if (mode == "predictor") {
    cfg.controller.mode = ControlMode::Predictor;
  } else if (!mode.empty()) {
    errors.push_back("controller.mode: expected \"classic\" or \"predictor\"");
  }
  if (mode == "predictor" && !(cfg.controller.c > 0.0)) {
    errors.push_back("controller.c: must be > 0 in predictor mode");
  }
  if (cfg.controller.k_diag.size() != n) {
    errors.push_back("controller.k_diag: needs one gain per channel");
  } else if (!(cfg.controller.k_diag.array() > 0.0).all()) {
    errors.push_back("controller.k_diag: gains must be > 0");
  }
  if (cfg.controller.washout_cutoff < 0.0) {
    errors.push_back("controller.washout_cutoff: must be >= 0");
  }

  if (!(cfg.sim.dt > 0.0)) {
    errors.push_back("sim.dt: must be > 0");
  }
  if (!(cfg.sim.t_final >= 0.0)) {
    errors.push_back("sim.t_final: must be >= 0");
  }
  if (cfg.sim.theta_hat0.size() != n) {
    errors.push_back("sim.theta_hat0: dimension must match map.theta_star");
  }
  if (decimation < 1.0 || decimation != std::floor(decimation)) {
    errors.push_back("sim.decimation: must be a positive integer");
  } else {
    cfg.sim.decimation = static_cast<int>(decimation);
  }
  if (!(cfg.sim.divergence_factor > 0.0)) {
    errors.push_back("sim.divergence_factor: must be > 0");
  }
  if (!(cfg.sim.window_fraction > 0.0) || cfg.sim.window_fraction > 1.0) {
    errors.push_back("sim.window_fraction: must be in (0, 1]");
  }

  if (grid_cells < 10.0 || grid_cells != std::floor(grid_cells)) {
    errors.push_back("averaged.m: must be an integer >= 10");
  } else {
    cfg.averaged.grid_cells = static_cast<int>(grid_cells);
  }
  if (!(cfg.averaged.dt > 0.0)) {
    errors.push_back("averaged.dt: must be > 0");
  }
  if (!(cfg.averaged.t_final >= 0.0)) {
    errors.push_back("averaged.t_final: must be >= 0");
  }
  if (av_decimation < 1.0 || av_decimation != std::floor(av_decimation)) {
    errors.push_back("averaged.decimation: must be a positive integer");
  } else {
    cfg.averaged.decimation = static_cast<int>(av_decimation);
  }

  if (criterion == "converged") {
    cfg.batch.kind = BatchCriterion::Kind::Converged;
  } else if (criterion == "diverged") {
    cfg.batch.kind = BatchCriterion::Kind::Diverged;
  } else {
    errors.push_back("batch.criterion: expected \"converged\" or \"diverged\"");
  }
  if (!(cfg.batch.max_y_residual > 0.0)) {
    errors.push_back("batch.max_y_residual: must be > 0");
  }

  if (!errors.empty()) {
    throw ConfigError(std::move(errors));
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError({path + ": cannot open file"});
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_text(buffer.str(), std::filesystem::path(path).stem().string());
}

}  // namespace sesc
