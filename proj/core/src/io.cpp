#include "sesc/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sesc {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  const int n = traj.dimension();
  std::string out;
  out.reserve(traj.size() * 32 * (4 * static_cast<std::size_t>(n) +
                                  static_cast<std::size_t>(n) *
                                      static_cast<std::size_t>(n) + 2));
  out += "t";
  for (int i = 1; i <= n; ++i) out += ",theta_" + std::to_string(i);
  for (int i = 1; i <= n; ++i) out += ",theta_hat_" + std::to_string(i);
  out += ",y";
  for (int i = 1; i <= n; ++i) out += ",U_" + std::to_string(i);
  for (int i = 1; i <= n; ++i) out += ",Ghat_" + std::to_string(i);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      out += ",Hhat_" + std::to_string(i) + std::to_string(j);
    }
  }
  for (int i = 1; i <= n; ++i) out += ",eta_" + std::to_string(i);
  out += "\n";

  for (std::size_t k = 0; k < traj.size(); ++k) {
    out += format_double(traj.t[k]);
    for (int i = 0; i < n; ++i) out += "," + format_double(traj.theta[k][i]);
    for (int i = 0; i < n; ++i) {
      out += "," + format_double(traj.theta_hat[k][i]);
    }
    out += "," + format_double(traj.y[k]);
    for (int i = 0; i < n; ++i) out += "," + format_double(traj.u[k][i]);
    for (int i = 0; i < n; ++i) out += "," + format_double(traj.g_hat[k][i]);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out += "," + format_double(traj.h_hat[k](i, j));
      }
    }
    for (int i = 0; i < n; ++i) out += "," + format_double(traj.eta[k][i]);
    out += "\n";
  }
  return out;
}

std::string averaged_csv(const AveragedRunResult& result) {
  const int n = result.theta_tilde.empty()
                    ? 0
                    : static_cast<int>(result.theta_tilde.front().size());
  std::string out = "t";
  for (int i = 1; i <= n; ++i) out += ",theta_tilde_" + std::to_string(i);
  for (int i = 1; i <= n; ++i) out += ",U_av_" + std::to_string(i);
  out += ",V,Psi\n";
  for (std::size_t k = 0; k < result.t.size(); ++k) {
    out += format_double(result.t[k]);
    for (int i = 0; i < n; ++i) {
      out += "," + format_double(result.theta_tilde[k][i]);
    }
    for (int i = 0; i < n; ++i) {
      out += "," + format_double(result.u_boundary[k][i]);
    }
    out += "," + format_double(result.lyapunov[k]);
    out += "," + format_double(result.norm_psi[k]);
    out += "\n";
  }
  return out;
}

std::string summary_text(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out;
  for (const auto& [key, value] : entries) {
    out += key + " = " + value + "\n";
  }
  return out;
}

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 320;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 28;
constexpr int kMarginBottom = 36;

const char* series_color(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string svg_line_chart(const std::string& title,
                           const std::vector<double>& t,
                           const std::vector<std::vector<double>>& series,
                           const std::vector<std::string>& labels) {
  double t_min = 0.0, t_max = 1.0, v_min = 0.0, v_max = 1.0;
  bool have_point = false;
  if (!t.empty()) {
    t_min = t.front();
    t_max = t.back();
  }
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.size() && k < t.size(); ++k) {
      if (!std::isfinite(s[k])) continue;
      if (!have_point) {
        v_min = v_max = s[k];
        have_point = true;
      } else {
        v_min = std::min(v_min, s[k]);
        v_max = std::max(v_max, s[k]);
      }
    }
  }
  if (t_max <= t_min) t_max = t_min + 1.0;
  if (v_max <= v_min) {
    v_max = v_min + 1.0;
    v_min -= 1.0;
  }
  const double pad = 0.05 * (v_max - v_min);
  v_min -= pad;
  v_max += pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double x) {
    return kMarginLeft + (x - t_min) / (t_max - t_min) * plot_w;
  };
  auto sy = [&](double v) {
    return kMarginTop + (v_max - v) / (v_max - v_min) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kMarginLeft << "\" y=\"18\" font-family=\"sans-serif\""
      << " font-size=\"13\" fill=\"#333\">" << title << "</text>\n";
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#999\"/>\n";

  // Decimate long series so files stay small; the envelope is what matters.
  const std::size_t max_points = 2000;
  const std::size_t stride = std::max<std::size_t>(1, t.size() / max_points);

  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<polyline fill=\"none\" stroke=\"" << series_color(s)
        << "\" stroke-width=\"1\" points=\"";
    for (std::size_t k = 0; k < t.size() && k < series[s].size();
         k += stride) {
      if (!std::isfinite(series[s][k])) continue;
      out << coord(sx(t[k])) << "," << coord(sy(series[s][k])) << " ";
    }
    out << "\"/>\n";
  }

  for (std::size_t s = 0; s < labels.size(); ++s) {
    const double lx = kMarginLeft + 8 + 110.0 * static_cast<double>(s);
    out << "<rect x=\"" << coord(lx) << "\" y=\"" << kMarginTop + 6
        << "\" width=\"10\" height=\"3\" fill=\"" << series_color(s)
        << "\"/>\n";
    out << "<text x=\"" << coord(lx + 14) << "\" y=\"" << kMarginTop + 11
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">"
        << labels[s] << "</text>\n";
  }

  out << "<text x=\"" << kMarginLeft << "\" y=\"" << kHeight - 10
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">t in ["
      << format_double(t_min) << ", " << format_double(t_max)
      << "], values in [" << format_double(v_min) << ", "
      << format_double(v_max) << "]</text>\n";
  out << "</svg>\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error(path + ": cannot open for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw std::runtime_error(path + ": write failed");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error(path + ": cannot open for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace sesc
