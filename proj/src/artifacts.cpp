#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "wcsf/error.hpp"
#include "wcsf/scenario.hpp"

namespace wcsf {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

void append(std::string& s, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  s.append(buf, static_cast<std::size_t>(n));
}

void append_fixed(std::string& s, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.2f", v);
  s.append(buf, static_cast<std::size_t>(n));
}

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 40.0;
constexpr std::size_t kMaxSnapshots = 24;

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

std::string svg_open(const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"40\" y=\"24\" font-family=\"monospace\" font-size=\"13\">" + title + "</text>\n";
  s += "<rect x=\"40\" y=\"40\" width=\"560\" height=\"320\" fill=\"none\" stroke=\"#888\"/>\n";
  return s;
}

void polyline(std::string& s, const Frame& f, const std::vector<std::pair<double, double>>& pts, const std::string& style) {
  s += "<path d=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s += i ? " L" : "M";
    append_fixed(s, f.px(pts[i].first));
    s += ' ';
    append_fixed(s, f.py(pts[i].second));
  }
  s += "\" fill=\"none\" " + style + "/>\n";
}

void padded(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

}  // namespace

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
  std::string s;
  const int n = traj.size() ? traj[0].curve.base_dim() : 1;
  s += "t,j,r";
  for (int i = 1; i <= n; ++i) s += ",x" + std::to_string(i);
  s += ",theta,theta_hat,curvature\n";
  for (const FlowState& st : traj.states()) {
    for (int j = 0; j < st.curve.size(); ++j) {
      append(s, st.t);
      s += ',' + std::to_string(j);
      for (int a = 0; a <= n; ++a) {
        s += ',';
        append(s, st.curve.lifted(a, j));
      }
      s += ',';
      append(s, st.geom.theta[j]);
      s += ',';
      append(s, st.geom.theta_hat[j]);
      s += ',';
      append(s, st.geom.curvature_norm[j]);
      s += '\n';
    }
  }
  write_file(path, s);
}

void write_history_csv(const fs::path& path, const std::vector<HistoryRow>& rows) {
  std::string s = "t,min_theta,lower_bound,length,max_curvature\n";
  for (const HistoryRow& r : rows) {
    for (double v : {r.t, r.min_theta, r.lower_bound, r.length}) {
      append(s, v);
      s += ',';
    }
    append(s, r.max_curvature);
    s += '\n';
  }
  write_file(path, s);
}

void write_curves_svg(const fs::path& path, const Trajectory& traj) {
  if (traj.size() == 0) return;
  std::vector<std::size_t> pick;
  const std::size_t n = traj.size();
  const std::size_t count = std::min(n, kMaxSnapshots);
  for (std::size_t i = 0; i < count; ++i) pick.push_back(count == 1 ? 0 : i * (n - 1) / (count - 1));

  Frame f{0.0, kTwoPi, 0.0, 0.0};
  double lo = 1e300, hi = -1e300;
  for (std::size_t k : pick)
    for (int j = 0; j < traj[k].curve.size(); ++j) {
      lo = std::min(lo, traj[k].curve.lifted(1, j));
      hi = std::max(hi, traj[k].curve.lifted(1, j));
    }
  padded(lo, hi);
  f.y0 = lo;
  f.y1 = hi;
  f.x0 = 1e300;
  f.x1 = -1e300;
  for (std::size_t k : pick)
    for (int j = 0; j < traj[k].curve.size(); ++j) {
      f.x0 = std::min(f.x0, traj[k].curve.lifted(0, j));
      f.x1 = std::max(f.x1, traj[k].curve.lifted(0, j) + kTwoPi / traj[k].curve.size());
    }

  std::string s = svg_open("curves in the (r, x1) chart, t = " + std::to_string(traj[0].t) + " .. " + std::to_string(traj.back().t));
  for (std::size_t idx = 0; idx < pick.size(); ++idx) {
    const FlowState& st = traj[pick[idx]];
    std::vector<std::pair<double, double>> pts;
    for (int j = 0; j < st.curve.size(); ++j) pts.emplace_back(st.curve.lifted(0, j), st.curve.lifted(1, j));
    pts.emplace_back(st.curve.lifted(0, 0) + kTwoPi * st.curve.winding(0), st.curve.lifted(1, 0) + kTwoPi * st.curve.winding(1));
    const int red = pick.size() > 1 ? static_cast<int>(255.0 * idx / (pick.size() - 1)) : 0;
    char style[64];
    std::snprintf(style, sizeof style, "stroke=\"rgb(%d,60,%d)\" stroke-width=\"1.2\"", red, 255 - red);
    polyline(s, f, pts, style);
  }
  s += "</svg>\n";
  write_file(path, s);
}

void write_theta_svg(const fs::path& path, const std::vector<HistoryRow>& rows) {
  if (rows.empty()) return;
  Frame f{rows.front().t, rows.back().t, 1e300, -1e300};
  if (!(f.x1 > f.x0)) f.x1 = f.x0 + 1.0;
  for (const HistoryRow& r : rows) {
    f.y0 = std::min({f.y0, r.min_theta, r.lower_bound});
    f.y1 = std::max({f.y1, r.min_theta, r.lower_bound});
  }
  padded(f.y0, f.y1);
  std::vector<std::pair<double, double>> theta, bound;
  for (const HistoryRow& r : rows) {
    theta.emplace_back(r.t, r.min_theta);
    bound.emplace_back(r.t, r.lower_bound);
  }
  std::string s = svg_open("min theta (solid) and exp(-Ct) min theta(0) (dashed)");
  polyline(s, f, theta, "stroke=\"#1f4fb4\" stroke-width=\"1.5\"");
  polyline(s, f, bound, "stroke=\"#b41f1f\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"");
  s += "</svg>\n";
  write_file(path, s);
}

}  // namespace wcsf
