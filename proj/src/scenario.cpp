#include "wcsf/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "wcsf/error.hpp"
#include "wcsf/field_expr.hpp"
#include "wcsf/spectral.hpp"

namespace wcsf {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) return v.substr(1, v.size() - 2);
  return v;
}

// Drops a '#' comment unless it sits inside quotes.
std::string strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

struct Entry {
  std::string value;
  int line;
};

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a{
      {"kind", "manifold.kind"}, {"n", "manifold.n"},       {"psi", "warp"},
      {"phi", "warp"},           {"f", "init"},             {"m", "grid.m"},
      {"cfl", "time.cfl"},       {"t_max", "time.t_max"},
  };
  return a;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> k{
      "manifold.kind", "manifold.n",    "warp",          "warp.cos",         "warp.sin",       "base.g11",
      "base.g12",      "base.g22",      "init",          "init.cos",         "init.sin",       "init2",
      "init2.cos",     "init2.sin",     "init.winding",  "grid.allow_winding", "grid.m",       "flow.mode",
      "time.cfl",      "time.t_max",    "tol.geo",       "tol.theta_floor",  "tol.a_ceiling",  "tol.bound",
      "record.stride", "verify.bounds", "verify.residuals", "verify.convergence", "verify.levels", "verify.window",
      "bound.rate",    "bound.drift",   "output.svg",
  };
  return k;
}

class Keys {
 public:
  explicit Keys(std::map<std::string, Entry> e) : e_(std::move(e)) {}

  bool has(const std::string& k) const { return e_.count(k) != 0; }
  int line(const std::string& k) const { return has(k) ? e_.at(k).line : 0; }
  const std::string& raw(const std::string& k) const { return e_.at(k).value; }

  double number(const std::string& k, double fallback) const {
    if (!has(k)) return fallback;
    return parse_number(k, raw(k));
  }

  int integer(const std::string& k, int fallback) const {
    if (!has(k)) return fallback;
    const double v = number(k, 0.0);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(k, "expected an integer, got '" + raw(k) + "'");
    return static_cast<int>(v);
  }

  bool boolean(const std::string& k, bool fallback) const {
    if (!has(k)) return fallback;
    const std::string& v = raw(k);
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    fail(k, "expected true or false, got '" + v + "'");
  }

  std::vector<double> array(const std::string& k) const {
    std::string v = raw(k);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') fail(k, "expected [a, b, ...]");
    std::vector<double> out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) fail(k, "empty array element");
      out.push_back(parse_number(k, t));
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& k, const std::string& what) const { throw ParseError(line(k), k + ": " + what); }

 private:
  double parse_number(const std::string& k, const std::string& v) const {
    std::size_t used = 0;
    double out = 0.0;
    try {
      out = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size() || !std::isfinite(out)) fail(k, "expected a number, got '" + v + "'");
    return out;
  }

  std::map<std::string, Entry> e_;
};

// A field given either as an expression under `key` or as coefficient arrays
// under `key.cos` / `key.sin`.
std::optional<std::pair<FourierField, std::string>> read_field(const Keys& keys, const std::string& key, int dim) {
  const bool expr = keys.has(key);
  const bool arrays = keys.has(key + ".cos") || keys.has(key + ".sin");
  if (!expr && !arrays) return std::nullopt;
  if (expr && arrays) keys.fail(key, "give either an expression or coefficient arrays, not both");
  if (expr) {
    try {
      return std::make_pair(parse_field(keys.raw(key), dim), keys.raw(key));
    } catch (const Error& e) {
      keys.fail(key, e.what());
    }
  }
  const std::string ck = keys.has(key + ".cos") ? key + ".cos" : key + ".sin";
  if (dim != 1) keys.fail(ck, "coefficient arrays describe fields on S^1 only");
  const std::vector<double> c = keys.has(key + ".cos") ? keys.array(key + ".cos") : std::vector<double>{};
  const std::vector<double> s = keys.has(key + ".sin") ? keys.array(key + ".sin") : std::vector<double>{};
  std::string text;
  if (!c.empty()) text += "cos" + keys.raw(key + ".cos");
  if (!s.empty()) text += (text.empty() ? "" : " ") + std::string("sin") + keys.raw(key + ".sin");
  return std::make_pair(FourierField::series(c, s), text);
}

}  // namespace

WarpedProduct Scenario::manifold() const {
  BaseMetric b = base_entries.empty() ? BaseMetric::flat(base_dim) : BaseMetric::fourier(base_dim, base_entries);
  return kind == WarpKind::Left ? WarpedProduct::left(warp, std::move(b)) : WarpedProduct::right(warp, std::move(b));
}

DiscreteCurve Scenario::initial_curve() const {
  DiscreteCurve c = make_graph_curve(init, m, graph);
  if (mode == CurveMode::Graph) return c;
  return DiscreteCurve::parametric(c.periodic_parts(), c.windings());
}

Scenario parse_config(std::string_view text, std::string name) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw_line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = unquote(trim(std::string_view(line).substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, "missing key");
    if (auto it = aliases().find(key); it != aliases().end()) key = it->second;
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw ParseError(line_no, "unknown key '" + key + "'");
    if (entries.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    entries.emplace(key, Entry{value, line_no});
  }
  const Keys keys(std::move(entries));

  Scenario s;
  s.name = std::move(name);

  if (keys.has("manifold.kind")) {
    const std::string& k = keys.raw("manifold.kind");
    if (k == "left") s.kind = WarpKind::Left;
    else if (k == "right") s.kind = WarpKind::Right;
    else keys.fail("manifold.kind", "expected left or right, got '" + k + "'");
  }
  s.base_dim = keys.integer("manifold.n", 1);
  if (s.base_dim != 1 && s.base_dim != 2) keys.fail("manifold.n", "base dimension must be 1 or 2");
  const int warp_dim = s.kind == WarpKind::Left ? s.base_dim : 1;

  const std::string warp_key = keys.has("warp.cos") ? "warp.cos" : (keys.has("warp.sin") ? "warp.sin" : "warp");
  if (auto w = read_field(keys, "warp", warp_dim)) std::tie(s.warp, s.warp_text) = *w;
  else s.warp = FourierField::constant(1.0, warp_dim);

  const std::vector<std::string> base_keys =
      s.base_dim == 1 ? std::vector<std::string>{"base.g11"} : std::vector<std::string>{"base.g11", "base.g12", "base.g22"};
  if (s.base_dim == 1 && (keys.has("base.g12") || keys.has("base.g22")))
    keys.fail(keys.has("base.g12") ? "base.g12" : "base.g22", "only base.g11 applies when manifold.n = 1");
  if (std::any_of(base_keys.begin(), base_keys.end(), [&](const auto& k) { return keys.has(k); })) {
    const std::vector<std::string> defaults{"1", "0", "1"};
    for (std::size_t i = 0; i < base_keys.size(); ++i) {
      const std::string& k = base_keys[i];
      const std::string t = keys.has(k) ? keys.raw(k) : (s.base_dim == 1 ? "1" : defaults[i]);
      try {
        s.base_entries.push_back(parse_field(t, s.base_dim));
      } catch (const Error& e) {
        keys.fail(k, e.what());
      }
      s.base_text.push_back(t);
    }
  }

  for (int i = 0; i < s.base_dim; ++i) {
    const std::string key = i == 0 ? "init" : "init2";
    if (auto f = read_field(keys, key, 1)) {
      s.init.push_back(f->first);
      s.init_text.push_back(f->second);
    } else {
      s.init.push_back(FourierField::constant(0.0));
      s.init_text.push_back("0");
    }
  }
  if (s.base_dim == 1 && (keys.has("init2") || keys.has("init2.cos") || keys.has("init2.sin")))
    keys.fail(keys.has("init2") ? "init2" : (keys.has("init2.cos") ? "init2.cos" : "init2.sin"),
              "init2 applies only when manifold.n = 2");

  s.graph.allow_winding = keys.boolean("grid.allow_winding", false);
  if (keys.has("init.winding")) {
    const std::string& v = keys.raw("init.winding");
    std::vector<double> w = v.starts_with("[") ? keys.array("init.winding") : std::vector<double>{keys.number("init.winding", 0)};
    if (static_cast<int>(w.size()) != s.base_dim) keys.fail("init.winding", "need one winding per base dimension");
    for (double x : w) {
      if (x != std::floor(x)) keys.fail("init.winding", "windings must be integers");
      s.graph.winding.push_back(static_cast<int>(x));
    }
    if (!s.graph.allow_winding && std::any_of(s.graph.winding.begin(), s.graph.winding.end(), [](int x) { return x != 0; }))
      keys.fail("init.winding", "nonzero winding requires grid.allow_winding = true");
  }

  s.m = keys.integer("grid.m", s.m);
  if (s.m < 32 || s.m > 1024 || !spectral::is_power_of_two(s.m))
    keys.fail("grid.m", "must be a power of two in [32, 1024], got " + std::to_string(s.m));

  if (keys.has("flow.mode")) {
    const std::string& v = keys.raw("flow.mode");
    if (v == "graph") s.mode = CurveMode::Graph;
    else if (v == "parametric") s.mode = CurveMode::Parametric;
    else keys.fail("flow.mode", "expected graph or parametric, got '" + v + "'");
  }

  s.flow.cfl = keys.number("time.cfl", s.flow.cfl);
  if (!(s.flow.cfl > 0.0 && s.flow.cfl <= 1.0)) keys.fail("time.cfl", "must lie in (0, 1]");
  s.flow.t_max = keys.number("time.t_max", s.flow.t_max);
  if (s.flow.t_max < 0.0) keys.fail("time.t_max", "must be >= 0");
  s.flow.tol_geo = keys.number("tol.geo", s.flow.tol_geo);
  s.flow.theta_floor = keys.number("tol.theta_floor", s.flow.theta_floor);
  s.flow.a_ceiling = keys.number("tol.a_ceiling", s.flow.a_ceiling);
  s.monitor.tolerance = keys.number("tol.bound", s.monitor.tolerance);
  if (s.monitor.tolerance < 0.0) keys.fail("tol.bound", "must be >= 0");
  for (const char* k : {"tol.geo", "tol.theta_floor", "tol.a_ceiling"})
    if (keys.number(k, 1.0) <= 0.0) keys.fail(k, "must be positive");
  s.flow.record_stride = keys.integer("record.stride", s.flow.record_stride);
  if (s.flow.record_stride < 1) keys.fail("record.stride", "must be >= 1");

  s.verify_bounds = keys.boolean("verify.bounds", s.verify_bounds);
  s.verify_residuals = keys.boolean("verify.residuals", s.verify_residuals);
  s.verify_convergence = keys.boolean("verify.convergence", s.verify_convergence);
  if (keys.has("verify.levels")) {
    s.levels.clear();
    for (double v : keys.array("verify.levels")) {
      const int lv = static_cast<int>(v);
      if (lv != v || lv < DiscreteCurve::kMinNodes || !spectral::is_power_of_two(lv))
        keys.fail("verify.levels", "levels must be powers of two >= 32");
      s.levels.push_back(lv);
    }
    if (s.levels.size() < 2) keys.fail("verify.levels", "need at least two levels");
  }
  s.window = keys.number("verify.window", s.window);
  if (!(s.window > 0.0)) keys.fail("verify.window", "must be positive");
  if (keys.has("bound.rate")) s.monitor.rate_override = keys.number("bound.rate", 0.0);
  if (keys.has("bound.drift")) s.monitor.drift_override = keys.number("bound.drift", 0.0);
  s.svg = keys.boolean("output.svg", s.svg);

  try {
    (void)s.manifold();
  } catch (const Error& e) {
    const std::string key = e.what() == std::string("warp not positive") ? warp_key : base_keys.front();
    keys.fail(keys.has(key) ? key : "manifold.kind", e.what());
  }
  return s;
}

Scenario load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.stem().string());
}

// ---------------------------------------------------------------------------

std::vector<std::string> FlowReport::failures() const {
  std::vector<std::string> out;
  if (summary.stop == StopReason::Blowup) out.push_back("blowup");
  if (summary.graph_loss_flag) out.push_back("graph_loss");
  if (bounds) {
    if (!bounds->lower.pass) out.push_back(bounds->lower.name);
    if (!bounds->drift.pass) out.push_back(bounds->drift.name);
  }
  if (dissipation && !dissipation->pass) out.push_back(dissipation->name);
  if (study)
    for (const ResidualReport* r : {&study->evolution, &study->commutator, &study->dissipation, &study->gradient_identity})
      if (!r->pass) out.push_back("convergence." + r->name);
  return out;
}

int FlowReport::exit_code() const {
  if (summary.stop == StopReason::Blowup) return kExitBlowup;
  if (summary.stop == StopReason::GraphLoss) return kExitGraphLoss;
  return failures().empty() ? kExitOk : kExitFalsified;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_same_v<T, std::string>) s += v[i];
    else if constexpr (std::is_floating_point_v<T>) s += num(v[i]);
    else s += std::to_string(v[i]);
  }
  return s + "]";
}

class Text {
 public:
  void kv(const std::string& k, const std::string& v) { out_ += pad() + k + ": " + v + "\n"; }
  void kv(const std::string& k, double v) { kv(k, num(v)); }
  void kv(const std::string& k, long v) { kv(k, std::to_string(v)); }
  void kv(const std::string& k, int v) { kv(k, std::to_string(v)); }
  void kv(const std::string& k, bool v) { kv(k, std::string(v ? "true" : "false")); }
  void open(const std::string& k) {
    out_ += pad() + k + ":\n";
    ++depth_;
  }
  void close() { --depth_; }
  const std::string& str() const { return out_; }

 private:
  std::string pad() const { return std::string(2 * depth_, ' '); }
  std::string out_;
  int depth_ = 0;
};

void bound_text(Text& t, const BoundReport& b) {
  t.open(b.name);
  t.kv("constant", b.constant);
  t.kv("inputs", b.inputs);
  t.kv("tolerance", b.tolerance);
  t.kv("samples", b.samples);
  t.kv("worst_slack", b.worst_slack);
  t.kv("worst_time", b.worst_time);
  t.kv("pass", b.pass);
  t.close();
}

void residual_text(Text& t, const ResidualReport& r) {
  t.open(r.name);
  t.kv("grids", list(r.grids));
  t.kv("max_residual", list(r.max_residual));
  t.kv("orders", list(r.orders));
  t.kv("required_order", r.required_order);
  t.kv("pass", r.pass);
  t.close();
}

}  // namespace

std::string FlowReport::text(const Scenario& s) const {
  Text t;
  t.kv("scenario", scenario);
  t.open("setup");
  t.kv("manifold", std::string(s.kind == WarpKind::Left ? "left" : "right"));
  t.kv("base_dim", s.base_dim);
  t.kv("warp", s.warp_text);
  t.kv("base", s.base_text.empty() ? std::string("flat") : list(s.base_text));
  t.kv("init", list(s.init_text));
  t.kv("grid_m", s.m);
  t.kv("mode", std::string(s.mode == CurveMode::Graph ? "graph" : "parametric"));
  t.kv("cfl", s.flow.cfl);
  t.kv("t_max", s.flow.t_max);
  t.kv("record_stride", s.flow.record_stride);
  t.close();

  t.open("flow");
  t.kv("stop", std::string(to_string(summary.stop)));
  t.kv("t_final", summary.t_final);
  t.kv("steps", summary.steps);
  t.kv("max_curvature", summary.max_curvature);
  t.kv("min_theta_hat", summary.min_theta_hat);
  t.kv("initial_length", summary.initial_length);
  t.kv("final_length", summary.final_length);
  t.kv("limit_point", list(summary.limit_point));
  if (s.kind == WarpKind::Left) t.kv("limit_warp_gradient", summary.limit_warp_gradient);
  t.kv("graph_loss_flag", summary.graph_loss_flag);
  t.kv("converging_undecided", summary.converging_undecided);
  t.close();

  if (bounds || dissipation) {
    t.open("bounds");
    if (bounds) {
      bound_text(t, bounds->lower);
      bound_text(t, bounds->drift);
    }
    if (dissipation) {
      t.open(dissipation->name);
      t.kv("samples", dissipation->samples);
      t.kv("max_rate_residual", dissipation->max_residual);
      t.kv("monotone", dissipation->monotone);
      t.kv("pass", dissipation->pass);
      t.close();
    }
    t.close();
  }

  if (residuals) {
    const ResidualSection& r = *residuals;
    t.open("residuals");
    t.kv("triples", r.triples);
    t.kv("skipped_triples", r.skipped_triples);
    t.kv("evolution_max", r.evolution);
    if (r.evolution_squared_variant) {
      t.kv("evolution_squared_gradient_max", *r.evolution_squared_variant);
      t.kv("gradient_power_disagreement", std::abs(*r.evolution_squared_variant - r.evolution) > s.monitor.tolerance);
    }
    t.kv("commutator_max", r.commutator);
    t.kv("gradient_identity_max", r.gradient_identity);
    if (s.mode == CurveMode::Graph) {
      t.open("theta_closed_forms");
      t.kv("initial_direct", r.closed_forms_initial.direct);
      t.kv("initial_alternative", r.closed_forms_initial.alternative);
      t.kv("final_direct", r.closed_forms_final.direct);
      t.kv("final_alternative", r.closed_forms_final.alternative);
      t.close();
    }
    t.close();
  }

  if (study) {
    t.open("convergence");
    t.kv("window", s.window);
    residual_text(t, study->evolution);
    if (s.kind == WarpKind::Right) residual_text(t, study->evolution_squared_variant);
    residual_text(t, study->commutator);
    residual_text(t, study->dissipation);
    residual_text(t, study->gradient_identity);
    t.close();
  }

  t.open("verdict");
  const auto f = failures();
  t.kv("pass", f.empty());
  t.kv("failures", list(f));
  t.kv("exit_code", exit_code());
  t.close();
  return t.str();
}

// ---------------------------------------------------------------------------

FlowReport run_scenario(const Scenario& s, const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  const WarpedProduct m = s.manifold();
  const DiscreteCurve c0 = s.initial_curve();

  MonitorOptions mopts = s.monitor;
  mopts.evaluate_triples = s.verify_bounds || s.verify_residuals;
  RunMonitor monitor(m, mopts, s.flow.record_stride);
  const FlowRun run = run_flow(m, c0, s.flow, [&](const FlowState& st) { monitor.observe(st); });

  FlowReport rep;
  rep.scenario = s.name;
  rep.summary = run.summary;
  if (s.verify_bounds) {
    rep.bounds = monitor.theta_bounds();
    rep.dissipation = monitor.dissipation();
  }
  if (s.verify_residuals) {
    ResidualSection r;
    r.triples = monitor.triples();
    r.skipped_triples = monitor.skipped_triples();
    r.evolution = monitor.max_evolution_residual();
    if (s.kind == WarpKind::Right) r.evolution_squared_variant = monitor.max_evolution_residual_squared_variant();
    r.commutator = monitor.max_commutator_residual();
    r.gradient_identity = monitor.max_gradient_identity_residual();
    if (s.mode == CurveMode::Graph) {
      r.closed_forms_initial = theta_closed_forms(run.trajectory[0], m);
      r.closed_forms_final = theta_closed_forms(run.trajectory.back(), m);
    }
    rep.residuals = r;
  }
  if (s.verify_convergence) {
    StudySetup setup;
    setup.init = s.init;
    setup.graph = s.graph;
    setup.levels = s.levels;
    setup.window = s.window;
    setup.cfl = s.flow.cfl;
    rep.study = convergence_study(m, setup);
  }

  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());
    write_trajectory_csv(out_dir / "trajectory.csv", run.trajectory);
    const auto rows = monitor.history_with_last();
    write_history_csv(out_dir / "history.csv", rows);
    if (s.svg) {
      write_curves_svg(out_dir / "curves.svg", run.trajectory);
      write_theta_svg(out_dir / "theta.svg", rows);
    }
    std::ofstream out(out_dir / "report.txt", std::ios::binary);
    out << rep.text(s);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + (out_dir / "report.txt").string());
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SuiteResult run_suite(const fs::path& dir, const fs::path& out_dir, int jobs) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".cfg") files.push_back(e.path());
  if (ec) throw Error(ErrorCode::Io, "cannot list " + dir.string() + ": " + ec.message());
  if (files.empty()) throw Error(ErrorCode::InvalidArgument, "no .cfg scenario files in " + dir.string());
  std::sort(files.begin(), files.end());

  SuiteResult res;
  res.entries.resize(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      SuiteEntry& e = res.entries[i];
      e.name = files[i].stem().string();
      try {
        const Scenario s = load_config(files[i]);
        const FlowReport r = run_scenario(s, out_dir / e.name);
        e.exit_code = r.exit_code();
        e.stop = std::string(to_string(r.summary.stop));
        e.failures = r.failures();
      } catch (const Error& err) {
        e.exit_code = kExitUsage;
        e.stop = "-";
        e.error = err.what();
      }
    }
  };
  const int n = std::clamp(jobs, 1, static_cast<int>(files.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::ostringstream sum;
  sum << "scenario exit stop failures\n";
  for (const auto& e : res.entries) {
    res.exit_code = std::max(res.exit_code, e.exit_code);
    sum << e.name << ' ' << e.exit_code << ' ' << e.stop << ' ';
    if (!e.error.empty()) sum << "error: " << e.error;
    else sum << (e.failures.empty() ? std::string("-") : list(e.failures));
    sum << '\n';
  }
  sum << "suite_exit " << res.exit_code << '\n';
  fs::create_directories(out_dir, ec);
  std::ofstream out(out_dir / "summary.txt", std::ios::binary);
  out << sum.str();
  if (!out) throw Error(ErrorCode::Io, "cannot write " + (out_dir / "summary.txt").string());
  return res;
}

}  // namespace wcsf
