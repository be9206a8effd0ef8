// Acceptance gate: one PASS/FAIL line per criterion, with runtimes.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wcsf/field_expr.hpp"
#include "wcsf/scenario.hpp"

using namespace wcsf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string orders_text(const ResidualReport& r) {
  std::string s = "[";
  for (std::size_t i = 0; i < r.orders.size(); ++i) s += (i ? ", " : "") + fmt("%.2f", r.orders[i]);
  return s + "]";
}

bool orders_at_least(const ResidualReport& r, double q) {
  return !r.orders.empty() && std::all_of(r.orders.begin(), r.orders.end(), [q](double o) { return o >= q; });
}

double circle_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2 * oracle::kPi);
  return std::min(d, 2 * oracle::kPi - d);
}

int run_command(const std::string& cmd) {
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;  // 0: no runtime requirement
  std::function<Outcome()> body;
};

// ---------------------------------------------------------------------------

Outcome structural_identities() {
  Outcome out;
  const BaseMetric pert = BaseMetric::fourier(
      2, {parse_field("1 + 0.2*cos(x1)", 2), parse_field("0.1*sin(x1 + x2)", 2), parse_field("1.5 + 0.3*sin(x2)", 2)});
  auto pert_oracle = [](const Eigen::VectorXd& p) {
    Eigen::MatrixXd b(2, 2);
    const double off = 0.1 * std::sin(p(1) + p(2));
    b << 1.0 + 0.2 * std::cos(p(1)), off, off, 1.5 + 0.3 * std::sin(p(2));
    return b;
  };

  struct Case {
    std::string name;
    WarpedProduct m;
    oracle::Model model;
  };
  std::vector<Case> cases;
  cases.push_back({"left flat", WarpedProduct::left(FourierField::exp_cos(0.3), BaseMetric::flat(1)), oracle::l1_model()});
  cases.push_back({"right flat", WarpedProduct::right(FourierField::exp_cos(0.2), BaseMetric::flat(1)), oracle::r1_model()});
  {
    oracle::Model m = oracle::l1_model();
    m.n = 2;
    m.base = pert_oracle;
    cases.push_back({"left perturbed", WarpedProduct::left(parse_field("exp(0.3*cos(x1))", 2), pert), m});
  }
  {
    oracle::Model m = oracle::r1_model();
    m.n = 2;
    m.base = pert_oracle;
    cases.push_back({"right perturbed", WarpedProduct::right(FourierField::exp_cos(0.2), pert), m});
  }

  double worst_dr = 0.0, worst_conf = 0.0, worst_gamma = 0.0;
  for (const Case& c : cases) {
    const int d = c.m.dim();
    for (int i = 0; i < 1000; ++i) {
      Eigen::VectorXd p(d);
      for (int a = 0; a < d; ++a) p(a) = oracle::uniform(0.0, 2 * oracle::kPi);
      const WarpPoint wp(p(0), std::span<const double>(p.data() + 1, d - 1));
      TangentVec x(d), y(d);
      for (int a = 0; a < d; ++a) x(a) = oracle::uniform(-1, 1), y(a) = oracle::uniform(-1, 1);
      worst_dr = std::max(worst_dr, dr_identity_residual(c.m, wp, x, y));
      if (c.m.kind() == WarpKind::Right) {
        worst_conf = std::max(worst_conf, conformal_residual(c.m, wp, x));
        worst_conf = std::max(worst_conf, conformal_residual(c.m, wp, dr_vector(d)));
      }
      const auto ref = c.model.christoffel(p);
      const ChristoffelTensor got = christoffel_at(c.m, wp);
      for (int a = 0; a < d; ++a) worst_gamma = std::max(worst_gamma, (got.gamma[a] - ref[a]).cwiseAbs().maxCoeff());
    }
  }
  out.require(worst_dr < 1e-10, "d_r identity max " + fmt("%.2e", worst_dr) + " < 1e-10");
  out.require(worst_conf < 1e-10, "conformal max " + fmt("%.2e", worst_conf) + " < 1e-10");
  out.require(worst_gamma < 1e-6, "Christoffel vs FD max " + fmt("%.2e", worst_gamma) + " < 1e-6");
  return out;
}

std::vector<double> lengths_of(const Trajectory& t) {
  std::vector<double> v;
  for (const auto& s : t.states()) v.push_back(s.geom.length);
  return v;
}

std::vector<std::vector<double>> g_extra_length_series;

Outcome symmetry_reduction() {
  Outcome out;
  const WarpedProduct m = WarpedProduct::left(FourierField::exp_cos(0.3), BaseMetric::flat(1));
  const double x0 = 1.0;
  const DiscreteCurve c = make_graph_curve(FourierField::constant(x0), 64);

  FlowOptions o;
  o.t_max = 5.0;
  o.stop_on_convergence = false;
  const FlowRun early = run_flow(m, c, o);
  std::vector<double> steps;
  for (std::size_t k = 1; k < early.trajectory.size(); ++k) steps.push_back(early.trajectory[k].t - early.trajectory[k - 1].t);
  const auto ode = oracle::rk4_scalar([](double x) { return 0.3 * std::sin(x); }, x0, steps);
  double worst = 0.0;
  for (std::size_t k = 1; k < early.trajectory.size(); ++k) {
    const DiscreteCurve& ck = early.trajectory[k].curve;
    for (int j = 0; j < ck.size(); ++j) worst = std::max(worst, std::abs(ck.lifted(1, j) - ode[k - 1]));
  }
  out.require(worst < 1e-8, "max |x_j - x_ode| on [0,5] " + fmt("%.2e", worst) + " < 1e-8");

  o.t_max = 50.0;
  o.record_stride = 1000;
  const FlowRun late = run_flow(m, c, o);
  const double dist = circle_distance(late.summary.limit_point[0], oracle::kPi);
  out.require(late.summary.t_final == 50.0 && dist < 1e-3, "|x(50) - pi| " + fmt("%.2e", dist) + " < 1e-3");
  g_extra_length_series.push_back(lengths_of(early.trajectory));
  g_extra_length_series.push_back(lengths_of(late.trajectory));
  return out;
}

struct ScenarioRun {
  Scenario scenario;
  FlowReport report;
};

std::map<std::string, ScenarioRun> g_runs;
fs::path g_out;

const ScenarioRun& acceptance_run(const std::string& name) {
  if (!g_runs.count(name)) {
    Scenario s = load_config(fs::path(WCSF_SCENARIOS) / "acceptance" / (name + ".cfg"));
    s.verify_bounds = s.verify_residuals = s.verify_convergence = true;
    FlowReport r = run_scenario(s, g_out / name);
    g_runs.emplace(name, ScenarioRun{std::move(s), std::move(r)});
  }
  return g_runs.at(name);
}

Outcome product_case() {
  Outcome out;
  const FlowReport& r = acceptance_run("product").report;
  out.require(r.summary.stop == StopReason::Converged && r.summary.max_curvature < 1e-6 && r.summary.t_final < 50.0,
              "Converged at t=" + fmt("%.2f", r.summary.t_final) + " with max|A| " + fmt("%.1e", r.summary.max_curvature));
  out.require(r.bounds->lower.constant == 0.0 && r.bounds->lower.pass,
              "min theta - min theta(0) >= " + fmt("%.2e", r.bounds->lower.worst_slack));
  out.require(orders_at_least(r.study->evolution, 1.8), "evolution orders " + orders_text(r.study->evolution) + " >= 1.8");
  return out;
}

Outcome left_case() {
  Outcome out;
  const FlowReport& r = acceptance_run("l1").report;
  out.require(!r.summary.graph_loss_flag, "no GraphLoss");
  out.require(std::abs(r.bounds->lower.constant - 0.09) < 1e-9 && r.bounds->lower.pass,
              "C_L=" + fmt("%.6f", r.bounds->lower.constant) + " lower-bound slack " + fmt("%.2e", r.bounds->lower.worst_slack));
  out.require(r.bounds->drift.pass, "drift slack " + fmt("%.3g", r.bounds->drift.worst_slack) + " (C=" +
                                        fmt("%.4g", r.bounds->drift.constant) + ")");
  out.require(r.summary.stop == StopReason::Converged, "stop " + std::string(to_string(r.summary.stop)));
  const double dist = circle_distance(r.summary.limit_point[0], oracle::kPi);
  out.require(dist < 1e-3, "limit x=" + fmt("%.3e", r.summary.limit_point[0]) + ", |x - pi| " + fmt("%.3g", dist) + " < 1e-3");
  return out;
}

Outcome right_case() {
  Outcome out;
  const FlowReport& r = acceptance_run("r1").report;
  out.require(orders_at_least(r.study->evolution, 1.8), "evolution orders " + orders_text(r.study->evolution) + " >= 1.8");
  out.require(std::abs(r.bounds->lower.constant - 0.2) < 1e-9 && r.bounds->lower.pass,
              "C_R=" + fmt("%.6f", r.bounds->lower.constant) + " lower-bound slack " + fmt("%.2e", r.bounds->lower.worst_slack));
  out.require(std::abs(r.bounds->drift.constant - 0.2225) < 1e-6 && r.bounds->drift.pass,
              "C_R(phi)=" + fmt("%.7f", r.bounds->drift.constant) + " drift slack " + fmt("%.3g", r.bounds->drift.worst_slack));
  out.require(r.summary.stop == StopReason::Converged && r.summary.min_theta_hat > 1 - 1e-6,
              "Converged with min theta_hat " + fmt("%.10f", r.summary.min_theta_hat));
  return out;
}

Outcome commutator_orders() {
  Outcome out;
  for (const char* n : {"product", "l1", "r1"}) {
    const ResidualReport& c = acceptance_run(n).report.study->commutator;
    out.require(orders_at_least(c, 1.5), std::string(n) + " " + orders_text(c));
  }
  return out;
}

Outcome dissipation() {
  Outcome out;
  for (const char* n : {"product", "l1", "r1"}) {
    const FlowReport& r = acceptance_run(n).report;
    out.require(orders_at_least(r.study->dissipation, 1.8), std::string(n) + " " + orders_text(r.study->dissipation));
    out.require(r.dissipation->monotone, std::string(n) + " monotone");
  }
  bool mono = true;
  for (const auto& series : g_extra_length_series)
    for (std::size_t k = 1; k < series.size(); ++k) mono = mono && series[k] <= series[k - 1] + 1e-12;
  out.require(mono, "reduction runs monotone");
  return out;
}

Outcome plumbing() {
  Outcome out;
  const std::string cli = WCSF_CLI;
  const fs::path inj = fs::path(WCSF_SCENARIOS) / "injection";
  const fs::path base = g_out / "plumbing";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string quiet = " > /dev/null 2>&1";

  const fs::path cfg = inj / "a_control.cfg";
  const int r1 = run_command(cli + " run " + cfg.string() + " --out " + (base / "det1").string() + quiet);
  const int r2 = run_command(cli + " run " + cfg.string() + " --out " + (base / "det2").string() + quiet);
  bool same = r1 == 0 && r2 == 0;
  int files = 0;
  for (const auto& e : fs::directory_iterator(base / "det1")) {
    ++files;
    same = same && slurp(e.path()) == slurp(base / "det2" / e.path().filename());
  }
  out.require(same && files >= 4, "repeated run byte-identical (" + std::to_string(files) + " files)");

  const int suite = run_command(cli + " suite " + inj.string() + " --jobs 2 --out " + (base / "inj").string() + quiet);
  const std::map<std::string, std::pair<int, std::string>> expected{
      {"a_control", {0, "-"}},
      {"b_exact_tolerance", {1, "[theta_drift_inequality]"}},
      {"c_rate_override", {1, "[theta_lower_bound]"}},
      {"d_drift_override", {1, "[theta_drift_inequality]"}},
      {"e_blowup", {3, "[blowup]"}},
      {"f_graph_loss", {2, "[graph_loss]"}},
  };
  std::istringstream summary(slurp(base / "inj" / "summary.txt"));
  std::string line;
  int matched = 0;
  std::getline(summary, line);
  while (std::getline(summary, line)) {
    std::istringstream ls(line);
    std::string name, stop, failures;
    int code = -1;
    ls >> name >> code >> stop;
    std::getline(ls, failures);
    failures.erase(0, failures.find_first_not_of(' '));
    auto it = expected.find(name);
    if (it != expected.end() && it->second.first == code && it->second.second == failures) ++matched;
  }
  out.require(suite == 3 && matched == static_cast<int>(expected.size()),
              "injection suite exit " + std::to_string(suite) + ", " + std::to_string(matched) + "/6 scenarios as expected");

  fs::create_directories(base / "only_drift");
  fs::copy_file(inj / "d_drift_override.cfg", base / "only_drift" / "d_drift_override.cfg");
  const int one = run_command(cli + " suite " + (base / "only_drift").string() + " --out " + (base / "only_out").string() + quiet);
  const bool named = slurp(base / "only_out" / "summary.txt").find("theta_drift_inequality") != std::string::npos;
  out.require(one == 1 && named, "violated bound suite exit " + std::to_string(one) + " naming the failure");

  fs::create_directories(base / "empty");
  const int empty = run_command(cli + " suite " + (base / "empty").string() + " --out " + (base / "empty_out").string() + quiet);
  out.require(empty == 64, "empty suite exit " + std::to_string(empty));

  std::ofstream(base / "bad.cfg") << "grid.m = 100\n";
  const int bad = run_command(cli + " run " + (base / "bad.cfg").string() + " --out " + (base / "bad_out").string() + quiet);
  out.require(bad == 64, "bad config exit " + std::to_string(bad));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  g_out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::create_directories(g_out);

  const std::vector<Criterion> criteria{
      {1, "structural identities and Christoffel oracle", 5.0, structural_identities},
      {2, "symmetry reduction to x' = 0.3 sin x", 10.0, symmetry_reduction},
      {3, "product case regression", 60.0, product_case},
      {4, "left warped scenario L1", 60.0, left_case},
      {5, "right warped scenario R1", 60.0, right_case},
      {6, "commutator identity orders", 0.0, commutator_orders},
      {7, "length dissipation", 0.0, dissipation},
      {8, "determinism and plumbing", 0.0, plumbing},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0.0) o.require(secs < c.limit_seconds, "runtime < " + fmt("%.0f", c.limit_seconds) + " s");
    if (!o.pass) ++failed;
    std::printf("criterion %d: %s  %s  [%.2f s]  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
