#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "wcsf/error.hpp"
#include "wcsf/field_expr.hpp"
#include "wcsf/verification.hpp"

using namespace wcsf;

namespace {

WarpedProduct l1() { return WarpedProduct::left(FourierField::exp_cos(0.3), BaseMetric::flat(1)); }
WarpedProduct r1() { return WarpedProduct::right(FourierField::exp_cos(0.2), BaseMetric::flat(1)); }
WarpedProduct product() { return WarpedProduct::left(FourierField::constant(1.0), BaseMetric::flat(1)); }

Trajectory run(const WarpedProduct& m, const char* f, double t_max, int nodes = 64) {
  FlowOptions o;
  o.t_max = t_max;
  o.stop_on_convergence = false;
  return run_flow(m, make_graph_curve(parse_field(f, 1), nodes), o).trajectory;
}

double max_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

TEST_CASE("bound constants") {
  CHECK(left_rate_constant(l1()) == doctest::Approx(0.09).epsilon(1e-9));
  CHECK(left_rate_constant(product()) == 0.0);
  CHECK(right_rate_constant(r1()) == doctest::Approx(0.2).epsilon(1e-9));
  // oracle: max over r of 0.16 sin^2 r + 0.2 |cos r| on a dense grid
  double best = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double r = 2 * oracle::kPi * i / 200000;
    best = std::max(best, 0.16 * std::sin(r) * std::sin(r) + 0.2 * std::abs(std::cos(r)));
  }
  CHECK(best == doctest::Approx(0.2225).epsilon(1e-9));
  CHECK(right_drift_constant(r1()) == doctest::Approx(best).epsilon(1e-6));
  CHECK(left_drift_constant(l1(), 2.0, 0.5) ==
        doctest::Approx(4 * 0.09 * (1 + std::exp(0.6) * std::exp(0.18) / 0.5)).epsilon(1e-9));
  CHECK_THROWS_AS(left_rate_constant(r1()), Error);
  CHECK_THROWS_AS(right_rate_constant(l1()), Error);
}

TEST_CASE("stationary geodesics have vanishing residuals") {
  const Trajectory p = run(product(), "0.3", 0.05);
  REQUIRE(p.size() >= 3);
  CHECK(max_abs(left_evolution_residual(p, product(), 1)) < 1e-12);
  CHECK(commutator_residual(p, product(), 1) < 1e-12);
  CHECK(gradient_identity_residual(p[1], product()) < 1e-12);

  for (double x0 : {0.0, 2.0}) {
    const Trajectory r = run(r1(), x0 == 0.0 ? "0" : "2", 0.05);
    CHECK(max_abs(right_evolution_residual(r, r1(), 1)) < 1e-12);
    CHECK(commutator_residual(r, r1(), 1) < 1e-12);
  }
}

TEST_CASE("constant phi reduces the right residual to the product one") {
  const auto phi = WarpedProduct::right(FourierField::constant(1.0), BaseMetric::flat(1));
  const Trajectory a = run(product(), "0.5*sin", 0.02);
  const Trajectory b = run(phi, "0.5*sin", 0.02);
  const auto ra = left_evolution_residual(a, product(), 2);
  const auto rb = right_evolution_residual(b, phi, 2);
  for (std::size_t j = 0; j < ra.size(); ++j) CHECK(std::abs(ra[j] - rb[j]) < 1e-12);
}

TEST_CASE("residual preconditions") {
  const Trajectory a = run(product(), "0.5*sin", 0.02);
  CHECK_THROWS_AS(left_evolution_residual(a, product(), 0), Error);
  CHECK_THROWS_AS(left_evolution_residual(a, product(), a.size() - 1), Error);
  CHECK_THROWS_AS(right_evolution_residual(a, product(), 1), Error);
}

TEST_CASE("theta derivative undoes the graph gauge") {
  // In the product case with f = 0.5 sin r the graph gauge moves nodes tangentially,
  // so the plain fixed-node quotient misses d theta/dt by about tau T(theta).
  const Trajectory a = run(product(), "0.5*sin", 0.01, 128);
  const std::size_t k = a.size() / 2;
  const auto dth = theta_time_derivative(a[k - 1], a[k], a[k + 1], product());
  const auto lap = arc_laplacian(a[k].geom.theta, a[k].geom);
  double lagrangian = 0.0, fixed = 0.0;
  const double h1 = a[k].t - a[k - 1].t, h2 = a[k + 1].t - a[k].t;
  for (int j = 0; j < a[k].geom.size(); ++j) {
    const double a2 = a[k].geom.curvature_norm[j] * a[k].geom.curvature_norm[j];
    const double rhs = lap[j] + a2 * a[k].geom.theta[j];
    const double naive = (-h2 / (h1 * (h1 + h2))) * a[k - 1].geom.theta[j] + ((h2 - h1) / (h1 * h2)) * a[k].geom.theta[j] +
                         (h1 / (h2 * (h1 + h2))) * a[k + 1].geom.theta[j];
    lagrangian = std::max(lagrangian, std::abs(dth[j] - rhs));
    fixed = std::max(fixed, std::abs(naive - rhs));
  }
  CHECK(lagrangian < 1e-6);
  CHECK(fixed > 1e-2);
}

TEST_CASE("gradient identity and closed forms") {
  const Trajectory l = run(l1(), "0.3*sin", 0.01, 128);
  CHECK(gradient_identity_residual(l.back(), l1()) < 1e-10);
  const Trajectory r = run(r1(), "0.3*sin", 0.01, 128);
  CHECK(gradient_identity_residual(r.back(), r1()) < 1e-10);

  const ClosedFormCheck cl = theta_closed_forms(l[0], l1());
  CHECK(cl.direct < 1e-13);
  CHECK(cl.alternative > 0.1);
  const ClosedFormCheck cr = theta_closed_forms(r[0], r1());
  CHECK(cr.direct < 1e-13);
  CHECK(cr.alternative > 1e-3);
}

TEST_CASE("monitors") {
  const Trajectory l = run(l1(), "0.3*sin", 0.5);
  const ThetaBoundReports b = theta_bound_monitor(l, l1());
  CHECK(b.lower.pass);
  CHECK(b.drift.pass);
  CHECK(b.lower.constant == doctest::Approx(0.09).epsilon(1e-9));
  CHECK(b.lower.samples == static_cast<long>(l.size()));
  CHECK(b.drift.samples > 0);

  const BoundReport d = dissipation_monitor(l, l1());
  CHECK(d.pass);
  CHECK(d.monotone);
  for (std::size_t k = 1; k < l.size(); ++k) CHECK(l[k].geom.length < l[k - 1].geom.length);

  const Trajectory p = run(product(), "0.5*sin", 0.2);
  MonitorOptions exact;
  exact.tolerance = 0.0;
  exact.drift_override = -1.0;  // claims d theta/dt exceeds the right side by 1
  const ThetaBoundReports f = theta_bound_monitor(p, product(), exact);
  CHECK_FALSE(f.drift.pass);
  CHECK(f.drift.worst_slack < -0.5);
  MonitorOptions fast;
  fast.rate_override = -1.0;  // claims theta grows like e^t
  CHECK_FALSE(theta_bound_monitor(p, product(), fast).lower.pass);
}

TEST_CASE("history rows") {
  FlowOptions o;
  o.t_max = 0.05;
  RunMonitor mon(product(), {}, 5);
  long n = 0;
  run_flow(product(), make_graph_curve(parse_field("0.5*sin", 1), 64), o, [&](const FlowState& s) {
    mon.observe(s);
    ++n;
  });
  CHECK(static_cast<long>(mon.history().size()) == (n + 4) / 5);
  CHECK(mon.history_with_last().back().t == 0.05);
  CHECK(mon.triples() + mon.skipped_triples() == n - 2);
}

TEST_CASE("finalize orders") {
  ResidualReport r{"x", {64, 128}, {1e-4, 1e-5}, {}, 1.8, false};
  finalize_orders(r);
  CHECK(r.pass);
  CHECK(r.orders[0] == doctest::Approx(std::log2(10.0)));
  r.max_residual = {1e-4, 0.9e-4};
  finalize_orders(r);
  CHECK_FALSE(r.pass);
  r.max_residual = {1e-14, 3e-14};
  finalize_orders(r);
  CHECK(r.pass);
}

TEST_CASE("refinement study on a short window") {
  StudySetup s;
  s.init = {parse_field("0.3*sin", 1)};
  s.levels = {32, 64, 128};
  s.window = 0.05;
  const StudyResult res = convergence_study(r1(), s);
  CHECK(res.pass());
  for (double o : res.evolution.orders) CHECK(o >= 1.8);
  for (double o : res.commutator.orders) CHECK(o >= 1.5);
  CHECK_FALSE(res.evolution_squared_variant.pass);
}
