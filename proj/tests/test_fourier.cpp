#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "wcsf/error.hpp"
#include "wcsf/field_expr.hpp"
#include "wcsf/fourier.hpp"
#include "wcsf/spectral.hpp"

using namespace wcsf;

TEST_CASE("series evaluates with exact derivatives") {
  const double c[] = {1.0, 0.0, 0.25};
  const double s[] = {0.0, 0.5};
  const FourierField f = FourierField::series(c, s);
  for (double x : {0.0, 0.7, 2.1, 5.9}) {
    const FieldJet j = f.jet(x);
    CHECK(j.value == doctest::Approx(1.0 + 0.5 * std::sin(x) + 0.25 * std::cos(2 * x)).epsilon(1e-14));
    CHECK(j.grad(0) == doctest::Approx(0.5 * std::cos(x) - 0.5 * std::sin(2 * x)).epsilon(1e-14));
    CHECK(j.hess(0, 0) == doctest::Approx(-0.5 * std::sin(x) - std::cos(2 * x)).epsilon(1e-14));
  }
}

TEST_CASE("projected exp(0.3 cos x) matches the closed form") {
  const FourierField f = FourierField::exp_cos(0.3);
  for (int i = 0; i < 50; ++i) {
    const double x = oracle::uniform(0.0, 2 * oracle::kPi);
    const FieldJet j = f.jet(x);
    const double psi = oracle::psi_l1(x);
    CHECK(std::abs(j.value - psi) < 1e-14);
    CHECK(std::abs(j.grad(0) + 0.3 * std::sin(x) * psi) < 1e-13);
  }
  CHECK(f.grid_min() == doctest::Approx(std::exp(-0.3)).epsilon(1e-12));
  CHECK(f.grid_max() == doctest::Approx(std::exp(0.3)).epsilon(1e-12));
}

TEST_CASE("two-dimensional modes") {
  const FourierField f = FourierField::from_modes(2, {{{1, -1}, 0.2, 0.0}, {{0, 0}, 1.0, 0.0}, {{-1, 1}, 0.0, 0.1}});
  const double p[] = {0.4, 1.3};
  const FieldJet j = f.jet(p);
  const double th = p[0] - p[1];
  CHECK(j.value == doctest::Approx(1.0 + 0.2 * std::cos(th) - 0.1 * std::sin(th)).epsilon(1e-14));
  CHECK(j.grad(1) == doctest::Approx(0.2 * std::sin(th) + 0.1 * std::cos(th)).epsilon(1e-14));
  CHECK(j.hess(0, 1) == doctest::Approx(0.2 * std::cos(th) - 0.1 * std::sin(th)).epsilon(1e-14));
}

TEST_CASE("spectral derivatives of bandlimited samples are exact") {
  const int m = 64;
  std::vector<double> f(m), d1(m), d2(m);
  for (int j = 0; j < m; ++j) {
    const double u = 2 * oracle::kPi * j / m;
    f[j] = std::sin(3 * u) + 0.2 * std::cos(u);
  }
  spectral::differentiate(f, d1, d2);
  for (int j = 0; j < m; ++j) {
    const double u = 2 * oracle::kPi * j / m;
    CHECK(std::abs(d1[j] - (3 * std::cos(3 * u) - 0.2 * std::sin(u))) < 1e-12);
    CHECK(std::abs(d2[j] - (-9 * std::sin(3 * u) - 0.2 * std::cos(u))) < 1e-11);
  }
}

TEST_CASE("interpolation round trip") {
  const int m = 32;
  std::vector<double> f(m);
  for (int j = 0; j < m; ++j) f[j] = std::cos(2 * oracle::kPi * j / m * 5) + 0.3;
  const auto up = spectral::interpolate(f, 128);
  for (int j = 0; j < 128; ++j) CHECK(std::abs(up[j] - (std::cos(2 * oracle::kPi * j / 128 * 5) + 0.3)) < 1e-13);
  const auto down = spectral::interpolate(up, m);
  for (int j = 0; j < m; ++j) CHECK(std::abs(down[j] - f[j]) < 1e-13);
  const double u[] = {0.123, 4.5};
  const auto v = spectral::evaluate_interpolant(f, u);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(v[i] - oracle::trig_interpolate(f, u[i])) < 1e-12);
}

TEST_CASE("field expressions") {
  SUBCASE("trig polynomials are exact modes") {
    const FourierField f = parse_field("0.5*sin - 0.1*cos(2*r) + 2", 1);
    CHECK(f.bandwidth() == 2);
    CHECK(f.value(1.1) == doctest::Approx(0.5 * std::sin(1.1) - 0.1 * std::cos(2.2) + 2).epsilon(1e-15));
  }
  SUBCASE("implicit products and constants") {
    CHECK(parse_field("3sin(2x)", 1).value(0.3) == doctest::Approx(3 * std::sin(0.6)));
    CHECK(parse_field("2^2 * cos(x) / 4", 1).value(0.3) == doctest::Approx(std::cos(0.3)));
    CHECK(parse_field("pi", 1).value(0.0) == doctest::Approx(oracle::kPi));
  }
  SUBCASE("non-polynomial expressions are projected") {
    const FourierField f = parse_field("exp(0.3*cos(x))", 1);
    CHECK(f.bandwidth() > 2);
    CHECK(std::abs(f.value(2.0) - oracle::psi_l1(2.0)) < 1e-14);
  }
  SUBCASE("two variables") {
    const FourierField f = parse_field("1 + 0.2*cos(x1 - x2)", 2);
    const double p[] = {0.5, 0.2};
    CHECK(f.value(p) == doctest::Approx(1 + 0.2 * std::cos(0.3)));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_field("sin(", 1), Error);
    CHECK_THROWS_AS(parse_field("tan(x)", 1), Error);
    CHECK_THROWS_AS(parse_field("y", 1), Error);
    CHECK_THROWS_AS(parse_field("1 2", 1), Error);
  }
}
