#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kamlab/reduction.hpp"

using namespace kamlab;

namespace {

FieldTerm term(double coeff, std::vector<int> ip, std::vector<int> zp, std::vector<int> w,
               double phase = 0.0) {
  FieldTerm t;
  t.coeff = coeff;
  t.i_pow = std::move(ip);
  t.z_pow = std::move(zp);
  t.wave = std::move(w);
  t.phase = phase;
  return t;
}

ChartSpec chart_k1n2() {
  ChartSpec c;
  c.k = 1;
  c.n = 2;
  c.V_box = {{-2.0, 2.0}};
  c.W_box = {{-1.0, 1.0}, {-1.0, 1.0}};
  return c;
}

HamiltonianSpec pendulum_full(double eps) {
  return HamiltonianSpec(ScalarField(1, 2, {term(0.5, {2}, {0, 0}, {0})}),
                         ScalarField(1, 2, {term(-1.0, {0}, {0, 0}, {1})}), eps);
}

ScalarField random_cylinder_field(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> pw(0, 2);
  std::uniform_int_distribution<int> wv(-2, 2);
  std::vector<FieldTerm> terms;
  for (int t = 0; t < 3; ++t) {
    FieldTerm e;
    e.coeff = coeff(rng);
    for (int i = 0; i < k; ++i) e.i_pow.push_back(pw(rng));
    for (int i = 0; i < k; ++i) e.wave.push_back(wv(rng));
    e.phase = coeff(rng);
    terms.push_back(std::move(e));
  }
  return ScalarField(k, 0, std::move(terms));
}

}  // namespace

TEST_CASE("restrict_to_section folds z values into coefficients") {
  // (I + z1 z2) restricted at z = (0.5, -0.4) -> I - 0.2
  ScalarField f(1, 2, {term(1.0, {1}, {0, 0}, {0}), term(1.0, {0}, {1, 1}, {0})});
  ScalarField r = restrict_to_section(f, Section{{0.5, -0.4}});
  CHECK(r.zdim() == 0);
  PhasePoint x{{1.25}, {}, {0.7}};
  CHECK(r(x) == doctest::Approx(1.25 - 0.2).epsilon(1e-15));
}

TEST_CASE("reduce yields the classical chart with identical Hamiltonian values") {
  ChartSpec chart = chart_k1n2();
  HamiltonianSpec H = pendulum_full(0.2);
  const ReducedSystem red = reduce(chart, H, Section{{0.25, -0.75}});
  CHECK(red.chart.k == 1);
  CHECK(red.chart.n == 1);
  CHECK(red.chart.zdim() == 0);
  CHECK(red.chart.V_box[0].lo == -2.0);
  std::mt19937_64 rng(3);
  for (int s = 0; s < 50; ++s) {
    const PhasePoint x = sample_point(chart, rng);
    PhasePoint y{x.I, {}, x.phi};
    // bit-identical, not merely close: both sides walk the same term list
    CHECK(red.hamiltonian.value(y) == H.value(x));
    CHECK(red.hamiltonian.dI(y, 0) == H.dI(x, 0));
    CHECK(red.hamiltonian.dphi(y, 0) == H.dphi(x, 0));
  }
}

TEST_CASE("reduce rejects sections outside W_box and wrong dimensions") {
  ChartSpec chart = chart_k1n2();
  HamiltonianSpec H = pendulum_full(0.2);
  CHECK_THROWS_AS(reduce(chart, H, Section{{1.5, 0.0}}), std::domain_error);
  CHECK_THROWS_AS(reduce(chart, H, Section{{0.0}}), std::invalid_argument);
}

TEST_CASE("lift_field pads exact zeros in dz") {
  ChartSpec chart = chart_k1n2();
  TangentVector v{{0.3}, {}, {-1.1}};
  const TangentVector lifted = lift_field(v, chart);
  CHECK(lifted.dI[0] == 0.3);
  CHECK(lifted.dphi[0] == -1.1);
  REQUIRE(lifted.dz.size() == 2);
  CHECK(lifted.dz[0] == 0.0);
  CHECK(lifted.dz[1] == 0.0);
  CHECK_THROWS_AS(lift_field(TangentVector{{0.3}, {0.1}, {-1.1}}, chart),
                  std::invalid_argument);
}

TEST_CASE("lifting the reduced field reproduces the w-field upstairs") {
  ChartSpec chart = chart_k1n2();
  HamiltonianSpec H = pendulum_full(0.2);
  const ReducedSystem red = reduce(chart, H, Section{{0.1, 0.2}});
  std::mt19937_64 rng(7);
  for (int s = 0; s < 50; ++s) {
    const PhasePoint x = sample_point(chart, rng);
    PhasePoint y{x.I, {}, x.phi};
    const TangentVector down = field_w(red.hamiltonian, y);
    const TangentVector lifted = lift_field(down, chart);
    const TangentVector up = field_w(H, x);
    CHECK(lifted.dI[0] == up.dI[0]);
    CHECK(lifted.dphi[0] == up.dphi[0]);
    CHECK(lifted.dz[0] == 0.0);
    CHECK(lifted.dz[1] == 0.0);
  }
}

TEST_CASE("bracket pullback residual vanishes to 1e-12 on random pairs") {
  ChartSpec chart = chart_k1n2();
  std::mt19937_64 rng(11);
  for (int s = 0; s < 100; ++s) {
    ScalarField f = random_cylinder_field(1, rng);
    ScalarField g = random_cylinder_field(1, rng);
    const PhasePoint x = sample_point(chart, rng);
    CHECK(bracket_pullback_residual(f, g, x) <= 1e-12);
  }
}

TEST_CASE("bracket pullback rejects z-dependent input") {
  ScalarField f(1, 1, {term(1.0, {0}, {1}, {0})});
  ScalarField g(1, 0, {term(1.0, {1}, {}, {0})});
  PhasePoint x{{0.5}, {0.1}, {0.3}};
  CHECK_THROWS_AS(bracket_pullback_residual(f, g, x), std::invalid_argument);
}

TEST_CASE("torus sets are transported rigidly: z stays put along the flow") {
  // Integrating the w-field keeps z constant by construction; here we verify
  // the field itself, on a dense set, has no transverse component even with
  // a strong perturbation.
  ChartSpec chart = chart_k1n2();
  HamiltonianSpec H = pendulum_full(0.9);
  std::mt19937_64 rng(13);
  for (int s = 0; s < 200; ++s) {
    const TangentVector v = field_w(H, sample_point(chart, rng));
    CHECK(v.dz[0] == 0.0);
    CHECK(v.dz[1] == 0.0);
  }
}
