#include <benchmark/benchmark.h>

#include <random>

#include "kamlab/analysis.hpp"
#include "kamlab/dynamics.hpp"
#include "kamlab/integrate.hpp"
#include "kamlab/symplectic_form.hpp"

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

SymplecticFormSpec make_form(const ChartSpec& chart, double c, double a1, double a2) {
  const int m = chart.zdim();
  std::vector<std::vector<ScalarField>> zz(
      m, std::vector<ScalarField>(m, ScalarField::constant(1, m, 0.0)));
  zz[0][1] = ScalarField::constant(1, m, c);
  std::vector<std::vector<ScalarField>> iz(
      1, std::vector<ScalarField>(m, ScalarField::constant(1, m, 0.0)));
  iz[0][0] = ScalarField::constant(1, m, a1);
  iz[0][1] = ScalarField::constant(1, m, a2);
  return SymplecticFormSpec(chart, std::move(zz), std::move(iz));
}

HamiltonianSpec froeschle(double eps) {
  std::vector<int> z0;
  return HamiltonianSpec(
      ScalarField(2, 0, {term(0.5, {2, 0}, z0, {0, 0}), term(0.5, {0, 2}, z0, {0, 0})}),
      ScalarField(2, 0, {term(1.0, {0, 0}, z0, {1, 0}), term(1.0, {0, 0}, z0, {0, 1}),
                         term(1.0, {0, 0}, z0, {1, 1})}),
      eps);
}

void BM_field_eval(benchmark::State& state) {
  HamiltonianSpec H = froeschle(0.05);
  PhasePoint x{{0.9, 1.1}, {}, {0.4, 2.2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(H.value(x));
    x.phi[0] += 1e-6;
  }
}
BENCHMARK(BM_field_eval);

void BM_field_gradient(benchmark::State& state) {
  HamiltonianSpec H = froeschle(0.05);
  PhasePoint x{{0.9, 1.1}, {}, {0.4, 2.2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(H.gradient(x));
    x.phi[0] += 1e-6;
  }
}
BENCHMARK(BM_field_gradient);

void BM_field_omega(benchmark::State& state) {
  ChartSpec chart = chart_k1n2();
  const auto form = make_form(chart, 1.3, 0.7, -0.4);
  HamiltonianSpec H(ScalarField(1, 2, {term(0.5, {2}, {0, 0}, {0})}),
                    ScalarField(1, 2, {term(-1.0, {0}, {0, 0}, {1})}), 0.1);
  PhasePoint x{{0.7}, {0.1, -0.2}, {1.1}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(field_omega(H, form, x));
    x.phi[0] += 1e-6;
  }
}
BENCHMARK(BM_field_omega);

void BM_splitting2_step(benchmark::State& state) {
  HamiltonianSpec H = froeschle(0.05);
  PhasePoint x0{{0.9, 1.1}, {}, {0.0, 0.0}};
  IntegratorConfig cfg;
  cfg.step = 0.05;
  cfg.steps = 1000;
  cfg.record_every = cfg.steps;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_w(H, x0, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.steps);
}
BENCHMARK(BM_splitting2_step);

void BM_midpoint_omega_step(benchmark::State& state) {
  ChartSpec chart = chart_k1n2();
  const auto form = make_form(chart, 1.0, 0.3, 0.0);
  HamiltonianSpec H(ScalarField(1, 2, {term(0.5, {2}, {0, 0}, {0})}),
                    ScalarField(1, 2, {term(-1.0, {0}, {0, 0}, {1})}), 0.1);
  PhasePoint x0{{0.7}, {0.1, -0.2}, {1.1}};
  IntegratorConfig cfg;
  cfg.method = Method::midpoint;
  cfg.step = 0.02;
  cfg.steps = 100;
  cfg.record_every = cfg.steps;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_omega(H, form, x0, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.steps);
}
BENCHMARK(BM_midpoint_omega_step);

void BM_extract_frequencies(benchmark::State& state) {
  Trajectory traj;
  const double omega = 0.6180339887;
  for (long s = 0; s < 4096; ++s) {
    const double t = s * 0.1;
    traj.times.push_back(t);
    traj.phi_unwrapped.push_back({omega * t});
    PhasePoint x;
    x.I = {0.0};
    x.phi = {wrap_angle(omega * t)};
    traj.points.push_back(std::move(x));
    traj.energy.push_back(0.0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(extract_frequencies(traj, Window::hann));
}
BENCHMARK(BM_extract_frequencies);

void BM_classify_orbit(benchmark::State& state) {
  HamiltonianSpec H = froeschle(0.05);
  ChartSpec chart;
  chart.k = 2;
  chart.n = 2;
  chart.V_box = {{0.5, 1.5}, {0.5, 1.5}};
  IntegratorConfig cfg;
  cfg.step = 0.05;
  cfg.record_every = 10;
  ClassificationTolerances tol;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        classify_orbit(H, chart, PhasePoint{{0.93, 1.07}, {}, {0.0, 0.0}}, 2000.0, cfg, tol));
}
BENCHMARK(BM_classify_orbit);

void BM_diophantine_check(benchmark::State& state) {
  FrequencyVector omega{{1.0, 1.6180339887}};
  DiophantineParams p;
  p.gamma = 0.01;
  p.tau = 2.0;
  p.K_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(diophantine_check(omega, p));
}
BENCHMARK(BM_diophantine_check)->Arg(10)->Arg(20)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
