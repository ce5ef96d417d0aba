// End-to-end acceptance suite.  Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.
//
// usage: acceptance <kamlab-binary> <configs-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kamlab/analysis.hpp"
#include "kamlab/config.hpp"
#include "kamlab/integrate.hpp"
#include "kamlab/reduction.hpp"

using namespace kamlab;

namespace {

std::string g_binary;
std::string g_configs;
std::string g_workdir;
int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %2d %-28s %s  (%s)\n", idx, name, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

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

// zz pairing dz1^dz2 scaled by c; Iz row given by two fields
SymplecticFormSpec make_form(const ChartSpec& chart, double c, ScalarField a1, ScalarField a2) {
  const int m = chart.zdim();
  std::vector<std::vector<ScalarField>> zz(
      m, std::vector<ScalarField>(m, ScalarField::constant(1, m, 0.0)));
  zz[0][1] = ScalarField::constant(1, m, c);
  std::vector<std::vector<ScalarField>> iz(
      1, std::vector<ScalarField>(m, ScalarField::constant(1, m, 0.0)));
  iz[0][0] = std::move(a1);
  iz[0][1] = std::move(a2);
  return SymplecticFormSpec(chart, std::move(zz), std::move(iz));
}

HamiltonianSpec pendulum(double eps, int zdim) {
  std::vector<int> z0(zdim, 0);
  return HamiltonianSpec(ScalarField(1, zdim, {term(0.5, {2}, z0, {0})}),
                         ScalarField(1, zdim, {term(-1.0, {0}, z0, {1})}), eps);
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd =
      g_binary + " " + args + " >" + g_workdir + "/cli.out 2>" + g_workdir + "/cli.err";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  ChartSpec chart = chart_k1n2();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<SymplecticFormSpec> forms;
  forms.push_back(make_form(chart, 1.0, ScalarField::constant(1, 2, 0.0),
                            ScalarField::constant(1, 2, 0.0)));
  forms.push_back(make_form(chart, 1.3, ScalarField::constant(1, 2, 0.4),
                            ScalarField::constant(1, 2, -0.7)));
  forms.push_back(make_form(chart, 0.8, ScalarField(1, 2, {term(0.3, {1}, {0, 0}, {0})}),
                            ScalarField(1, 2, {term(-0.2, {2}, {0, 0}, {0})})));
  double worst = 0.0;
  for (int h = 0; h < 5; ++h) {
    // random angle-independent H' = polynomial in I
    std::vector<FieldTerm> base, pert;
    for (int t = 0; t < 3; ++t) base.push_back(term(u(rng), {t}, {0, 0}, {0}));
    pert.push_back(term(u(rng), {2}, {0, 0}, {0}));
    HamiltonianSpec H(ScalarField(1, 2, std::move(base)), ScalarField(1, 2, std::move(pert)),
                      std::abs(u(rng)));
    for (const auto& form : forms) {
      for (int s = 0; s < 1000; ++s) {
        const PhasePoint x = sample_point(chart, rng);
        const TangentVector a = field_omega(H, form, x);
        const TangentVector b = field_w(H, x);
        worst = std::max(worst, std::abs(a.dI[0] - b.dI[0]));
        worst = std::max(worst, std::abs(a.dz[0] - b.dz[0]));
        worst = std::max(worst, std::abs(a.dz[1] - b.dz[1]));
        worst = std::max(worst, std::abs(a.dphi[0] - b.dphi[0]));
      }
    }
  }
  const double dt = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "max deviation %.3g <= 1e-10, %.1f s < 10 s", worst, dt);
  report(1, "bi-Hamiltonian coincidence", worst <= 1e-10 && dt < 10.0, buf);
}

void criterion_2() {
  ChartSpec chart = chart_k1n2();
  std::mt19937_64 rng(1002);
  const auto form0 = make_form(chart, 1.3, ScalarField::constant(1, 2, 0.0),
                               ScalarField::constant(1, 2, 0.0));
  bool exact_zero = true;
  for (int s = 0; s < 1000; ++s) {
    const CBCoefficients cb = extract_cb(form0, sample_point(chart, rng));
    if (cb.C.cwiseAbs().maxCoeff() != 0.0 || cb.B.cwiseAbs().maxCoeff() != 0.0)
      exact_zero = false;
  }
  const auto form1 = make_form(chart, 1.3, ScalarField::constant(1, 2, 0.7),
                               ScalarField(1, 2, {term(-0.4, {1}, {0, 0}, {0})}));
  HamiltonianSpec H = pendulum(0.25, 2);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const PhasePoint x = sample_point(chart, rng);
    const CBCoefficients cb = extract_cb(form1, x);
    const TangentVector v = field_omega(H, form1, x);
    const double hI = H.dI(x, 0), hphi = H.dphi(x, 0);
    worst = std::max(worst, std::abs(v.dphi[0] - (hI + cb.C(0, 0) * hphi)));
    worst = std::max(worst, std::abs(v.dz[0] - cb.B(0, 0) * hphi));
    worst = std::max(worst, std::abs(v.dz[1] - cb.B(1, 0) * hphi));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "Iz=0 zeros exact: %s; reconstruction residual %.3g <= 1e-12",
                exact_zero ? "yes" : "no", worst);
  report(2, "C/B vanishing", exact_zero && worst <= 1e-12, buf);
}

void criterion_3() {
  HamiltonianSpec H = pendulum(0.1, 2);
  PhasePoint x0{{0.7}, {0.312, -0.844}, {0.5}};
  IntegratorConfig cfg;
  cfg.step = 0.01;
  cfg.steps = 1000000;
  cfg.record_every = 10000;
  const Trajectory traj = integrate_w(H, x0, cfg);
  bool exact = true;
  for (const PhasePoint& x : traj.points)
    if (x.z[0] != 0.312 || x.z[1] != -0.844) exact = false;
  char buf[128];
  std::snprintf(buf, sizeof buf, "z bit-identical across %ld steps: %s", cfg.steps,
                exact ? "yes" : "no");
  report(3, "structural z-conservation", exact, buf);
}

void criterion_4() {
  ChartSpec chart = chart_k1n2();
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pw(0, 2);
  std::uniform_int_distribution<int> wv(-2, 2);
  auto random_field = [&] {
    std::vector<FieldTerm> terms;
    for (int t = 0; t < 3; ++t) terms.push_back(term(u(rng), {pw(rng)}, {}, {wv(rng)}, u(rng)));
    return ScalarField(1, 0, std::move(terms));
  };
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    const ScalarField f = random_field();
    const ScalarField g = random_field();
    for (int s = 0; s < 100; ++s)
      worst = std::max(worst, bracket_pullback_residual(f, g, sample_point(chart, rng)));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max residual %.3g <= 1e-12 over 100 pairs x 100 points", worst);
  report(4, "bracket pullback identity", worst <= 1e-12, buf);
}

void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  // k = 2, n = 3 coupled rotators, z-independent perturbation
  ChartSpec chart;
  chart.k = 2;
  chart.n = 3;
  chart.V_box = {{0.5, 1.5}, {0.5, 1.5}};
  chart.W_box = {{-1.0, 1.0}, {-1.0, 1.0}};
  std::vector<int> z0(2, 0);
  HamiltonianSpec H(
      ScalarField(2, 2, {term(0.5, {2, 0}, z0, {0, 0}), term(0.5, {0, 2}, z0, {0, 0})}),
      ScalarField(2, 2, {term(1.0, {0, 0}, z0, {1, 0}), term(1.0, {0, 0}, z0, {0, 1}),
                         term(1.0, {0, 0}, z0, {1, 1})}),
      0.05);
  Section section{{0.2, -0.3}};
  const ReducedSystem red = reduce(chart, H, section);

  GridSpec grid_full;
  grid_full.I_range = chart.V_box;
  grid_full.counts = {20, 20};
  grid_full.phi0 = {0.0, 0.0};
  grid_full.z0 = section.z0;
  GridSpec grid_red = grid_full;
  grid_red.z0 = {};

  IntegratorConfig cfg;
  cfg.step = 0.05;
  cfg.record_every = 10;
  ClassificationTolerances tol;
  const auto full = classify_grid(H, chart, grid_full, 2000.0, cfg, tol, 1);
  const auto down = classify_grid(red.hamiltonian, red.chart, grid_red, 2000.0, cfg, tol, 1);

  bool same_verdicts = full.size() == down.size();
  double worst = 0.0;
  for (std::size_t i = 0; same_verdicts && i < full.size(); ++i) {
    if (full[i].verdict != down[i].verdict) same_verdicts = false;
    for (int c = 0; c < 2; ++c)
      worst = std::max(worst, std::abs(full[i].omega.omega[c] - down[i].omega.omega[c]));
  }
  const double dt = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "verdicts identical: %s; max frequency gap %.3g <= 1e-10; %.0f s < 120 s",
                same_verdicts ? "yes" : "no", worst, dt);
  report(5, "lift/transport equivalence", same_verdicts && worst <= 1e-10 && dt < 120.0, buf);
}

void criterion_6() {
  // order-2 convergence on the pendulum, both methods
  HamiltonianSpec H = pendulum(0.3, 0);
  PhasePoint x0{{0.9}, {}, {0.4}};
  IntegratorConfig ref_cfg;
  ref_cfg.step = 1e-5;
  ref_cfg.steps = 100000;
  ref_cfg.record_every = 100000;
  const Trajectory ref = integrate_w(H, x0, ref_cfg);
  bool order_ok = true;
  for (Method method : {Method::splitting2, Method::midpoint}) {
    double errs[3];
    const double hs[3] = {1e-2, 5e-3, 2.5e-3};
    for (int j = 0; j < 3; ++j) {
      IntegratorConfig cfg;
      cfg.method = method;
      cfg.step = hs[j];
      cfg.steps = std::lround(1.0 / hs[j]);
      cfg.record_every = cfg.steps;
      const Trajectory t = integrate_w(H, x0, cfg);
      errs[j] = std::max(std::abs(t.points.back().I[0] - ref.points.back().I[0]),
                         std::abs(t.phi_unwrapped.back()[0] - ref.phi_unwrapped.back()[0]));
    }
    for (int j = 0; j < 2; ++j) {
      const double ratio = errs[j] / errs[j + 1];
      if (ratio < 4.0 / 1.5 || ratio > 4.0 * 1.5) order_ok = false;
    }
  }

  // energy error over 1e6 steps at h = 1e-2, no secular drift
  HamiltonianSpec Hp = pendulum(0.01, 0);
  IntegratorConfig cfg;
  cfg.step = 1e-2;
  cfg.steps = 1000000;
  cfg.record_every = 1000;
  const Trajectory traj = integrate_w(Hp, PhasePoint{{0.35}, {}, {0.0}}, cfg);
  const double E0 = traj.energy.front();
  double first = 0.0, second = 0.0;
  for (std::size_t r = 0; r < traj.size(); ++r) {
    double& slot = r < traj.size() / 2 ? first : second;
    slot = std::max(slot, std::abs(traj.energy[r] - E0));
  }
  const bool energy_ok = second <= 1e-5 && second <= 2.0 * first + 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "order-2 ratios within factor 1.5: %s; energy error %.3g <= 1e-5, drift-free: %s",
                order_ok ? "yes" : "no", second, energy_ok ? "yes" : "no");
  report(6, "integrator quality", order_ok && energy_ok, buf);
}

void criterion_7() {
  // synthetic tone to 1e-7
  const double omega = 0.6180339887;
  Trajectory syn;
  for (long s = 0; s < 4096; ++s) {
    const double t = s * 0.1;
    syn.times.push_back(t);
    syn.phi_unwrapped.push_back({omega * t});
    PhasePoint x;
    x.I = {0.0};
    x.phi = {wrap_angle(omega * t)};
    syn.points.push_back(std::move(x));
    syn.energy.push_back(0.0);
  }
  const double syn_err = std::abs(extract_frequencies(syn, Window::hann).omega[0] - omega);

  // eps = 0 orbit: frequency equals the action
  HamiltonianSpec H = pendulum(0.0, 0);
  IntegratorConfig cfg;
  cfg.step = 0.05;
  cfg.steps = 8192;
  cfg.record_every = 1;
  const Trajectory traj = integrate_w(H, PhasePoint{{0.83}, {}, {0.4}}, cfg);
  const double flow_err = std::abs(extract_frequencies(traj, Window::hann).omega[0] - 0.83);
  char buf[128];
  std::snprintf(buf, sizeof buf, "synthetic error %.3g <= 1e-7; eps=0 error %.3g <= 1e-6",
                syn_err, flow_err);
  report(7, "frequency recovery", syn_err <= 1e-7 && flow_err <= 1e-6, buf);
}

void criterion_8() {
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::uniform_int_distribution<int> kd(1, 3);
  bool agree = true;
  for (int s = 0; s < 50; ++s) {
    const int k = kd(rng);
    FrequencyVector omega;
    for (int i = 0; i < k; ++i) omega.omega.push_back(u(rng));
    DiophantineParams p;
    p.gamma = 0.01;
    p.tau = k + 0.5;
    p.K_max = k == 3 ? 12 : 20;
    const DiophantineResult r = diophantine_check(omega, p);

    // independent enumeration over the full lattice box
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> m(k, -p.K_max);
    while (true) {
      int norm = 0;
      double dot = 0.0;
      for (int i = 0; i < k; ++i) {
        norm += std::abs(m[i]);
        dot += m[i] * omega.omega[i];
      }
      if (norm > 0 && norm <= p.K_max)
        best = std::min(best, std::abs(dot) * std::pow(static_cast<double>(norm), p.tau));
      int i = 0;
      for (; i < k; ++i) {
        if (++m[i] <= p.K_max) break;
        m[i] = -p.K_max;
      }
      if (i == k) break;
    }
    if (std::abs(r.worst_value - best) > 1e-12 * std::max(1.0, best)) agree = false;
    if (r.pass != (best >= p.gamma)) agree = false;
  }

  DiophantineParams p;
  p.gamma = 1e-6;
  p.tau = 2.0;
  p.K_max = 10;
  const DiophantineResult r11 = diophantine_check(FrequencyVector{{1.0, 1.0}}, p);
  const bool res_ok = !r11.pass && r11.worst_value == 0.0 && r11.worst_m.size() == 2 &&
                      std::abs(r11.worst_m[0]) == 1 && r11.worst_m[0] + r11.worst_m[1] == 0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "50 random vectors agree: %s; (1,1) fails via (1,-1): %s",
                agree ? "yes" : "no", res_ok ? "yes" : "no");
  report(8, "diophantine checker", agree && res_ok, buf);
}

void criterion_9() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string out = g_workdir + "/scan.json";
  const int rc = run_cli("scan " + g_configs + "/froeschle.json --eps 0.02,0.05,0.1,0.2" +
                         " --grid 50x50 --jobs 8 --out " + out);
  const double dt = seconds_since(t0);
  bool ok = rc == 0;
  double f_first = -1.0, f_last = -1.0;
  std::string shape = "cli failed";
  if (ok) {
    const nlohmann::json doc = nlohmann::json::parse(slurp(out));
    ok = doc.size() == 4;
    bool monotone = true;
    double prev = -1.0;
    for (const auto& e : doc) {
      const double f = e["fraction_non_torus"].get<double>();
      if (prev >= 0.0 && f < prev - 0.02) monotone = false;
      prev = f;
    }
    f_first = doc[0]["fraction_non_torus"].get<double>();
    f_last = doc[3]["fraction_non_torus"].get<double>();
    ok = ok && monotone && f_first < f_last;
    shape = monotone ? "nondecreasing within 0.02" : "NOT monotone";
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s; f(0.02)=%.4g < f(0.2)=%.4g; %.0f s <= 600 s",
                shape.c_str(), f_first, f_last, dt);
  report(9, "KAM measure trend", ok && dt <= 600.0, buf);
}

void criterion_10() {
  const std::string a = g_workdir + "/det_a.csv";
  const std::string b = g_workdir + "/det_b.csv";
  const std::string c = g_workdir + "/det_c.csv";
  const std::string args = "freqmap " + g_configs + "/froeschle.json --grid 6x6 --phi0 0,0";
  bool ok = run_cli(args + " --jobs 1 --out " + a) == 0;
  ok = ok && run_cli(args + " --jobs 1 --out " + b) == 0;
  ok = ok && run_cli(args + " --jobs 8 --out " + c) == 0;
  const std::string sa = slurp(a);
  ok = ok && !sa.empty() && sa == slurp(b) && sa == slurp(c);

  const std::string f1 = g_workdir + "/det_f1.csv";
  const std::string f2 = g_workdir + "/det_f2.csv";
  const std::string fargs =
      "flow " + g_configs + "/nekhoroshev_iz.json --structure omega --ic '0.5;0.1,-0.2;0.7'";
  ok = ok && run_cli(fargs + " --out " + f1) == 0;
  ok = ok && run_cli(fargs + " --out " + f2) == 0;
  const std::string sf = slurp(f1);
  ok = ok && !sf.empty() && sf == slurp(f2);
  report(10, "determinism", ok,
         ok ? "byte-identical across reruns and --jobs 1/8" : "outputs differ");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <kamlab-binary> <configs-dir>\n");
    return 1;
  }
  g_binary = argv[1];
  g_configs = argv[2];
  char tmpl[] = "/tmp/kamlab_acceptance_XXXXXX";
  if (!mkdtemp(tmpl)) {
    std::perror("mkdtemp");
    return 1;
  }
  g_workdir = tmpl;

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();

  if (std::system(("rm -rf " + g_workdir).c_str()) != 0)
    std::fprintf(stderr, "warning: could not remove %s\n", g_workdir.c_str());
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
