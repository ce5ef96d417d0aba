#include "kamlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace kamlab {

namespace {

using cplx = std::complex<double>;

// Visit one representative of each +-m pair: first nonzero component positive.
void for_each_lattice(int k, int K_max, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> m(k, 0);
  std::function<void(int, int)> rec = [&](int pos, int budget) {
    if (pos == k) {
      bool nonzero = false, leading_positive = false;
      for (int c : m) {
        if (c != 0) {
          nonzero = true;
          leading_positive = c > 0;
          break;
        }
      }
      if (nonzero && leading_positive) fn(m);
      return;
    }
    for (int c = -budget; c <= budget; ++c) {
      m[pos] = c;
      rec(pos + 1, budget - std::abs(c));
    }
    m[pos] = 0;
  };
  rec(0, K_max);
}

void radix2_fft(std::vector<cplx>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -two_pi / static_cast<double>(len);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

double hann_weight(std::size_t j, std::size_t n) {
  return 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(j) / static_cast<double>(n - 1)));
}

// |sum_j w_j s_j exp(-i omega t_j)|^2 for the windowed signal.
double correlation_power(const std::vector<cplx>& ws, const std::vector<double>& t, double omega) {
  cplx acc(0.0, 0.0);
  for (std::size_t j = 0; j < ws.size(); ++j) {
    const double th = -omega * t[j];
    acc += ws[j] * cplx(std::cos(th), std::sin(th));
  }
  return std::norm(acc);
}

double refine_peak(const std::vector<cplx>& ws, const std::vector<double>& t, double lo, double hi) {
  const double gr = 0.61803398874989484820;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = correlation_power(ws, t, x1), f2 = correlation_power(ws, t, x2);
  const double tol = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = correlation_power(ws, t, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = correlation_power(ws, t, x1);
    }
  }
  return 0.5 * (a + b);
}

double extract_single_frequency(const std::vector<double>& times,
                                const std::vector<double>& phi, Window window) {
  const std::size_t n = times.size();
  const double dt = times[1] - times[0];
  std::size_t p = 1;
  while (p * 2 <= n) p *= 2;

  std::vector<cplx> ws(p);
  std::vector<double> t(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double w = window == Window::hann ? hann_weight(j, p) : 1.0;
    ws[j] = w * cplx(std::cos(phi[j]), std::sin(phi[j]));
    t[j] = times[j] - times[0];
  }

  std::vector<cplx> spec = ws;
  radix2_fft(spec);
  std::size_t peak = 0;
  double best = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    const double a = std::norm(spec[j]);
    if (a > best) {
      best = a;
      peak = j;
    }
  }
  const double bin = two_pi / (static_cast<double>(p) * dt);
  double omega0 = bin * static_cast<double>(peak);
  if (peak > p / 2) omega0 -= two_pi / dt;  // fold to (-pi/dt, pi/dt]
  return refine_peak(ws, t, omega0 - 1.5 * bin, omega0 + 1.5 * bin);
}

Trajectory slice_records(const Trajectory& traj, std::size_t begin, std::size_t end) {
  Trajectory s;
  s.times.assign(traj.times.begin() + begin, traj.times.begin() + end);
  s.points.assign(traj.points.begin() + begin, traj.points.begin() + end);
  s.energy.assign(traj.energy.begin() + begin, traj.energy.begin() + end);
  s.phi_unwrapped.assign(traj.phi_unwrapped.begin() + begin, traj.phi_unwrapped.begin() + end);
  return s;
}

struct ResonanceScan {
  double min_abs = 0.0;
  std::vector<int> m;
};

ResonanceScan nearest_resonance(const std::vector<double>& omega, int K_max) {
  ResonanceScan best;
  best.min_abs = std::numeric_limits<double>::infinity();
  const int k = static_cast<int>(omega.size());
  for_each_lattice(k, K_max, [&](const std::vector<int>& m) {
    double dot = 0.0;
    for (int i = 0; i < k; ++i) dot += m[i] * omega[i];
    if (std::abs(dot) < best.min_abs) {
      best.min_abs = std::abs(dot);
      best.m = m;
    }
  });
  return best;
}

}  // namespace

DiophantineResult diophantine_check(const FrequencyVector& omega,
                                    const DiophantineParams& params) {
  const int k = static_cast<int>(omega.omega.size());
  if (k < 1) throw std::invalid_argument("diophantine_check: empty frequency vector");
  if (!(params.gamma > 0.0) || !(params.tau > k - 1) || params.K_max < 1)
    throw std::invalid_argument("diophantine_check: invalid parameters");
  double estimate = 1.0;
  for (int i = 0; i < k; ++i) estimate *= 2.0 * params.K_max + 1.0;
  if (estimate > 5e7)
    throw std::invalid_argument("diophantine_check: lattice too large, about " +
                                std::to_string(static_cast<long long>(estimate)) +
                                " vectors to enumerate");

  DiophantineResult res;
  res.worst_value = std::numeric_limits<double>::infinity();
  for_each_lattice(k, params.K_max, [&](const std::vector<int>& m) {
    double dot = 0.0;
    int norm1 = 0;
    for (int i = 0; i < k; ++i) {
      dot += m[i] * omega.omega[i];
      norm1 += std::abs(m[i]);
    }
    const double value = std::abs(dot) * std::pow(static_cast<double>(norm1), params.tau);
    if (value < res.worst_value) {
      res.worst_value = value;
      res.worst_m = m;
    }
  });
  res.pass = res.worst_value >= params.gamma;
  return res;
}

FrequencyVector extract_frequencies(const Trajectory& traj, Window window) {
  const std::size_t n = traj.size();
  if (n < 256) throw std::invalid_argument("extract_frequencies: need at least 256 samples");
  const double dt = traj.times[1] - traj.times[0];
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double d = traj.times[j + 1] - traj.times[j];
    if (std::abs(d - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw std::invalid_argument("extract_frequencies: non-uniform time grid");
  }
  const int k = static_cast<int>(traj.phi_unwrapped.front().size());
  FrequencyVector out;
  out.omega.resize(k);
  std::vector<double> phi(n);
  for (int i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) phi[j] = traj.phi_unwrapped[j][i];
    out.omega[i] = extract_single_frequency(traj.times, phi, window);
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::torus: return "torus";
    case Verdict::resonant: return "resonant";
    case Verdict::non_torus: return "non_torus";
  }
  return "?";
}

OrbitClassification classify_orbit(const HamiltonianSpec& H, const ChartSpec& chart,
                                   const PhasePoint& x0, double T_total,
                                   const IntegratorConfig& cfg,
                                   const ClassificationTolerances& tol) {
  (void)chart;
  IntegratorConfig run = cfg;
  run.steps = std::max<long>(1, std::lround(T_total / cfg.step));
  const Trajectory traj = integrate_w(H, x0, run);

  const std::size_t half = traj.size() / 2;
  const Trajectory first = slice_records(traj, 0, half);
  const Trajectory second = slice_records(traj, half, 2 * half);

  OrbitClassification c;
  c.omega_first_half = extract_frequencies(first, Window::hann);
  c.omega_second_half = extract_frequencies(second, Window::hann);

  const int k = static_cast<int>(c.omega_first_half.omega.size());
  double diff = 0.0, scale = 0.0;
  std::vector<double> omega_mean(k);
  for (int i = 0; i < k; ++i) {
    diff = std::max(diff, std::abs(c.omega_first_half.omega[i] - c.omega_second_half.omega[i]));
    scale = std::max(scale, std::abs(c.omega_first_half.omega[i]));
    omega_mean[i] = 0.5 * (c.omega_first_half.omega[i] + c.omega_second_half.omega[i]);
  }
  c.diffusion = diff / std::max(scale, std::numeric_limits<double>::min());

  const ResonanceScan res = nearest_resonance(omega_mean, tol.res_K);
  c.nearest_resonance = res.m;
  if (res.min_abs < tol.res_gamma)
    c.verdict = Verdict::resonant;
  else if (c.diffusion < tol.tol_torus)
    c.verdict = Verdict::torus;
  else
    c.verdict = Verdict::non_torus;
  return c;
}

std::vector<OrbitRecord> classify_grid(const HamiltonianSpec& H, const ChartSpec& chart,
                                       const GridSpec& grid, double T_total,
                                       const IntegratorConfig& cfg,
                                       const ClassificationTolerances& tol, int jobs) {
  const int k = chart.k;
  if (static_cast<int>(grid.I_range.size()) != k ||
      static_cast<int>(grid.counts.size()) != k ||
      static_cast<int>(grid.phi0.size()) != k ||
      static_cast<int>(grid.z0.size()) != chart.zdim())
    throw std::invalid_argument("classify_grid: grid dimensions do not match chart");
  long total = 1;
  for (int c : grid.counts) {
    if (c < 1) throw std::invalid_argument("classify_grid: grid counts must be >= 1");
    total *= c;
  }
  for (int i = 0; i < k; ++i)
    if (!chart.V_box[i].contains(grid.I_range[i].lo) ||
        !chart.V_box[i].contains(grid.I_range[i].hi))
      throw std::domain_error("classify_grid: grid outside V_box");

  // cell-centered nodes so every point represents an equal share of the box
  auto point_at = [&](long idx) {
    PhasePoint x;
    x.I.resize(k);
    x.z = grid.z0;
    x.phi = grid.phi0;
    long rem = idx;
    for (int i = k - 1; i >= 0; --i) {
      const long c = rem % grid.counts[i];
      rem /= grid.counts[i];
      x.I[i] = grid.I_range[i].lo +
               (static_cast<double>(c) + 0.5) * grid.I_range[i].width() / grid.counts[i];
    }
    return x;
  };

  std::vector<OrbitRecord> records(total);
  const int workers = static_cast<int>(std::max<long>(1, std::min<long>(jobs, total)));
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&](int w) {
    try {
      for (long idx = w; idx < total; idx += workers) {
        const PhasePoint x0 = point_at(idx);
        const OrbitClassification c = classify_orbit(H, chart, x0, T_total, cfg, tol);
        OrbitRecord& r = records[idx];
        r.I0 = x0.I;
        r.phi0 = x0.phi;
        r.omega.omega.resize(k);
        for (int i = 0; i < k; ++i)
          r.omega.omega[i] =
              0.5 * (c.omega_first_half.omega[i] + c.omega_second_half.omega[i]);
        r.diffusion = c.diffusion;
        r.verdict = c.verdict;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lk(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return records;
}

MeasureScanResult scan_measure(const HamiltonianSpec& H, const ChartSpec& chart, double epsilon,
                               const GridSpec& grid, double T_total, const IntegratorConfig& cfg,
                               const ClassificationTolerances& tol, int jobs) {
  HamiltonianSpec h = H;
  h.set_epsilon(epsilon);
  const auto records = classify_grid(h, chart, grid, T_total, cfg, tol, jobs);
  long n_torus = 0, n_res = 0, n_chaos = 0;
  for (const auto& r : records) {
    switch (r.verdict) {
      case Verdict::torus: ++n_torus; break;
      case Verdict::resonant: ++n_res; break;
      case Verdict::non_torus: ++n_chaos; break;
    }
  }
  MeasureScanResult res;
  res.epsilon = epsilon;
  res.grid_size = static_cast<long>(records.size());
  res.fraction_torus = static_cast<double>(n_torus) / records.size();
  res.fraction_resonant = static_cast<double>(n_res) / records.size();
  res.fraction_non_torus = static_cast<double>(n_chaos) / records.size();
  return res;
}

}  // namespace kamlab
