#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kamlab/chart.hpp"
#include "kamlab/dynamics.hpp"
#include "kamlab/integrate.hpp"

namespace kamlab {

struct FrequencyVector {
  std::vector<double> omega;  // radians per unit time, one per angle
};

/// |<m, omega>| >= gamma * |m|_1^{-tau} for all integer m, 0 < |m|_1 <= K_max.
struct DiophantineParams {
  double gamma = 0.01;
  double tau = 2.0;
  int K_max = 20;
};

struct DiophantineResult {
  bool pass = false;
  std::vector<int> worst_m;   // minimizer of |<m, omega>| * |m|_1^tau
  double worst_value = 0.0;   // that minimum; pass iff gamma <= worst_value
};

DiophantineResult diophantine_check(const FrequencyVector& omega, const DiophantineParams& params);

enum class Window { none, hann };

/// Fundamental frequency per angle from the unit-modulus signal
/// exp(i phi_unwrapped(t)): windowed spectrum peak, then correlation
/// refinement to relative tolerance 1e-12.  Needs >= 256 samples on a
/// uniform time grid.
FrequencyVector extract_frequencies(const Trajectory& traj, Window window);

enum class Verdict { torus, resonant, non_torus };
std::string to_string(Verdict v);

struct ClassificationTolerances {
  double tol_torus = 1e-5;  // relative frequency diffusion threshold
  double res_gamma = 1e-3;  // low-order near-resonance width (absolute)
  int res_K = 10;           // |m|_1 cutoff for the resonance test
};

struct OrbitClassification {
  FrequencyVector omega_first_half;
  FrequencyVector omega_second_half;
  double diffusion = 0.0;
  Verdict verdict = Verdict::non_torus;
  std::optional<std::vector<int>> nearest_resonance;
};

/// Integrates the w-flow over [0, T_total], compares the frequencies
/// extracted on the two halves.  Near-resonant orbits are reported as
/// resonant so measure scans do not count resonance lines as torus loss.
OrbitClassification classify_orbit(const HamiltonianSpec& H, const ChartSpec& chart,
                                   const PhasePoint& x0, double T_total,
                                   const IntegratorConfig& cfg,
                                   const ClassificationTolerances& tol);

/// Uniform grid of initial actions; angles and transverse coordinates fixed.
struct GridSpec {
  std::vector<Interval> I_range;  // size k
  std::vector<int> counts;        // size k, each >= 1
  std::vector<double> phi0;       // size k
  std::vector<double> z0;         // size zdim
};

struct OrbitRecord {
  std::vector<double> I0;
  std::vector<double> phi0;
  FrequencyVector omega;  // mean of the two half-window extractions
  double diffusion = 0.0;
  Verdict verdict = Verdict::non_torus;
};

/// Classify every grid point; orbits are independent and distributed over
/// `jobs` workers, results are returned in grid order.
std::vector<OrbitRecord> classify_grid(const HamiltonianSpec& H, const ChartSpec& chart,
                                       const GridSpec& grid, double T_total,
                                       const IntegratorConfig& cfg,
                                       const ClassificationTolerances& tol, int jobs);

struct MeasureScanResult {
  double epsilon = 0.0;
  long grid_size = 0;
  double fraction_torus = 0.0;
  double fraction_resonant = 0.0;
  double fraction_non_torus = 0.0;
};

MeasureScanResult scan_measure(const HamiltonianSpec& H, const ChartSpec& chart, double epsilon,
                               const GridSpec& grid, double T_total, const IntegratorConfig& cfg,
                               const ClassificationTolerances& tol, int jobs);

}  // namespace kamlab
