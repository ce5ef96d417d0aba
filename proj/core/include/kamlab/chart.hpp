#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace kamlab {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Chart of partial action-angle coordinates (I_1..I_k, z^1..z^{2(n-k)},
/// phi^1..phi^k) on V x W x T^k.  Angles live in [0, 2pi); actions in V_box,
/// transverse coordinates in W_box.  k = n is the classical chart with no z.
struct ChartSpec {
  int k = 1;
  int n = 1;
  std::vector<Interval> V_box;  // size k
  std::vector<Interval> W_box;  // size 2(n-k)

  int zdim() const { return 2 * (n - k); }
  int dim() const { return 2 * n; }

  // Global coordinate order: I block, z block, phi block.
  int index_I(int i) const { return i; }
  int index_z(int mu) const { return k + mu; }
  int index_phi(int i) const { return k + zdim() + i; }

  /// Throws std::invalid_argument on inconsistent dimensions or empty boxes.
  void validate() const;
};

struct PhasePoint {
  std::vector<double> I;
  std::vector<double> z;
  std::vector<double> phi;
};

struct TangentVector {
  std::vector<double> dI;
  std::vector<double> dz;
  std::vector<double> dphi;
};

/// Constant-z section of the fibration U -> V x T^k.
struct Section {
  std::vector<double> z0;
};

/// Reduce an angle to [0, 2pi).
double wrap_angle(double phi);

/// Uniform sample of the chart domain (angles uniform on [0, 2pi)).
PhasePoint sample_point(const ChartSpec& chart, std::mt19937_64& rng);

}  // namespace kamlab
