#include "kamlab/chart.hpp"

#include <cmath>
#include <stdexcept>

namespace kamlab {

void ChartSpec::validate() const {
  if (k < 1) throw std::invalid_argument("ChartSpec: k must be >= 1");
  if (n < k) throw std::invalid_argument("ChartSpec: n must be >= k");
  if (static_cast<int>(V_box.size()) != k)
    throw std::invalid_argument("ChartSpec: V_box must have k intervals");
  if (static_cast<int>(W_box.size()) != zdim())
    throw std::invalid_argument("ChartSpec: W_box must have 2(n-k) intervals");
  for (const auto& iv : V_box)
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("ChartSpec: empty V_box interval");
  for (const auto& iv : W_box)
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("ChartSpec: empty W_box interval");
}

double wrap_angle(double phi) {
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  // fmod can return exactly two_pi after the correction when phi is a tiny
  // negative number
  if (w >= two_pi) w = 0.0;
  return w;
}

PhasePoint sample_point(const ChartSpec& chart, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  PhasePoint x;
  x.I.resize(chart.k);
  x.z.resize(chart.zdim());
  x.phi.resize(chart.k);
  for (int i = 0; i < chart.k; ++i)
    x.I[i] = chart.V_box[i].lo + u01(rng) * chart.V_box[i].width();
  for (int mu = 0; mu < chart.zdim(); ++mu)
    x.z[mu] = chart.W_box[mu].lo + u01(rng) * chart.W_box[mu].width();
  for (int i = 0; i < chart.k; ++i) x.phi[i] = u01(rng) * two_pi;
  return x;
}

}  // namespace kamlab
