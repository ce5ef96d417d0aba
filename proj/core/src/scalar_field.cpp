#include "kamlab/scalar_field.hpp"

#include <cmath>
#include <stdexcept>

namespace kamlab {

namespace {
constexpr double half_pi = 1.5707963267948966192313216916398;

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}
}  // namespace

ScalarField::ScalarField(int k, int zdim, std::vector<FieldTerm> terms)
    : k_(k), zdim_(zdim), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (static_cast<int>(t.i_pow.size()) != k_ ||
        static_cast<int>(t.z_pow.size()) != zdim_ ||
        static_cast<int>(t.wave.size()) != k_)
      throw std::invalid_argument("ScalarField: term vector lengths do not match chart dimensions");
    for (int p : t.i_pow)
      if (p < 0) throw std::invalid_argument("ScalarField: negative I exponent");
    for (int p : t.z_pow)
      if (p < 0) throw std::invalid_argument("ScalarField: negative z exponent");
  }
}

ScalarField ScalarField::constant(int k, int zdim, double c) {
  FieldTerm t;
  t.coeff = c;
  t.i_pow.assign(k, 0);
  t.z_pow.assign(zdim, 0);
  t.wave.assign(k, 0);
  return ScalarField(k, zdim, {t});
}

ScalarField ScalarField::coordinate(int k, int zdim, int coord) {
  if (coord < 0 || coord >= 2 * k + zdim)
    throw std::out_of_range("ScalarField::coordinate: index out of range");
  if (coord >= k + zdim)
    throw std::invalid_argument("ScalarField::coordinate: angles are not trig polynomials");
  FieldTerm t;
  t.coeff = 1.0;
  t.i_pow.assign(k, 0);
  t.z_pow.assign(zdim, 0);
  t.wave.assign(k, 0);
  if (coord < k)
    t.i_pow[coord] = 1;
  else
    t.z_pow[coord - k] = 1;
  return ScalarField(k, zdim, {t});
}

double ScalarField::eval(std::span<const double> I, std::span<const double> z,
                         std::span<const double> phi) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int a = 0; a < k_; ++a)
      if (t.i_pow[a] != 0) v *= ipow(I[a], t.i_pow[a]);
    for (int mu = 0; mu < zdim_; ++mu)
      if (t.z_pow[mu] != 0) v *= ipow(z[mu], t.z_pow[mu]);
    bool has_wave = false;
    double theta = t.phase;
    for (int a = 0; a < k_; ++a) {
      if (t.wave[a] != 0) {
        has_wave = true;
        theta += t.wave[a] * phi[a];
      }
    }
    if (has_wave || t.phase != 0.0) v *= std::cos(theta);
    sum += v;
  }
  return sum;
}

ScalarField ScalarField::derivative(int coord) const {
  if (coord < 0 || coord >= 2 * k_ + zdim_)
    throw std::out_of_range("ScalarField::derivative: coordinate index out of range");
  std::vector<FieldTerm> out;
  out.reserve(terms_.size());
  if (coord < k_) {
    const int a = coord;
    for (const auto& t : terms_) {
      if (t.i_pow[a] == 0) continue;
      FieldTerm d = t;
      d.coeff *= t.i_pow[a];
      d.i_pow[a] -= 1;
      out.push_back(std::move(d));
    }
  } else if (coord < k_ + zdim_) {
    const int mu = coord - k_;
    for (const auto& t : terms_) {
      if (t.z_pow[mu] == 0) continue;
      FieldTerm d = t;
      d.coeff *= t.z_pow[mu];
      d.z_pow[mu] -= 1;
      out.push_back(std::move(d));
    }
  } else {
    // d/dphi_a cos(m.phi + chi) = -m_a sin(m.phi + chi) = m_a cos(m.phi + chi + pi/2)
    const int a = coord - k_ - zdim_;
    for (const auto& t : terms_) {
      if (t.wave[a] == 0) continue;
      FieldTerm d = t;
      d.coeff *= t.wave[a];
      d.phase += half_pi;
      out.push_back(std::move(d));
    }
  }
  return ScalarField(k_, zdim_, std::move(out));
}

double ScalarField::deriv(const PhasePoint& x, int coord) const {
  return derivative(coord).eval(x.I, x.z, x.phi);
}

ScalarField ScalarField::operator+(const ScalarField& other) const {
  if (k_ != other.k_ || zdim_ != other.zdim_)
    throw std::invalid_argument("ScalarField: dimension mismatch in sum");
  std::vector<FieldTerm> out = terms_;
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return ScalarField(k_, zdim_, std::move(out));
}

ScalarField ScalarField::operator*(const ScalarField& other) const {
  if (k_ != other.k_ || zdim_ != other.zdim_)
    throw std::invalid_argument("ScalarField: dimension mismatch in product");
  // cos A cos B = (cos(A-B) + cos(A+B)) / 2
  std::vector<FieldTerm> out;
  out.reserve(2 * terms_.size() * other.terms_.size());
  for (const auto& s : terms_) {
    for (const auto& t : other.terms_) {
      FieldTerm base;
      base.coeff = 0.5 * s.coeff * t.coeff;
      base.i_pow.resize(k_);
      base.z_pow.resize(zdim_);
      base.wave.resize(k_);
      for (int a = 0; a < k_; ++a) base.i_pow[a] = s.i_pow[a] + t.i_pow[a];
      for (int mu = 0; mu < zdim_; ++mu) base.z_pow[mu] = s.z_pow[mu] + t.z_pow[mu];
      FieldTerm diff = base, sum = base;
      for (int a = 0; a < k_; ++a) {
        diff.wave[a] = s.wave[a] - t.wave[a];
        sum.wave[a] = s.wave[a] + t.wave[a];
      }
      diff.phase = s.phase - t.phase;
      sum.phase = s.phase + t.phase;
      out.push_back(std::move(diff));
      out.push_back(std::move(sum));
    }
  }
  return ScalarField(k_, zdim_, std::move(out));
}

ScalarField ScalarField::scaled(double c) const {
  std::vector<FieldTerm> out = terms_;
  for (auto& t : out) t.coeff *= c;
  return ScalarField(k_, zdim_, std::move(out));
}

ScalarField ScalarField::restrict_z(std::span<const double> z0) const {
  if (static_cast<int>(z0.size()) != zdim_)
    throw std::invalid_argument("ScalarField::restrict_z: section dimension mismatch");
  std::vector<FieldTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    FieldTerm r;
    r.coeff = t.coeff;
    for (int mu = 0; mu < zdim_; ++mu) r.coeff *= ipow(z0[mu], t.z_pow[mu]);
    r.i_pow = t.i_pow;
    r.z_pow.clear();
    r.wave = t.wave;
    r.phase = t.phase;
    out.push_back(std::move(r));
  }
  return ScalarField(k_, 0, std::move(out));
}

ScalarField ScalarField::widen_z(int new_zdim) const {
  if (zdim_ != 0)
    throw std::invalid_argument("ScalarField::widen_z: field already has transverse coordinates");
  std::vector<FieldTerm> out = terms_;
  for (auto& t : out) t.z_pow.assign(new_zdim, 0);
  return ScalarField(k_, new_zdim, std::move(out));
}

bool ScalarField::angle_independent() const {
  for (const auto& t : terms_)
    for (int w : t.wave)
      if (w != 0) return false;
  return true;
}

bool ScalarField::z_independent() const {
  for (const auto& t : terms_)
    for (int p : t.z_pow)
      if (p != 0) return false;
  return true;
}

bool ScalarField::action_independent() const {
  for (const auto& t : terms_)
    for (int p : t.i_pow)
      if (p != 0) return false;
  return true;
}

}  // namespace kamlab
