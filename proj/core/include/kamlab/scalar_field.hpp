#pragma once

#include <span>
#include <vector>

#include "kamlab/chart.hpp"

namespace kamlab {

/// One term coeff * prod_a I_a^{i_pow_a} * prod_mu z^mu^{z_pow_mu}
///             * cos(wave . phi + phase).
struct FieldTerm {
  double coeff = 0.0;
  std::vector<int> i_pow;  // size k, nonnegative
  std::vector<int> z_pow;  // size zdim, nonnegative
  std::vector<int> wave;   // size k, integer Fourier indices
  double phase = 0.0;
};

/// Trigonometric polynomial in (I, z, phi).  The class is closed under exact
/// differentiation (power rule on I and z, phase shift on phi) and under
/// products (product-to-sum rewriting of the cosine parts), so all calculus
/// on fields stays in closed form.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int k, int zdim, std::vector<FieldTerm> terms);

  static ScalarField constant(int k, int zdim, double c);
  /// Monomial equal to the coordinate with the given global index.
  static ScalarField coordinate(int k, int zdim, int coord);

  int k() const { return k_; }
  int zdim() const { return zdim_; }
  const std::vector<FieldTerm>& terms() const { return terms_; }

  double eval(std::span<const double> I, std::span<const double> z,
              std::span<const double> phi) const;
  double operator()(const PhasePoint& x) const { return eval(x.I, x.z, x.phi); }

  /// Exact partial derivative along the global coordinate index
  /// (0..k-1 actions, k..k+zdim-1 transverse, then angles).
  ScalarField derivative(int coord) const;
  double deriv(const PhasePoint& x, int coord) const;

  ScalarField operator+(const ScalarField& other) const;
  ScalarField operator*(const ScalarField& other) const;
  ScalarField scaled(double c) const;

  /// Partial evaluation at z = z0: z powers collapse into coefficients and
  /// the result has zdim() == 0.
  ScalarField restrict_z(std::span<const double> z0) const;
  /// Reinterpret a zdim() == 0 field on a chart with transverse coordinates
  /// (pullback along the fibration U -> V x T^k).
  ScalarField widen_z(int new_zdim) const;

  bool angle_independent() const;
  bool z_independent() const;
  bool action_independent() const;

 private:
  int k_ = 0;
  int zdim_ = 0;
  std::vector<FieldTerm> terms_;
};

}  // namespace kamlab
