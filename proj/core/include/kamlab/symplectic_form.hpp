#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "kamlab/chart.hpp"
#include "kamlab/scalar_field.hpp"

namespace kamlab {

/// The symplectic form dI_i ^ dphi^i + Omega_{mu nu} dz^mu ^ dz^nu
///                   + Omega^i_mu dI_i ^ dz^mu on the chart.
///
/// zz entries are given as the value matrix Omega(d_{z^mu}, d_{z^nu}) for
/// mu < nu; the assembled matrix is antisymmetric by construction.  All
/// entries must depend on (I, z) only.
class SymplecticFormSpec {
 public:
  /// zz: fields indexed by (mu, nu) with mu < nu; Iz: fields indexed by (i, mu).
  /// Missing entries are zero.
  SymplecticFormSpec(ChartSpec chart,
                     std::vector<std::vector<ScalarField>> zz_upper,
                     std::vector<std::vector<ScalarField>> Iz);

  /// Canonical form on the chart: dI^dphi plus the constant pairing
  /// dz^{2l-1} ^ dz^{2l}, Iz = 0.
  static SymplecticFormSpec canonical(const ChartSpec& chart);

  const ChartSpec& chart() const { return chart_; }
  const ScalarField& zz(int mu, int nu) const;  // mu < nu
  const ScalarField& Iz(int i, int mu) const;
  bool Iz_is_zero() const { return iz_zero_; }

  /// Form entry Omega(d_a, d_b) as an exact ScalarField, global coordinate
  /// order (I, z, phi).
  ScalarField entry(int a, int b) const;

  /// Assembled 2n x 2n antisymmetric matrix at x.
  Eigen::MatrixXd matrix_at(const PhasePoint& x) const;
  /// Exact coordinate derivative of the assembled matrix.
  Eigen::MatrixXd matrix_deriv_at(const PhasePoint& x, int coord) const;

  Eigen::MatrixXd zz_matrix_at(const PhasePoint& x) const;  // zdim x zdim
  Eigen::MatrixXd Iz_matrix_at(const PhasePoint& x) const;  // k x zdim

 private:
  ChartSpec chart_;
  std::vector<std::vector<ScalarField>> zz_;          // upper triangle, mu < nu
  std::vector<std::vector<ScalarField>> Iz_;          // k x zdim
  std::vector<std::vector<std::vector<ScalarField>>> dzz_;  // derivatives by I,z coord
  std::vector<std::vector<std::vector<ScalarField>>> dIz_;
  bool iz_zero_ = true;
};

struct FormValidationReport {
  bool closed = false;
  bool nondegenerate = false;
  double worst_closedness_residual = 0.0;  // max |T_abc| over samples
  double min_abs_det = 0.0;                // over samples
};

/// Sampled validation of closedness (exact derivatives, cyclic sum) and
/// nondegeneracy (determinant).  Thresholds: closed iff max|T| <= 1e-10,
/// nondegenerate iff min|det| > 1e-12.
FormValidationReport validate_form(const SymplecticFormSpec& form, int sample_count,
                                   std::uint64_t seed);

/// Poisson bracket of the degenerate bivector w = d^i ^ d_i:
/// {f,g} = sum_i (df/dI_i dg/dphi_i - df/dphi_i dg/dI_i).
double poisson_bracket_w(const ScalarField& f, const ScalarField& g, const PhasePoint& x);

/// Matrix of w acting on gradients: v_w(H) = W grad H.  Rank 2k, annihilates
/// the z directions.
Eigen::MatrixXd bivector_matrix(const ChartSpec& chart);

/// Recursion operator of the bi-Hamiltonian pair (Omega, w), normalized so
/// that R maps the Omega-Hamiltonian field of any angle-independent H to its
/// w-Hamiltonian field.  Throws on a degenerate form.
Eigen::MatrixXd recursion_operator_at(const SymplecticFormSpec& form, const PhasePoint& x);

/// Candidate Darboux data: new angles phi^i + f^i(I,z) and transverse
/// canonical pairs p_lambda(I,z), q^lambda(I,z).
struct DarbouxCandidate {
  std::vector<ScalarField> f;  // size k
  std::vector<ScalarField> p;  // size n-k
  std::vector<ScalarField> q;  // size n-k
};

struct DarbouxReport {
  bool canonical = false;
  double worst_residual = 0.0;
};

/// Checks J^T M' J = M at sampled points, where M' must be the canonical
/// matrix dI^dphi' + dp^dq in the new coordinate order (I, p, q, phi').
/// Throws on a singular Jacobian, naming the sample point.
DarbouxReport verify_darboux(const DarbouxCandidate& candidate, const SymplecticFormSpec& form,
                             int sample_count, std::uint64_t seed);

}  // namespace kamlab
