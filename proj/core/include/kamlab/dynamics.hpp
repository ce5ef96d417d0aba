#pragma once

#include <Eigen/Dense>

#include "kamlab/chart.hpp"
#include "kamlab/scalar_field.hpp"
#include "kamlab/symplectic_form.hpp"

namespace kamlab {

/// H' = H(I) + eps * H1(I, phi).  The base must be angle- and z-independent,
/// the perturbation z-independent.  First and second derivative fields are
/// built once at construction so repeated evaluation along trajectories stays
/// cheap; eps is carried separately so sweeps rescale without rebuilding.
class HamiltonianSpec {
 public:
  HamiltonianSpec(ScalarField base, ScalarField perturbation, double epsilon);

  const ScalarField& base() const { return base_; }
  const ScalarField& perturbation() const { return perturbation_; }
  double epsilon() const { return epsilon_; }
  void set_epsilon(double eps);

  int k() const { return base_.k(); }
  int zdim() const { return base_.zdim(); }

  double value(const PhasePoint& x) const;
  double dI(const PhasePoint& x, int i) const;
  double dphi(const PhasePoint& x, int i) const;
  /// Gradient in full coordinate order (I, z, phi); z components are exact zeros.
  Eigen::VectorXd gradient(const PhasePoint& x) const;
  /// Hessian restricted to the (I, phi) coordinates, order (I_1..I_k, phi_1..phi_k).
  Eigen::MatrixXd hessian_Iphi(const PhasePoint& x) const;

 private:
  ScalarField base_;
  ScalarField perturbation_;
  double epsilon_;
  std::vector<ScalarField> dbase_;         // first derivatives, coords I then phi
  std::vector<ScalarField> dpert_;
  std::vector<std::vector<ScalarField>> d2base_;  // (2k)x(2k) over (I, phi)
  std::vector<std::vector<ScalarField>> d2pert_;

  int coord_of(int j) const;  // (I, phi)-local index -> global coordinate index
};

/// Hamiltonian vector field of H' with respect to the symplectic form:
/// dI = -dH'/dphi, Z dz = A^T dI + dH'/dz, dphi = dH'/dI - A dz,
/// which is the exact block solve of M v = grad H'.
TangentVector field_omega(const HamiltonianSpec& H, const SymplecticFormSpec& form,
                          const PhasePoint& x);

/// Hamiltonian vector field with respect to the degenerate bivector w:
/// dI = -dH'/dphi, dz = 0 (identically), dphi = dH'/dI.
TangentVector field_w(const HamiltonianSpec& H, const PhasePoint& x);

/// C^{ik}, B^{lambda k} of the perturbed Omega-dynamics at a point:
/// dphi = dH'/dI + C dH'/dphi, dz = B dH'/dphi.  Both vanish exactly when
/// the Iz block vanishes.
struct CBCoefficients {
  Eigen::MatrixXd C;  // k x k
  Eigen::MatrixXd B;  // zdim x k
};
CBCoefficients extract_cb(const SymplecticFormSpec& form, const PhasePoint& x);

/// Closed-form flow of the unperturbed system: I and z fixed, angles advance
/// linearly.  Requires eps == 0.
PhasePoint exact_flow_unperturbed(const HamiltonianSpec& H, const PhasePoint& x0, double t);

}  // namespace kamlab
