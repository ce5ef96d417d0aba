#include "kamlab/dynamics.hpp"

#include <stdexcept>

namespace kamlab {

HamiltonianSpec::HamiltonianSpec(ScalarField base, ScalarField perturbation, double epsilon)
    : base_(std::move(base)), perturbation_(std::move(perturbation)), epsilon_(epsilon) {
  if (base_.k() != perturbation_.k() || base_.zdim() != perturbation_.zdim())
    throw std::invalid_argument("HamiltonianSpec: base and perturbation dimensions differ");
  if (!base_.angle_independent() || !base_.z_independent())
    throw std::invalid_argument("HamiltonianSpec: base must depend on actions only");
  if (!perturbation_.z_independent())
    throw std::invalid_argument("HamiltonianSpec: perturbation must be z-independent");
  if (epsilon_ < 0.0) throw std::invalid_argument("HamiltonianSpec: epsilon must be >= 0");

  const int k = base_.k();
  dbase_.reserve(2 * k);
  dpert_.reserve(2 * k);
  for (int j = 0; j < 2 * k; ++j) {
    dbase_.push_back(base_.derivative(coord_of(j)));
    dpert_.push_back(perturbation_.derivative(coord_of(j)));
  }
  d2base_.resize(2 * k);
  d2pert_.resize(2 * k);
  for (int a = 0; a < 2 * k; ++a)
    for (int b = 0; b < 2 * k; ++b) {
      d2base_[a].push_back(dbase_[a].derivative(coord_of(b)));
      d2pert_[a].push_back(dpert_[a].derivative(coord_of(b)));
    }
}

int HamiltonianSpec::coord_of(int j) const {
  const int k = base_.k();
  return j < k ? j : base_.zdim() + j;  // skip the z block for angle indices
}

void HamiltonianSpec::set_epsilon(double eps) {
  if (eps < 0.0) throw std::invalid_argument("HamiltonianSpec: epsilon must be >= 0");
  epsilon_ = eps;
}

double HamiltonianSpec::value(const PhasePoint& x) const {
  return base_(x) + epsilon_ * perturbation_(x);
}

double HamiltonianSpec::dI(const PhasePoint& x, int i) const {
  return dbase_[i](x) + epsilon_ * dpert_[i](x);
}

double HamiltonianSpec::dphi(const PhasePoint& x, int i) const {
  const int k = base_.k();
  return dbase_[k + i](x) + epsilon_ * dpert_[k + i](x);
}

Eigen::VectorXd HamiltonianSpec::gradient(const PhasePoint& x) const {
  const int k = base_.k();
  const int m = base_.zdim();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * k + m);
  for (int i = 0; i < k; ++i) {
    g(i) = dI(x, i);
    g(k + m + i) = dphi(x, i);
  }
  return g;
}

Eigen::MatrixXd HamiltonianSpec::hessian_Iphi(const PhasePoint& x) const {
  const int k = base_.k();
  Eigen::MatrixXd H(2 * k, 2 * k);
  for (int a = 0; a < 2 * k; ++a)
    for (int b = 0; b < 2 * k; ++b)
      H(a, b) = d2base_[a][b](x) + epsilon_ * d2pert_[a][b](x);
  return H;
}

TangentVector field_omega(const HamiltonianSpec& H, const SymplecticFormSpec& form,
                          const PhasePoint& x) {
  const ChartSpec& chart = form.chart();
  const int k = chart.k;
  const int m = chart.zdim();
  if (H.k() != k || H.zdim() != m)
    throw std::invalid_argument("field_omega: Hamiltonian and form chart dimensions differ");

  TangentVector v;
  v.dI.resize(k);
  v.dz.assign(m, 0.0);
  v.dphi.resize(k);
  for (int i = 0; i < k; ++i) v.dI[i] = -H.dphi(x, i);

  if (m > 0) {
    const Eigen::MatrixXd Z = form.zz_matrix_at(x);
    const Eigen::MatrixXd A = form.Iz_matrix_at(x);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    // z row of M v = grad H': -A^T v_I + Z v_z = dH'/dz (= 0 for admissible H')
    for (int i = 0; i < k; ++i)
      if (v.dI[i] != 0.0) rhs += A.row(i).transpose() * v.dI[i];
    Eigen::VectorXd vz = Eigen::VectorXd::Zero(m);
    if (!rhs.isZero(0.0)) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(Z);
      if (!lu.isInvertible()) throw std::runtime_error("field_omega: degenerate form at point");
      vz = lu.solve(rhs);
    }
    for (int mu = 0; mu < m; ++mu) v.dz[mu] = vz(mu);
    for (int i = 0; i < k; ++i) v.dphi[i] = H.dI(x, i) - A.row(i).dot(vz);
  } else {
    for (int i = 0; i < k; ++i) v.dphi[i] = H.dI(x, i);
  }
  return v;
}

TangentVector field_w(const HamiltonianSpec& H, const PhasePoint& x) {
  const int k = H.k();
  TangentVector v;
  v.dI.resize(k);
  v.dz.assign(H.zdim(), 0.0);
  v.dphi.resize(k);
  for (int i = 0; i < k; ++i) {
    v.dI[i] = -H.dphi(x, i);
    v.dphi[i] = H.dI(x, i);
  }
  return v;
}

CBCoefficients extract_cb(const SymplecticFormSpec& form, const PhasePoint& x) {
  const int k = form.chart().k;
  const int m = form.chart().zdim();
  CBCoefficients cb;
  cb.C = Eigen::MatrixXd::Zero(k, k);
  cb.B = Eigen::MatrixXd::Zero(m, k);
  if (m == 0) return cb;
  const Eigen::MatrixXd A = form.Iz_matrix_at(x);
  if (A.isZero(0.0)) return cb;  // exact zeros whenever the Iz block vanishes
  Eigen::FullPivLU<Eigen::MatrixXd> lu(form.zz_matrix_at(x));
  if (!lu.isInvertible()) throw std::runtime_error("extract_cb: degenerate form at point");
  // block elimination of M v = grad H': B = -Z^{-1} A^T, C = A Z^{-1} A^T
  cb.B = -lu.solve(A.transpose());
  cb.C = -A * cb.B;
  return cb;
}

PhasePoint exact_flow_unperturbed(const HamiltonianSpec& H, const PhasePoint& x0, double t) {
  if (H.epsilon() != 0.0)
    throw std::invalid_argument("exact_flow_unperturbed: requires epsilon == 0");
  PhasePoint x = x0;
  for (int i = 0; i < H.k(); ++i) x.phi[i] = wrap_angle(x0.phi[i] + t * H.dI(x0, i));
  return x;
}

}  // namespace kamlab
