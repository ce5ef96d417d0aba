#include "kamlab/symplectic_form.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kamlab {

SymplecticFormSpec::SymplecticFormSpec(ChartSpec chart,
                                       std::vector<std::vector<ScalarField>> zz_upper,
                                       std::vector<std::vector<ScalarField>> Iz)
    : chart_(std::move(chart)), zz_(std::move(zz_upper)), Iz_(std::move(Iz)) {
  chart_.validate();
  const int m = chart_.zdim();
  const int k = chart_.k;
  if (static_cast<int>(zz_.size()) != m)
    throw std::invalid_argument("SymplecticFormSpec: zz block must be zdim x zdim");
  for (auto& row : zz_)
    if (static_cast<int>(row.size()) != m)
      throw std::invalid_argument("SymplecticFormSpec: zz block must be zdim x zdim");
  if (static_cast<int>(Iz_.size()) != k)
    throw std::invalid_argument("SymplecticFormSpec: Iz block must be k x zdim");
  for (auto& row : Iz_)
    if (static_cast<int>(row.size()) != m)
      throw std::invalid_argument("SymplecticFormSpec: Iz block must be k x zdim");

  auto check_field = [&](const ScalarField& f, const char* what) {
    if (f.k() != k || f.zdim() != m)
      throw std::invalid_argument(std::string("SymplecticFormSpec: ") + what +
                                  " entry has wrong chart dimensions");
    if (!f.angle_independent())
      throw std::invalid_argument(std::string("SymplecticFormSpec: ") + what +
                                  " entry must depend on (I, z) only");
  };
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) check_field(zz_[mu][nu], "zz");
  for (int i = 0; i < k; ++i)
    for (int mu = 0; mu < m; ++mu) {
      check_field(Iz_[i][mu], "Iz");
      for (const auto& t : Iz_[i][mu].terms())
        if (t.coeff != 0.0) iz_zero_ = false;
    }

  // Exact derivative fields along each (I, z) coordinate, built once.
  const int nc = k + m;
  dzz_.assign(m, std::vector<std::vector<ScalarField>>(m));
  dIz_.assign(k, std::vector<std::vector<ScalarField>>(m));
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu + 1; nu < m; ++nu) {
      dzz_[mu][nu].reserve(nc);
      for (int c = 0; c < nc; ++c) dzz_[mu][nu].push_back(zz_[mu][nu].derivative(c));
    }
  for (int i = 0; i < k; ++i)
    for (int mu = 0; mu < m; ++mu) {
      dIz_[i][mu].reserve(nc);
      for (int c = 0; c < nc; ++c) dIz_[i][mu].push_back(Iz_[i][mu].derivative(c));
    }
}

SymplecticFormSpec SymplecticFormSpec::canonical(const ChartSpec& chart) {
  const int m = chart.zdim();
  const int k = chart.k;
  std::vector<std::vector<ScalarField>> zz(
      m, std::vector<ScalarField>(m, ScalarField::constant(k, m, 0.0)));
  for (int l = 0; l + 1 < m; l += 2) zz[l][l + 1] = ScalarField::constant(k, m, 1.0);
  std::vector<std::vector<ScalarField>> iz(
      k, std::vector<ScalarField>(m, ScalarField::constant(k, m, 0.0)));
  return SymplecticFormSpec(chart, std::move(zz), std::move(iz));
}

const ScalarField& SymplecticFormSpec::zz(int mu, int nu) const { return zz_[mu][nu]; }
const ScalarField& SymplecticFormSpec::Iz(int i, int mu) const { return Iz_[i][mu]; }

ScalarField SymplecticFormSpec::entry(int a, int b) const {
  const int k = chart_.k;
  const int m = chart_.zdim();
  if (a > b) return entry(b, a).scaled(-1.0);
  if (a == b) return ScalarField::constant(k, m, 0.0);
  // now a < b, blocks in order I, z, phi
  if (a < k) {
    if (b < k) return ScalarField::constant(k, m, 0.0);
    if (b < k + m) return Iz_[a][b - k];
    return ScalarField::constant(k, m, b - k - m == a ? 1.0 : 0.0);
  }
  if (a < k + m) {
    if (b < k + m) return zz_[a - k][b - k];
    return ScalarField::constant(k, m, 0.0);
  }
  return ScalarField::constant(k, m, 0.0);
}

Eigen::MatrixXd SymplecticFormSpec::matrix_at(const PhasePoint& x) const {
  const int k = chart_.k;
  const int m = chart_.zdim();
  const int d = chart_.dim();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < k; ++i) {
    M(i, k + m + i) = 1.0;
    M(k + m + i, i) = -1.0;
  }
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu + 1; nu < m; ++nu) {
      const double v = zz_[mu][nu](x);
      M(k + mu, k + nu) = v;
      M(k + nu, k + mu) = -v;
    }
  for (int i = 0; i < k; ++i)
    for (int mu = 0; mu < m; ++mu) {
      const double v = Iz_[i][mu](x);
      M(i, k + mu) = v;
      M(k + mu, i) = -v;
    }
  return M;
}

Eigen::MatrixXd SymplecticFormSpec::matrix_deriv_at(const PhasePoint& x, int coord) const {
  const int k = chart_.k;
  const int m = chart_.zdim();
  const int d = chart_.dim();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(d, d);
  if (coord >= k + m) return D;  // entries are angle-independent
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu + 1; nu < m; ++nu) {
      const double v = dzz_[mu][nu][coord](x);
      D(k + mu, k + nu) = v;
      D(k + nu, k + mu) = -v;
    }
  for (int i = 0; i < k; ++i)
    for (int mu = 0; mu < m; ++mu) {
      const double v = dIz_[i][mu][coord](x);
      D(i, k + mu) = v;
      D(k + mu, i) = -v;
    }
  return D;
}

Eigen::MatrixXd SymplecticFormSpec::zz_matrix_at(const PhasePoint& x) const {
  const int m = chart_.zdim();
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(m, m);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu + 1; nu < m; ++nu) {
      const double v = zz_[mu][nu](x);
      Z(mu, nu) = v;
      Z(nu, mu) = -v;
    }
  return Z;
}

Eigen::MatrixXd SymplecticFormSpec::Iz_matrix_at(const PhasePoint& x) const {
  const int k = chart_.k;
  const int m = chart_.zdim();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, m);
  for (int i = 0; i < k; ++i)
    for (int mu = 0; mu < m; ++mu) A(i, mu) = Iz_[i][mu](x);
  return A;
}

FormValidationReport validate_form(const SymplecticFormSpec& form, int sample_count,
                                   std::uint64_t seed) {
  if (sample_count < 1)
    throw std::invalid_argument("validate_form: sample_count must be >= 1");
  const ChartSpec& chart = form.chart();
  const int d = chart.dim();
  const int nc = chart.k + chart.zdim();
  std::mt19937_64 rng(seed);

  FormValidationReport rep;
  rep.worst_closedness_residual = 0.0;
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  for (int s = 0; s < sample_count; ++s) {
    const PhasePoint x = sample_point(chart, rng);
    const Eigen::MatrixXd M = form.matrix_at(x);
    rep.min_abs_det = std::min(rep.min_abs_det, std::abs(M.determinant()));

    std::vector<Eigen::MatrixXd> dM(nc);
    for (int c = 0; c < nc; ++c) dM[c] = form.matrix_deriv_at(x, c);
    auto d_entry = [&](int c, int a, int b) -> double {
      return c < nc ? dM[c](a, b) : 0.0;
    };
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b)
        for (int c = b + 1; c < d; ++c) {
          const double T = d_entry(a, b, c) + d_entry(b, c, a) + d_entry(c, a, b);
          rep.worst_closedness_residual =
              std::max(rep.worst_closedness_residual, std::abs(T));
        }
  }
  rep.closed = rep.worst_closedness_residual <= 1e-10;
  rep.nondegenerate = rep.min_abs_det > 1e-12;
  return rep;
}

double poisson_bracket_w(const ScalarField& f, const ScalarField& g, const PhasePoint& x) {
  if (f.k() != g.k() || f.zdim() != g.zdim())
    throw std::invalid_argument("poisson_bracket_w: field dimension mismatch");
  const int k = f.k();
  const int m = f.zdim();
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    sum += f.deriv(x, i) * g.deriv(x, k + m + i);
    sum -= f.deriv(x, k + m + i) * g.deriv(x, i);
  }
  return sum;
}

Eigen::MatrixXd bivector_matrix(const ChartSpec& chart) {
  const int k = chart.k;
  const int m = chart.zdim();
  const int d = chart.dim();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(d, d);
  // v = W grad H reproduces dI = -dH/dphi, dphi = dH/dI, dz = 0
  for (int i = 0; i < k; ++i) {
    W(i, k + m + i) = -1.0;
    W(k + m + i, i) = 1.0;
  }
  return W;
}

Eigen::MatrixXd recursion_operator_at(const SymplecticFormSpec& form, const PhasePoint& x) {
  const Eigen::MatrixXd M = form.matrix_at(x);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) throw std::runtime_error("recursion_operator_at: degenerate form at point");
  return bivector_matrix(form.chart()) * M;
}

DarbouxReport verify_darboux(const DarbouxCandidate& candidate, const SymplecticFormSpec& form,
                             int sample_count, std::uint64_t seed) {
  const ChartSpec& chart = form.chart();
  const int k = chart.k;
  const int m = chart.zdim();
  const int d = chart.dim();
  const int half = (chart.n - chart.k);
  if (static_cast<int>(candidate.f.size()) != k ||
      static_cast<int>(candidate.p.size()) != half ||
      static_cast<int>(candidate.q.size()) != half)
    throw std::invalid_argument("verify_darboux: candidate has wrong number of fields");
  auto check_field = [&](const ScalarField& g) {
    if (g.k() != k || g.zdim() != m)
      throw std::invalid_argument("verify_darboux: candidate field has wrong chart dimensions");
    if (!g.angle_independent())
      throw std::invalid_argument("verify_darboux: candidate fields must be angle-independent");
  };
  for (const auto& g : candidate.f) check_field(g);
  for (const auto& g : candidate.p) check_field(g);
  for (const auto& g : candidate.q) check_field(g);

  // canonical matrix in the new coordinate order (I, p, q, phi')
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < k; ++i) {
    C(i, k + m + i) = 1.0;
    C(k + m + i, i) = -1.0;
  }
  for (int l = 0; l < half; ++l) {
    C(k + l, k + half + l) = 1.0;
    C(k + half + l, k + l) = -1.0;
  }

  std::mt19937_64 rng(seed);
  DarbouxReport rep;
  rep.worst_residual = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    const PhasePoint x = sample_point(chart, rng);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < k; ++i) J(i, i) = 1.0;
    for (int l = 0; l < half; ++l) {
      for (int c = 0; c < k + m; ++c) {
        J(k + l, c) = candidate.p[l].deriv(x, c);
        J(k + half + l, c) = candidate.q[l].deriv(x, c);
      }
    }
    for (int i = 0; i < k; ++i) {
      for (int c = 0; c < k + m; ++c) J(k + m + i, c) = candidate.f[i].deriv(x, c);
      J(k + m + i, k + m + i) = 1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible()) {
      std::ostringstream os;
      os << "verify_darboux: singular Jacobian at point I=(";
      for (int i = 0; i < k; ++i) os << (i ? "," : "") << x.I[i];
      os << ") z=(";
      for (int mu = 0; mu < m; ++mu) os << (mu ? "," : "") << x.z[mu];
      os << ")";
      throw std::runtime_error(os.str());
    }
    const Eigen::MatrixXd Jinv = lu.inverse();
    const Eigen::MatrixXd Mnew = Jinv.transpose() * form.matrix_at(x) * Jinv;
    rep.worst_residual =
        std::max(rep.worst_residual, (Mnew - C).cwiseAbs().maxCoeff());
  }
  rep.canonical = rep.worst_residual <= 1e-9;
  return rep;
}

}  // namespace kamlab
