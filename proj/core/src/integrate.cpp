#include "kamlab/integrate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace kamlab {

void IntegratorConfig::validate() const {
  // negative steps are allowed so runs can be played back in reverse
  if (!(step != 0.0) || !std::isfinite(step))
    throw std::invalid_argument("IntegratorConfig: step must be nonzero and finite");
  if (steps < 1) throw std::invalid_argument("IntegratorConfig: steps must be >= 1");
  if (record_every < 1) throw std::invalid_argument("IntegratorConfig: record_every must be >= 1");
  if (!(newton_tol > 0.0)) throw std::invalid_argument("IntegratorConfig: newton_tol must be > 0");
  if (newton_max_iter < 1)
    throw std::invalid_argument("IntegratorConfig: newton_max_iter must be >= 1");
}

namespace {

struct Recorder {
  Trajectory traj;
  const HamiltonianSpec& H;
  int k;

  Recorder(const HamiltonianSpec& h, int kk) : H(h), k(kk) {}

  void record(double t, const std::vector<double>& I, const std::vector<double>& z,
              const std::vector<double>& phiu) {
    PhasePoint x;
    x.I = I;
    x.z = z;
    x.phi.resize(k);
    for (int i = 0; i < k; ++i) x.phi[i] = wrap_angle(phiu[i]);
    traj.times.push_back(t);
    traj.energy.push_back(H.value(x));
    traj.points.push_back(std::move(x));
    traj.phi_unwrapped.push_back(phiu);
  }
};

// Midpoint solve for y1 in y1 = y0 + h F((y0 + y1)/2): fixed point first,
// Newton with the exact Jacobian if it stalls.
template <class EvalF, class EvalJ>
Eigen::VectorXd implicit_midpoint_step(const Eigen::VectorXd& y0, double h, EvalF&& F,
                                       EvalJ&& JF, double tol, int max_iter, long step_index) {
  const int d = static_cast<int>(y0.size());
  Eigen::VectorXd y1 = y0 + h * F(y0);  // explicit Euler predictor
  int used = 0;
  for (; used < 10 && used < max_iter; ++used) {
    Eigen::VectorXd ynew = y0 + h * F(0.5 * (y0 + y1));
    const double delta = (ynew - y1).lpNorm<Eigen::Infinity>();
    y1 = ynew;
    if (delta <= tol) return y1;
  }
  for (; used < max_iter; ++used) {
    const Eigen::VectorXd mid = 0.5 * (y0 + y1);
    const Eigen::VectorXd G = y1 - y0 - h * F(mid);
    const Eigen::MatrixXd Gp = Eigen::MatrixXd::Identity(d, d) - 0.5 * h * JF(mid);
    const Eigen::VectorXd dy = Gp.partialPivLu().solve(G);
    y1 -= dy;
    if (dy.lpNorm<Eigen::Infinity>() <= tol) return y1;
  }
  throw std::runtime_error("implicit midpoint: no convergence at step " +
                           std::to_string(step_index));
}

}  // namespace

Trajectory integrate_w(const HamiltonianSpec& H, const PhasePoint& x0,
                       const IntegratorConfig& cfg) {
  cfg.validate();
  const int k = H.k();
  const double h = cfg.step;

  std::vector<double> I = x0.I;
  std::vector<double> phiu = x0.phi;
  const std::vector<double> z = x0.z;  // never updated: dz = 0 identically

  Recorder rec(H, k);
  PhasePoint scratch{I, z, phiu};
  auto sync = [&] {
    scratch.I = I;
    scratch.phi = phiu;
  };

  rec.record(0.0, I, z, phiu);

  if (cfg.method == Method::splitting2) {
    for (const auto& t : H.perturbation().terms())
      for (int p : t.i_pow)
        if (p != 0)
          throw std::invalid_argument(
              "integrate_w: splitting2 requires a perturbation independent of the actions");
    for (long s = 1; s <= cfg.steps; ++s) {
      sync();
      for (int i = 0; i < k; ++i) I[i] -= 0.5 * h * H.dphi(scratch, i);
      sync();
      for (int i = 0; i < k; ++i) phiu[i] += h * H.dI(scratch, i);
      sync();
      for (int i = 0; i < k; ++i) I[i] -= 0.5 * h * H.dphi(scratch, i);
      if (s % cfg.record_every == 0 || s == cfg.steps) rec.record(s * h, I, z, phiu);
    }
  } else {
    Eigen::VectorXd y(2 * k);
    for (int i = 0; i < k; ++i) {
      y(i) = I[i];
      y(k + i) = phiu[i];
    }
    auto unpack = [&](const Eigen::VectorXd& v) {
      for (int i = 0; i < k; ++i) {
        scratch.I[i] = v(i);
        scratch.phi[i] = v(k + i);
      }
    };
    auto F = [&](const Eigen::VectorXd& v) {
      unpack(v);
      Eigen::VectorXd f(2 * k);
      for (int i = 0; i < k; ++i) {
        f(i) = -H.dphi(scratch, i);
        f(k + i) = H.dI(scratch, i);
      }
      return f;
    };
    auto JF = [&](const Eigen::VectorXd& v) {
      unpack(v);
      const Eigen::MatrixXd hess = H.hessian_Iphi(scratch);
      Eigen::MatrixXd J(2 * k, 2 * k);
      J.topLeftCorner(k, k) = -hess.bottomLeftCorner(k, k);
      J.topRightCorner(k, k) = -hess.bottomRightCorner(k, k);
      J.bottomLeftCorner(k, k) = hess.topLeftCorner(k, k);
      J.bottomRightCorner(k, k) = hess.topRightCorner(k, k);
      return J;
    };
    for (long s = 1; s <= cfg.steps; ++s) {
      y = implicit_midpoint_step(y, h, F, JF, cfg.newton_tol, cfg.newton_max_iter, s);
      if (s % cfg.record_every == 0 || s == cfg.steps) {
        for (int i = 0; i < k; ++i) {
          I[i] = y(i);
          phiu[i] = y(k + i);
        }
        rec.record(s * h, I, z, phiu);
      }
    }
  }
  return rec.traj;
}

Trajectory integrate_omega(const HamiltonianSpec& H, const SymplecticFormSpec& form,
                           const PhasePoint& x0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (cfg.method != Method::midpoint)
    throw std::invalid_argument("integrate_omega: only the midpoint method is supported");
  const ChartSpec& chart = form.chart();
  const int k = chart.k;
  const int m = chart.zdim();
  const int d = chart.dim();
  const double h = cfg.step;

  PhasePoint scratch = x0;
  auto unpack = [&](const Eigen::VectorXd& v) {
    for (int i = 0; i < k; ++i) scratch.I[i] = v(i);
    for (int mu = 0; mu < m; ++mu) scratch.z[mu] = v(k + mu);
    for (int i = 0; i < k; ++i) scratch.phi[i] = v(k + m + i);
  };
  auto F = [&](const Eigen::VectorXd& v) {
    unpack(v);
    const TangentVector t = field_omega(H, form, scratch);
    Eigen::VectorXd f(d);
    for (int i = 0; i < k; ++i) f(i) = t.dI[i];
    for (int mu = 0; mu < m; ++mu) f(k + mu) = t.dz[mu];
    for (int i = 0; i < k; ++i) f(k + m + i) = t.dphi[i];
    return f;
  };
  auto full_hessian = [&]() {
    const Eigen::MatrixXd hk = H.hessian_Iphi(scratch);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d, d);
    hess.topLeftCorner(k, k) = hk.topLeftCorner(k, k);
    hess.topRightCorner(k, k) = hk.topRightCorner(k, k);
    hess.bottomLeftCorner(k, k) = hk.bottomLeftCorner(k, k);
    hess.bottomRightCorner(k, k) = hk.bottomRightCorner(k, k);
    return hess;
  };
  auto JF = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXd f = F(v);  // leaves scratch at v
    const Eigen::MatrixXd M = form.matrix_at(scratch);
    const Eigen::MatrixXd hess = full_hessian();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible())
      throw std::runtime_error("integrate_omega: degenerate form along trajectory");
    Eigen::MatrixXd J(d, d);
    for (int c = 0; c < d; ++c) {
      const Eigen::VectorXd rhs = hess.col(c) - form.matrix_deriv_at(scratch, c) * f;
      J.col(c) = lu.solve(rhs);
    }
    return J;
  };

  Eigen::VectorXd y(d);
  for (int i = 0; i < k; ++i) y(i) = x0.I[i];
  for (int mu = 0; mu < m; ++mu) y(k + mu) = x0.z[mu];
  for (int i = 0; i < k; ++i) y(k + m + i) = x0.phi[i];

  Recorder rec(H, k);
  std::vector<double> I = x0.I, z = x0.z, phiu = x0.phi;
  rec.record(0.0, I, z, phiu);
  for (long s = 1; s <= cfg.steps; ++s) {
    y = implicit_midpoint_step(y, h, F, JF, cfg.newton_tol, cfg.newton_max_iter, s);
    if (s % cfg.record_every == 0 || s == cfg.steps) {
      for (int i = 0; i < k; ++i) I[i] = y(i);
      for (int mu = 0; mu < m; ++mu) z[mu] = y(k + mu);
      for (int i = 0; i < k; ++i) phiu[i] = y(k + m + i);
      rec.record(s * h, I, z, phiu);
    }
  }
  return rec.traj;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  if (traj.points.empty()) return;
  const int k = static_cast<int>(traj.points.front().I.size());
  const int m = static_cast<int>(traj.points.front().z.size());
  os << "t";
  for (int i = 1; i <= k; ++i) os << ",I_" << i;
  for (int mu = 1; mu <= m; ++mu) os << ",z_" << mu;
  for (int i = 1; i <= k; ++i) os << ",phi_" << i;
  os << ",energy\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t r = 0; r < traj.size(); ++r) {
    put(traj.times[r]);
    const PhasePoint& x = traj.points[r];
    for (int i = 0; i < k; ++i) { os << ','; put(x.I[i]); }
    for (int mu = 0; mu < m; ++mu) { os << ','; put(x.z[mu]); }
    for (int i = 0; i < k; ++i) { os << ','; put(x.phi[i]); }
    os << ',';
    put(traj.energy[r]);
    os << '\n';
  }
}

}  // namespace kamlab
