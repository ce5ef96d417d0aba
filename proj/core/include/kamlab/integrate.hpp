#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kamlab/chart.hpp"
#include "kamlab/dynamics.hpp"
#include "kamlab/symplectic_form.hpp"

namespace kamlab {

enum class Method { splitting2, midpoint };

struct IntegratorConfig {
  Method method = Method::splitting2;
  double step = 1e-2;
  long steps = 1000;
  double newton_tol = 1e-13;
  int newton_max_iter = 50;
  long record_every = 1;

  void validate() const;  // throws on nonpositive step / counts
};

/// Time-stamped orbit.  Angles in points are wrapped to [0, 2pi);
/// phi_unwrapped keeps the continuous angle history used by frequency
/// analysis.
struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::vector<double> energy;                      // H' per recorded point
  std::vector<std::vector<double>> phi_unwrapped;  // per recorded point, size k

  std::size_t size() const { return times.size(); }
};

/// Integrate the w-flow dI = -dH'/dphi, dz = 0, dphi = dH'/dI.  z is copied
/// verbatim into every output point.  splitting2 requires H' separable as
/// H(I) + eps H1(phi); midpoint accepts any H'(I, phi).
Trajectory integrate_w(const HamiltonianSpec& H, const PhasePoint& x0,
                       const IntegratorConfig& cfg);

/// Implicit midpoint on the full Omega-dynamics M(x) v = grad H'.
Trajectory integrate_omega(const HamiltonianSpec& H, const SymplecticFormSpec& form,
                           const PhasePoint& x0, const IntegratorConfig& cfg);

/// CSV header t,I_1..I_k,z_1..z_m,phi_1..phi_k,energy; 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace kamlab
