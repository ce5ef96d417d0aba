#include "kamlab/reduction.hpp"

#include <cmath>
#include <stdexcept>

namespace kamlab {

ScalarField restrict_to_section(const ScalarField& f, const Section& section) {
  return f.restrict_z(section.z0);
}

ReducedSystem reduce(const ChartSpec& chart, const HamiltonianSpec& H, const Section& section) {
  if (static_cast<int>(section.z0.size()) != chart.zdim())
    throw std::invalid_argument("reduce: section dimension mismatch");
  for (int mu = 0; mu < chart.zdim(); ++mu)
    if (!chart.W_box[mu].contains(section.z0[mu]))
      throw std::domain_error("reduce: section outside W_box");

  ChartSpec reduced;
  reduced.k = chart.k;
  reduced.n = chart.k;
  reduced.V_box = chart.V_box;
  reduced.validate();
  // H' is z-independent, so the restriction is the identity on its terms
  HamiltonianSpec h(restrict_to_section(H.base(), section),
                    restrict_to_section(H.perturbation(), section), H.epsilon());
  return ReducedSystem{std::move(reduced), std::move(h)};
}

TangentVector lift_field(const TangentVector& v_reduced, const ChartSpec& full_chart) {
  if (static_cast<int>(v_reduced.dI.size()) != full_chart.k ||
      static_cast<int>(v_reduced.dphi.size()) != full_chart.k)
    throw std::invalid_argument("lift_field: dimension mismatch");
  if (!v_reduced.dz.empty())
    throw std::invalid_argument("lift_field: input must live on the cylinder");
  TangentVector v;
  v.dI = v_reduced.dI;
  v.dz.assign(full_chart.zdim(), 0.0);
  v.dphi = v_reduced.dphi;
  return v;
}

double bracket_pullback_residual(const ScalarField& f, const ScalarField& g, const PhasePoint& x) {
  if (f.zdim() != 0 || g.zdim() != 0)
    throw std::invalid_argument("bracket_pullback_residual: inputs must have no z dependence");
  if (f.k() != g.k())
    throw std::invalid_argument("bracket_pullback_residual: field dimension mismatch");
  const int k = f.k();
  const int m = static_cast<int>(x.z.size());

  // upstairs: bracket of the pullbacks under w on U
  const double up = poisson_bracket_w(f.widen_z(m), g.widen_z(m), x);

  // downstairs: canonical bracket on the cylinder, evaluated directly
  PhasePoint y{x.I, {}, x.phi};
  double down = 0.0;
  for (int i = 0; i < k; ++i) {
    down += f.deriv(y, i) * g.deriv(y, k + i);
    down -= f.deriv(y, k + i) * g.deriv(y, i);
  }
  return std::abs(up - down);
}

}  // namespace kamlab
