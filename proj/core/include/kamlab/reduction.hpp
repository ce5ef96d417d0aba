#pragma once

#include "kamlab/chart.hpp"
#include "kamlab/dynamics.hpp"
#include "kamlab/scalar_field.hpp"

namespace kamlab {

/// Completely integrable system on the toroidal cylinder V x T^k, carrying
/// the canonical form dI ^ dphi (implicit).
struct ReducedSystem {
  ChartSpec chart;  // k == n, no transverse coordinates
  HamiltonianSpec hamiltonian;
};

/// Partial evaluation of a field on the section z = z0 (term-list collapse,
/// the result is again an exact field with no z coordinates).
ScalarField restrict_to_section(const ScalarField& f, const Section& section);

/// Reduce along the constant-z section.  Throws std::domain_error if the
/// section leaves W_box.
ReducedSystem reduce(const ChartSpec& chart, const HamiltonianSpec& H, const Section& section);

/// Lift a reduced tangent vector to the full chart: dI and dphi copied,
/// dz identically zero.
TangentVector lift_field(const TangentVector& v_reduced, const ChartSpec& full_chart);

/// |{pullback f, pullback g}_w(x) - {f, g}'(I(x), phi(x))| where {,}' is the
/// canonical bracket on the cylinder.  Inputs must have no z dependence.
double bracket_pullback_residual(const ScalarField& f, const ScalarField& g, const PhasePoint& x);

}  // namespace kamlab
