#pragma once

#include <optional>
#include <string>

#include "descort/density.hpp"
#include "descort/quadrature.hpp"
#include "descort/ymap.hpp"

namespace descort {

struct TransformOptions {
  /// Fixed point of the y-map; defaults to the left support edge, or 0.
  std::optional<double> anchor;
  /// Skip the closed-form rules (used to cross-check the numeric path).
  bool force_numeric = false;
};

struct Provenance {
  std::string source_kind;
  double alpha = 1.0;
  double anchor = 0.0;
};

struct TransformedDensity {
  Density base;
  Provenance provenance;
  /// q-exponential results with q > 2, reached only for negative alpha.
  bool beyond_standard_range = false;
};

/// Differential-escort transform rho_alpha(y) = rho(x(y))^alpha.
///
/// Closed rules: uniform, piecewise-constant, exponential and q-exponential
/// inputs map into those same families. Everything else is backed by a
/// numeric y-map. alpha == 0 gives the unit-width uniform split p-/p+ around
/// the anchor.
TransformedDensity transform(const Density& d, double alpha, const QuadratureConfig& cfg = {},
                             const TransformOptions& opts = {});

/// Applies the transform with 1/alpha and the recorded anchor.
Density inverse_transform(const TransformedDensity& td, const QuadratureConfig& cfg = {});

/// rho^q / W_q[rho]. Throws DivergentMoment when W_q is infinite.
Density standard_escort(const Density& d, double q, const QuadratureConfig& cfg = {});

/// a * rho(a x).
Density scaled(const Density& d, double a);

}  // namespace descort
