#pragma once

#include <string>
#include <vector>

#include "descort/density.hpp"
#include "descort/quadrature.hpp"

namespace descort {

/// Three unit-mass steps of width 1/3 with heights 3/2, 1, 1/2.
Density three_step_density();

struct PublishedCheck {
  std::string name;
  double computed = 0.0;
  double expected = 0.0;
  /// Human-readable acceptance rule, e.g. "abs 5e-05".
  std::string rule;
  bool pass = false;
};

/// True when `value` rounded or truncated to `significant` digits equals the
/// quoted figure. Published approximations are sometimes truncated.
bool matches_quoted(double value, double quoted, int significant);

/// LMC complexity C_{1,2} of the three-step density along the published
/// alpha values, plus the step geometry at alpha = 10 and alpha = 100.
std::vector<PublishedCheck> reproduce_example(const QuadratureConfig& cfg = {});

}  // namespace descort
