#pragma once

#include <functional>
#include <span>

namespace descort {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  // Nodes of the cached cumulative grid behind numeric y-maps.
  int cumulative_nodes = 4096;

  void validate() const;

  /// Defaults, with rel_tol overridden by DESCORT_RELTOL when it is set.
  static QuadratureConfig from_environment();
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  bool divergent = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod on a finite interval. No
/// special treatment of the endpoints; intended for smooth panels.
QuadResult gauss_kronrod(const Integrand& f, double a, double b, double abs_tol,
                         double rel_tol, int max_subdivisions);

/// Integral of f over [lo, hi], either end possibly infinite.
///
/// The interval is cut at `breakpoints` (kinks of the integrand). Interior
/// pieces use plain adaptive Gauss-Kronrod. Each outer end is approached
/// through a geometric sequence of panels (halving towards a finite edge,
/// doubling towards infinity); once successive panel ratios settle the
/// remainder is summed as a geometric series. This absorbs integrable
/// endpoint singularities and power-law tails, and a panel ratio that stays
/// at or above one marks the integral as divergent (value = +/-inf).
///
/// `scale` is the length over which f varies appreciably; it sets the width
/// of the first tail panel.
QuadResult integrate(const Integrand& f, double lo, double hi, const QuadratureConfig& cfg,
                     std::span<const double> breakpoints = {}, double scale = 1.0);

}  // namespace descort
