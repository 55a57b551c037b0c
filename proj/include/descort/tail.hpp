#pragma once

#include "descort/density.hpp"
#include "descort/quadrature.hpp"

namespace descort {

struct TailClass {
  enum class Kind { Compact, ExponentialDecay, PowerLaw };
  Kind kind = Kind::Compact;
  /// Decay rate for ExponentialDecay, 0 otherwise.
  double rate = 0.0;
  /// Tail exponent for PowerLaw, 0 otherwise.
  double exponent = 0.0;
};

struct TailFit {
  /// Power-law exponent (or exponential rate for the semilog fit).
  double exponent_estimate = 0.0;
  double r_squared = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
};

/// Tail of the transform of a density decaying as x^-beta.
///
/// Below alpha_c = (beta-1)/beta the support becomes compact, above it the
/// tail is x^-(beta alpha / (1 - beta (1 - alpha))), and at alpha_c it decays
/// exponentially with rate beta-1 (for a unit tail coefficient; a tail
/// C x^-beta gives (beta-1)/C^(1/beta)). The critical equality is decided in
/// exact rational arithmetic when both arguments are short fractions.
TailClass classify_tail(double beta, double alpha);

double critical_alpha(double beta);

/// Least-squares slope of log rho against log y on 64 geometric points
/// spanning three decades, starting where rho falls below 1e-3 sup(rho).
/// The window moves out a decade at a time while the slopes of its two
/// halves disagree by more than 0.5%.
TailFit estimate_tail_exponent(const Density& d, const QuadratureConfig& cfg = {});

/// Semilog variant: slope of log rho against y; exponent_estimate is the rate.
TailFit estimate_exponential_rate(const Density& d, const QuadratureConfig& cfg = {});

/// Length of the support of the transform, W_{1-alpha}[rho].
double support_length_of_transform(const Density& d, double alpha,
                                   const QuadratureConfig& cfg = {});

}  // namespace descort
