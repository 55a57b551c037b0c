#pragma once

#include <array>

#include "descort/density.hpp"
#include "descort/quadrature.hpp"

namespace descort {

struct MeasureReport {
  double q = 2.0;
  double W_q = 1.0;
  double R_q = 0.0;
  double T_q = 0.0;
  double S = 0.0;
  /// Largest quadrature error estimate among the integrals behind the report.
  double error_estimate = 0.0;
};

/// Entropic cumulants K_1..K_4 (cumulants of log rho under rho) together
/// with the raw moments <log^k rho>, k = 1..4.
struct CumulantSet {
  std::array<double, 4> values{};
  std::array<double, 4> log_moments{};
};

/// W_q = int rho^q, +inf when divergent. The result carries the quadrature
/// error (zero for closed forms).
QuadResult entropic_moment_estimate(const Density& d, double q, const QuadratureConfig& cfg = {});
double entropic_moment(const Density& d, double q, const QuadratureConfig& cfg = {});

QuadResult shannon_entropy_estimate(const Density& d, const QuadratureConfig& cfg = {});
double shannon_entropy(const Density& d, const QuadratureConfig& cfg = {});
/// log(W_q)/(1-q); q == 1 is the Shannon entropy.
double renyi_entropy(const Density& d, double q, const QuadratureConfig& cfg = {});
/// (1 - W_q)/(q - 1), which tends to the Shannon entropy as q -> 1.
double tsallis_entropy(const Density& d, double q, const QuadratureConfig& cfg = {});

/// 1 + alpha (q - 1).
double rescale_q(double q, double alpha);

/// C_{p,q} = exp(R_p - R_q), p < q.
double lmc_renyi(const Density& d, double p, double q, const QuadratureConfig& cfg = {});
/// C_{p,inf} = rho_max / W_p^(1/(p-1)); rho_max e^S at p == 1.
double lmc_sup(const Density& d, double p, const QuadratureConfig& cfg = {});

CumulantSet entropic_cumulants(const Density& d, const QuadratureConfig& cfg = {});
/// exp(sum_{n=1}^{n_max-1} K_{n+1} [(q-1)^n - (p-1)^n] / (n+1)!), 1 <= n_max <= 4.
double cumulant_series_complexity(const Density& d, double p, double q, int n_max,
                                  const QuadratureConfig& cfg = {});

/// Infimum of the q with finite W_q. Throws Unsupported when the family has
/// no tail model (tabulated input) or the finite range is bounded above.
double critical_q(const Density& d);

MeasureReport measure_report(const Density& d, double q, const QuadratureConfig& cfg = {});

}  // namespace descort
