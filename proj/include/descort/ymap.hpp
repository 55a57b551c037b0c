#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "descort/density.hpp"
#include "descort/quadrature.hpp"

namespace descort {

/// The monotone change of variables y(x) = x0 + int_{x0}^{x} rho^(1-alpha)
/// behind the differential-escort transform, with its inverse.
///
/// Uniform, piecewise-constant and exponential sources use exact maps. Other
/// sources use a cumulative table over a grid clustered at the support
/// edges (geometric out to 1e300 on infinite sides); forward() refines from
/// the nearest node with Gauss-Kronrod and inverse() brackets on the table
/// and polishes with safeguarded Newton steps.
class YMap {
 public:
  const Density& source() const { return *source_; }
  double alpha() const { return alpha_; }
  double anchor() const { return anchor_; }
  const Support& target_support() const { return target_; }
  bool numeric() const { return std::holds_alternative<Numeric>(impl_); }

  /// y(x) for x in the closure of the source support (clamped). Infinite x
  /// throws DivergentMap: the image of an infinite edge is reported by
  /// target_support().
  double forward(double x) const;
  /// x(y); y outside the target support clamps to the source edges.
  double inverse(double y) const;
  /// dy/dx = rho(x)^(1-alpha).
  double slope(double x) const;

 private:
  friend YMap y_map(const Density&, double, const QuadratureConfig&, std::optional<double>,
                    bool);

  struct Identity {};
  // Piecewise-linear knots; exact for uniform and piecewise-constant sources.
  struct Linear {
    std::vector<double> xs;
    std::vector<double> ys;
  };
  // Closed form for the exponential family: g(x) = int_left^x rho^(1-alpha).
  struct Exponential {
    double rate;
    double left;
    double g_anchor;
  };
  struct Numeric {
    std::vector<double> xs;
    std::vector<double> gs;  // int_{x0}^{xs[i]} rho^(1-alpha), signed
    QuadratureConfig cfg;
  };

  YMap(std::shared_ptr<const Density> source, double alpha, double anchor);

  double numeric_forward(const Numeric& m, double x) const;
  double numeric_inverse(const Numeric& m, double g) const;
  double segment(double a, double b, const QuadratureConfig& cfg) const;

  std::shared_ptr<const Density> source_;
  double alpha_;
  double anchor_;
  Support target_{0.0, 1.0};
  std::variant<Identity, Linear, Exponential, Numeric> impl_;
};

/// Default anchor: left support edge when finite, else 0 (clamped into the
/// support).
double default_anchor(const Support& s);

YMap y_map(const Density& d, double alpha, const QuadratureConfig& cfg = {},
           std::optional<double> anchor = std::nullopt, bool force_numeric = false);

}  // namespace descort
