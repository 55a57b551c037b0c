#pragma once

#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "descort/quadrature.hpp"

namespace descort {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Density;
class YMap;

/// Connected support [lower, upper]; either endpoint may be infinite.
class Support {
 public:
  Support(double lower, double upper);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool compact() const;
  double length() const { return upper_ - lower_; }
  bool contains(double x) const { return x >= lower_ && x <= upper_; }
  double clamp(double x) const;

  bool operator==(const Support&) const = default;

 private:
  double lower_;
  double upper_;
};

struct Step {
  double height;
  double width;
};

namespace family {

/// chi^(a) shifted to start at `left`: height 1/width on [left, left + width].
struct Uniform {
  double width;
  double left;
};

/// Steps laid out left to right from `left`. Heights times widths sum to one.
struct PiecewiseConstant {
  std::vector<Step> steps;
  double left;
};

/// rate * exp(-rate (x - left)) on [left, inf).
struct Exponential {
  double rate;
  double left;
};

/// scale * E_q(scale (x - left)), with E_q(y) = (1 - (1-q) y / (2-q))_+^(1/(1-q)).
/// Non-compact for 1 < q < 2, compact otherwise. q > 2 is only reached
/// through negative deformation parameters and is unbounded at its right
/// edge.
struct QExponential {
  double q;
  double scale;
  double left;
};

/// Plateau on [0, onset) continued by C x^-beta, C fixed by normalization.
struct PowerLawTail {
  double beta;
  double onset;

  double plateau() const { return (beta - 1.0) / (beta * onset); }
  double tail_coefficient() const;
};

/// Linear interpolation through (x, value); zero outside [x.front(), x.back()].
struct Tabulated {
  std::vector<double> x;
  std::vector<double> value;
};

/// rho(x(y))^alpha where x(y) inverts a numeric y-map.
struct NumericTransform {
  std::shared_ptr<const YMap> map;
};

/// rho^q / W_q[rho] on the unchanged support.
struct Escort {
  std::shared_ptr<const Density> source;
  double q;
  double moment;
};

/// factor * rho(factor * x).
struct Scaled {
  std::shared_ptr<const Density> source;
  double factor;
};

}  // namespace family

/// Normalized univariate density with connected support. Immutable; copies
/// share any numeric state.
class Density {
 public:
  using Kind = std::variant<family::Uniform, family::PiecewiseConstant, family::Exponential,
                            family::QExponential, family::PowerLawTail, family::Tabulated,
                            family::NumericTransform, family::Escort, family::Scaled>;

  explicit Density(Kind kind);

  const Kind& kind() const { return kind_; }
  const Support& support() const { return support_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

  /// Schema name of the family ("uniform", "piecewise", ...).
  std::string kind_name() const;

  /// True for the families with analytic evaluation, cdf and moments.
  bool closed_form() const;

 private:
  Kind kind_;
  Support support_;
};

Density uniform(double a, double x0 = 0.0);
Density piecewise(std::vector<Step> steps, double left = 0.0);
Density exponential(double rate = 1.0, double left = 0.0);
/// q == 1 yields the Exponential family.
Density qexponential(double q, double scale = 1.0, double left = 0.0);
Density power_law_tail(double beta, double onset);
/// Onset at which the tail is exactly x^-beta (unit coefficient).
Density unit_power_law_tail(double beta);
Density tabulated(const std::vector<std::pair<double, double>>& points);

double evaluate(const Density& d, double x);
/// log rho(x), -inf outside the support. Stays accurate where rho itself
/// underflows (far power-law tails).
double log_evaluate(const Density& d, double x);
double total_probability(const Density& d, const QuadratureConfig& cfg = {});
double cdf(const Density& d, double x, const QuadratureConfig& cfg = {});
double quantile(const Density& d, double p, const QuadratureConfig& cfg = {});
double sup_value(const Density& d);
double inf_value(const Density& d);

/// Interior points where the density has a kink or a jump.
std::vector<double> breakpoints(const Density& d);
/// Characteristic length over which the density varies.
double length_scale(const Density& d);

/// Quadrature of g(rho(x)) over the support of d, honoring its breakpoints.
QuadResult integrate_functional(const Density& d, const std::function<double(double)>& g,
                                const QuadratureConfig& cfg);

}  // namespace descort
