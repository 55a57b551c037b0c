#include "descort/tail.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "descort/error.hpp"
#include "descort/measures.hpp"

namespace descort {

namespace {

constexpr int kFitPoints = 64;
constexpr double kDecades = 3.0;
constexpr double kStartFraction = 1e-3;
constexpr int kMaxShifts = 12;
constexpr double kHalfSlopeAgreement = 5e-3;
constexpr double kMinRSquared = 0.99;

struct Line {
  double slope = 0.0;
  double r_squared = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo,
                   std::size_t hi) {
  const double n = static_cast<double>(hi - lo);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Line l;
  l.slope = sxy / sxx;
  l.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return l;
}

// Continued-fraction recovery of short fractions; exact doubles only.
std::optional<std::pair<long long, long long>> as_fraction(double v) {
  constexpr long long kMaxDen = 1000000;
  if (!std::isfinite(v) || std::abs(v) > 1e6) return std::nullopt;
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = v;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(r);
    const long long ai = static_cast<long long>(a);
    const long long p2 = ai * p1 + p0;
    const long long q2 = ai * q1 + q0;
    if (q2 > kMaxDen) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - v) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(v)) {
      return std::make_pair(p1, q1);
    }
    const double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

// Sign of alpha - (beta - 1)/beta.
int compare_to_critical(double beta, double alpha) {
  const auto a = as_fraction(alpha);
  const auto b = as_fraction(beta);
  if (a && b) {
    // alpha = n/m, beta = c/e, alpha_c = (c - e)/c, all denominators positive.
    const long long lhs = a->first * b->first;
    const long long rhs = a->second * (b->first - b->second);
    return (lhs > rhs) - (lhs < rhs);
  }
  const double diff = alpha - critical_alpha(beta);
  if (std::abs(diff) <= 1e-12) return 0;
  return diff > 0.0 ? 1 : -1;
}

void require_right_tail(const Density& d) {
  if (std::isfinite(d.support().upper())) {
    throw Error(Errc::CompactSupport, "density has no right tail to fit");
  }
}

// First y (doubling outwards) where rho drops below kStartFraction of its sup.
double tail_start(const Density& d) {
  const Support& s = d.support();
  double top = sup_value(d);
  const double origin = std::isfinite(s.lower()) ? std::max(s.lower(), 0.0) : 0.0;
  const double scale = length_scale(d);
  if (!std::isfinite(top)) top = evaluate(d, origin + scale);
  for (int k = 0; k < 2000; ++k) {
    const double y = origin + scale * std::ldexp(1.0, k);
    if (!std::isfinite(y)) break;
    if (evaluate(d, y) < kStartFraction * top) return y;
  }
  throw Error(Errc::PoorFit, "density never decays below 1e-3 of its maximum");
}

struct Sampled {
  std::vector<double> x;
  std::vector<double> log_rho;
};

std::optional<Sampled> sample(const Density& d, const std::vector<double>& ys, bool log_x) {
  Sampled out;
  for (double y : ys) {
    const double r = evaluate(d, y);
    if (!(r > 0.0) || !std::isfinite(r)) return std::nullopt;
    out.x.push_back(log_x ? std::log(y) : y);
    out.log_rho.push_back(std::log(r));
  }
  return out;
}

}  // namespace

double critical_alpha(double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta)) throw Error(Errc::InvalidBeta, "beta must exceed 1");
  return (beta - 1.0) / beta;
}

TailClass classify_tail(double beta, double alpha) {
  critical_alpha(beta);
  if (!std::isfinite(alpha)) throw Error(Errc::InvalidArgument, "alpha must be finite");
  TailClass t;
  const int side = compare_to_critical(beta, alpha);
  if (side < 0) {
    t.kind = TailClass::Kind::Compact;
  } else if (side == 0) {
    t.kind = TailClass::Kind::ExponentialDecay;
    t.rate = beta - 1.0;
  } else {
    t.kind = TailClass::Kind::PowerLaw;
    t.exponent = beta * alpha / (1.0 - beta * (1.0 - alpha));
  }
  return t;
}

TailFit estimate_tail_exponent(const Density& d, const QuadratureConfig&) {
  require_right_tail(d);
  double y_lo = tail_start(d);
  const double span = std::pow(10.0, kDecades);

  TailFit fit;
  for (int shift = 0; shift <= kMaxShifts; ++shift) {
    std::vector<double> ys(kFitPoints);
    for (int i = 0; i < kFitPoints; ++i) {
      ys[i] = y_lo * std::pow(span, static_cast<double>(i) / (kFitPoints - 1));
    }
    const auto s = sample(d, ys, true);
    if (!s) {
      if (shift == 0) throw Error(Errc::PoorFit, "density underflows inside the fit window");
      break;
    }
    const Line all = least_squares(s->x, s->log_rho, 0, kFitPoints);
    const Line first = least_squares(s->x, s->log_rho, 0, kFitPoints / 2);
    const Line second = least_squares(s->x, s->log_rho, kFitPoints / 2, kFitPoints);
    fit = {-all.slope, all.r_squared, ys.front(), ys.back()};
    if (std::abs(first.slope - second.slope) <= kHalfSlopeAgreement * std::abs(all.slope)) break;
    if (!std::isfinite(y_lo * span * 10.0) || y_lo * span * 10.0 > 1e290) break;
    y_lo *= 10.0;
  }
  if (fit.r_squared < kMinRSquared) throw Error(Errc::PoorFit, "log-log fit has r^2 below 0.99");
  return fit;
}

TailFit estimate_exponential_rate(const Density& d, const QuadratureConfig&) {
  require_right_tail(d);
  const double y_lo = tail_start(d);
  const double r_lo = evaluate(d, y_lo);
  const double scale = length_scale(d);
  double y_hi = y_lo + scale;
  for (int k = 0; k < 2000 && evaluate(d, y_hi) > 1e-12 * r_lo; ++k) {
    y_hi = y_lo + scale * std::ldexp(1.0, k);
    if (!std::isfinite(y_hi)) throw Error(Errc::PoorFit, "no exponential decay found");
  }
  std::vector<double> ys(kFitPoints);
  for (int i = 0; i < kFitPoints; ++i) {
    ys[i] = y_lo + (y_hi - y_lo) * static_cast<double>(i) / (kFitPoints - 1);
  }
  const auto s = sample(d, ys, false);
  if (!s) throw Error(Errc::PoorFit, "density underflows inside the fit window");
  const Line all = least_squares(s->x, s->log_rho, 0, kFitPoints);
  TailFit fit{-all.slope, all.r_squared, ys.front(), ys.back()};
  if (fit.r_squared < kMinRSquared) throw Error(Errc::PoorFit, "semilog fit has r^2 below 0.99");
  return fit;
}

double support_length_of_transform(const Density& d, double alpha, const QuadratureConfig& cfg) {
  return entropic_moment(d, 1.0 - alpha, cfg);
}

}  // namespace descort
