#include "descort/transforms.hpp"

#include <cmath>
#include <memory>

#include "descort/error.hpp"
#include "descort/measures.hpp"

namespace descort {

namespace {

constexpr double kExponentialSnap = 1e-14;

// Left edge of the transformed support for a left-bounded closed form.
double image_of_left(const Density& d, double alpha, double x0, const QuadratureConfig& cfg) {
  const double left = d.support().lower();
  if (x0 == left) return left;
  return y_map(d, alpha, cfg, x0).target_support().lower();
}

Density qexp_or_exponential(double q, double scale, double left) {
  if (std::abs(q - 1.0) < kExponentialSnap) return exponential(scale, left);
  return qexponential(q, scale, left);
}

}  // namespace

TransformedDensity transform(const Density& d, double alpha, const QuadratureConfig& cfg,
                             const TransformOptions& opts) {
  cfg.validate();
  if (!std::isfinite(alpha)) throw Error(Errc::InvalidArgument, "alpha must be finite");
  const Support& s = d.support();
  const double x0 = opts.anchor.value_or(default_anchor(s));
  if (!std::isfinite(x0) || !s.contains(x0)) {
    throw Error(Errc::InvalidArgument, "anchor must be a finite point of the support");
  }
  const Provenance prov{d.kind_name(), alpha, x0};

  if (alpha == 0.0) {
    const double p_minus = cdf(d, x0, cfg);
    return {uniform(1.0, x0 - p_minus), prov, false};
  }

  if (!opts.force_numeric) {
    if (alpha == 1.0) return {d, prov, false};
    if (const auto* u = d.as<family::Uniform>()) {
      return {uniform(std::pow(u->width, alpha), image_of_left(d, alpha, x0, cfg)), prov, false};
    }
    if (const auto* p = d.as<family::PiecewiseConstant>()) {
      std::vector<Step> steps;
      steps.reserve(p->steps.size());
      for (const Step& st : p->steps) {
        steps.push_back({std::pow(st.height, alpha), st.width * std::pow(st.height, 1.0 - alpha)});
      }
      return {Density(family::PiecewiseConstant{std::move(steps), image_of_left(d, alpha, x0, cfg)}),
              prov, false};
    }
    if (const auto* e = d.as<family::Exponential>()) {
      const double q_bar = (2.0 * alpha - 1.0) / alpha;
      return {qexp_or_exponential(q_bar, std::pow(e->rate, alpha), image_of_left(d, alpha, x0, cfg)),
              prov, q_bar > 2.0};
    }
    if (const auto* e = d.as<family::QExponential>()) {
      const double q_bar = 2.0 + (e->q - 2.0) / alpha;
      return {qexp_or_exponential(q_bar, std::pow(e->scale, alpha),
                                  image_of_left(d, alpha, x0, cfg)),
              prov, q_bar > 2.0};
    }
  }

  auto map = std::make_shared<const YMap>(y_map(d, alpha, cfg, x0, opts.force_numeric));
  return {Density(family::NumericTransform{std::move(map)}), prov, false};
}

Density inverse_transform(const TransformedDensity& td, const QuadratureConfig& cfg) {
  const double alpha = td.provenance.alpha;
  if (alpha == 0.0) {
    throw Error(Errc::NotInvertible, "the alpha = 0 transform collapses every density to a uniform");
  }
  TransformOptions opts;
  opts.anchor = td.provenance.anchor;
  return transform(td.base, 1.0 / alpha, cfg, opts).base;
}

Density standard_escort(const Density& d, double q, const QuadratureConfig& cfg) {
  if (!std::isfinite(q)) throw Error(Errc::InvalidArgument, "escort parameter must be finite");
  const double w = entropic_moment(d, q, cfg);
  if (!std::isfinite(w)) {
    throw Error(Errc::DivergentMoment, "W_q is infinite; the escort density does not exist");
  }
  if (q == 1.0) return d;
  if (d.as<family::Uniform>()) return d;
  if (const auto* p = d.as<family::PiecewiseConstant>()) {
    std::vector<Step> steps = p->steps;
    for (Step& st : steps) st.height = std::pow(st.height, q) / w;
    return Density(family::PiecewiseConstant{std::move(steps), p->left});
  }
  if (const auto* e = d.as<family::Exponential>()) return exponential(q * e->rate, e->left);
  if (const auto* e = d.as<family::QExponential>()) {
    const double q_new = 1.0 + (e->q - 1.0) / q;
    const double scale = e->scale * q * (2.0 - q_new) / (2.0 - e->q);
    return qexp_or_exponential(q_new, scale, e->left);
  }
  if (const auto* p = d.as<family::PowerLawTail>()) return power_law_tail(p->beta * q, p->onset);
  return Density(family::Escort{std::make_shared<const Density>(d), q, w});
}

Density scaled(const Density& d, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(Errc::InvalidArgument, "scale factor must be positive");
  if (const auto* u = d.as<family::Uniform>()) return uniform(u->width / a, u->left / a);
  if (const auto* p = d.as<family::PiecewiseConstant>()) {
    std::vector<Step> steps = p->steps;
    for (Step& st : steps) {
      st.height *= a;
      st.width /= a;
    }
    return Density(family::PiecewiseConstant{std::move(steps), p->left / a});
  }
  if (const auto* e = d.as<family::Exponential>()) return exponential(e->rate * a, e->left / a);
  if (const auto* e = d.as<family::QExponential>()) {
    return qexponential(e->q, e->scale * a, e->left / a);
  }
  if (const auto* p = d.as<family::PowerLawTail>()) return power_law_tail(p->beta, p->onset / a);
  if (const auto* t = d.as<family::Tabulated>()) {
    family::Tabulated out = *t;
    for (double& x : out.x) x /= a;
    for (double& v : out.value) v *= a;
    return Density(std::move(out));
  }
  if (const auto* sc = d.as<family::Scaled>()) {
    return Density(family::Scaled{sc->source, sc->factor * a});
  }
  return Density(family::Scaled{std::make_shared<const Density>(d), a});
}

}  // namespace descort
