#include "descort/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "descort/error.hpp"
#include "descort/ymap.hpp"

namespace descort {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::InvalidArgument, what);
}

double piecewise_width(const family::PiecewiseConstant& p) {
  double w = 0.0;
  for (const Step& s : p.steps) w += s.width;
  return w;
}

// Right edge offset of a compact q-exponential.
double qexp_extent(const family::QExponential& e) {
  return (2.0 - e.q) / ((1.0 - e.q) * e.scale);
}

bool qexp_compact(double q) { return q < 1.0 || q > 2.0; }

Support support_of(const Density::Kind& kind) {
  return std::visit(
      Overloaded{
          [](const family::Uniform& u) { return Support(u.left, u.left + u.width); },
          [](const family::PiecewiseConstant& p) {
            return Support(p.left, p.left + piecewise_width(p));
          },
          [](const family::Exponential& e) { return Support(e.left, kInf); },
          [](const family::QExponential& e) {
            return qexp_compact(e.q) ? Support(e.left, e.left + qexp_extent(e))
                                     : Support(e.left, kInf);
          },
          [](const family::PowerLawTail&) { return Support(0.0, kInf); },
          [](const family::Tabulated& t) { return Support(t.x.front(), t.x.back()); },
          [](const family::NumericTransform& n) { return n.map->target_support(); },
          [](const family::Escort& e) { return e.source->support(); },
          [](const family::Scaled& s) {
            const Support& src = s.source->support();
            return Support(src.lower() / s.factor, src.upper() / s.factor);
          },
      },
      kind);
}

void validate(const Density::Kind& kind) {
  std::visit(
      Overloaded{
          [](const family::Uniform& u) {
            require(u.width > 0.0 && std::isfinite(u.width), "uniform width must be positive");
            require(std::isfinite(u.left), "uniform offset must be finite");
          },
          [](const family::PiecewiseConstant& p) {
            require(!p.steps.empty(), "piecewise density needs at least one step");
            require(std::isfinite(p.left), "piecewise offset must be finite");
            for (const Step& s : p.steps) {
              require(s.height > 0.0 && std::isfinite(s.height), "step heights must be positive");
              require(s.width > 0.0 && std::isfinite(s.width), "step widths must be positive");
            }
          },
          [](const family::Exponential& e) {
            require(e.rate > 0.0 && std::isfinite(e.rate), "exponential rate must be positive");
            require(std::isfinite(e.left), "exponential offset must be finite");
          },
          [](const family::QExponential& e) {
            require(std::isfinite(e.q) && e.q != 2.0 && e.q != 1.0,
                    "q-exponential needs finite q other than 1 and 2");
            require(e.scale > 0.0 && std::isfinite(e.scale), "q-exponential scale must be positive");
            require(std::isfinite(e.left), "q-exponential offset must be finite");
          },
          [](const family::PowerLawTail& p) {
            if (!(p.beta > 1.0) || !std::isfinite(p.beta)) {
              throw Error(Errc::InvalidBeta, "power-law tail needs beta > 1");
            }
            require(p.onset > 0.0 && std::isfinite(p.onset), "power-law onset must be positive");
          },
          [](const family::Tabulated& t) {
            require(t.x.size() >= 2 && t.x.size() == t.value.size(),
                    "tabulated density needs at least two (x, value) points");
            for (std::size_t i = 0; i < t.x.size(); ++i) {
              require(std::isfinite(t.x[i]) && std::isfinite(t.value[i]) && t.value[i] >= 0.0,
                      "tabulated points must be finite with non-negative values");
              if (i > 0) require(t.x[i] > t.x[i - 1], "tabulated x must be strictly increasing");
            }
          },
          [](const family::NumericTransform& n) { require(n.map != nullptr, "missing y-map"); },
          [](const family::Escort& e) {
            require(e.source != nullptr, "missing escort source");
            require(e.moment > 0.0 && std::isfinite(e.moment), "escort moment must be finite");
          },
          [](const family::Scaled& s) {
            require(s.source != nullptr, "missing scaled source");
            require(s.factor > 0.0 && std::isfinite(s.factor), "scale factor must be positive");
          },
      },
      kind);
}

double tabulated_trapezoid(const family::Tabulated& t) {
  double area = 0.0;
  for (std::size_t i = 1; i < t.x.size(); ++i) {
    area += 0.5 * (t.x[i] - t.x[i - 1]) * (t.value[i] + t.value[i - 1]);
  }
  return area;
}

void check_mass(double mass, double rel_tol, const char* what) {
  if (!(std::abs(mass - 1.0) <= 100.0 * rel_tol)) {
    std::ostringstream os;
    os.precision(12);
    os << what << " integrates to " << mass;
    throw Error(Errc::NonNormalized, os.str());
  }
}

double qexp_value(const family::QExponential& e, double v) {
  const double z = (1.0 - e.q) * e.scale * v / (2.0 - e.q);
  if (z >= 1.0) return e.q > 2.0 ? kInf : 0.0;
  return e.scale * std::exp(std::log1p(-z) / (1.0 - e.q));
}

double tabulated_value(const family::Tabulated& t, double x) {
  if (x < t.x.front() || x > t.x.back()) return 0.0;
  const auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
  if (it == t.x.end()) return t.value.back();
  const std::size_t i = static_cast<std::size_t>(it - t.x.begin()) - 1;
  const double w = (x - t.x[i]) / (t.x[i + 1] - t.x[i]);
  return t.value[i] + w * (t.value[i + 1] - t.value[i]);
}

double bisect_quantile(const Density& d, double p, const QuadratureConfig& cfg) {
  const Support& s = d.support();
  const double scale = length_scale(d);
  double lo = s.lower();
  double hi = s.upper();
  if (std::isinf(lo)) {
    lo = std::min(0.0, std::isfinite(hi) ? hi : 0.0) - scale;
    while (cdf(d, lo, cfg) > p && std::isfinite(lo)) lo -= 2.0 * (std::abs(lo) + scale);
  }
  if (std::isinf(hi)) {
    hi = std::max(0.0, lo) + scale;
    while (cdf(d, hi, cfg) < p && std::isfinite(hi)) hi += 2.0 * (std::abs(hi) + scale);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi)) break;
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) break;
    if (cdf(d, mid, cfg) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Support::Support(double lower, double upper) : lower_(lower), upper_(upper) {
  if (!(lower < upper) || std::isnan(lower) || std::isnan(upper)) {
    throw Error(Errc::InvalidArgument, "support needs lower < upper");
  }
}

bool Support::compact() const { return std::isfinite(lower_) && std::isfinite(upper_); }

double Support::clamp(double x) const { return std::clamp(x, lower_, upper_); }

double family::PowerLawTail::tail_coefficient() const {
  return plateau() * std::pow(onset, beta);
}

Density::Density(Kind kind) : kind_((validate(kind), std::move(kind))), support_(support_of(kind_)) {}

std::string Density::kind_name() const {
  return std::visit(Overloaded{
                        [](const family::Uniform&) { return "uniform"; },
                        [](const family::PiecewiseConstant&) { return "piecewise"; },
                        [](const family::Exponential&) { return "exponential"; },
                        [](const family::QExponential&) { return "qexp"; },
                        [](const family::PowerLawTail&) { return "powerlaw"; },
                        [](const family::Tabulated&) { return "tabulated"; },
                        [](const family::NumericTransform&) { return "transformed"; },
                        [](const family::Escort&) { return "escort"; },
                        [](const family::Scaled&) { return "scaled"; },
                    },
                    kind_);
}

bool Density::closed_form() const {
  return !std::holds_alternative<family::NumericTransform>(kind_) &&
         !std::holds_alternative<family::Escort>(kind_) &&
         !std::holds_alternative<family::Scaled>(kind_);
}

Density uniform(double a, double x0) { return Density(family::Uniform{a, x0}); }

Density piecewise(std::vector<Step> steps, double left) {
  Density d(family::PiecewiseConstant{std::move(steps), left});
  check_mass(total_probability(d, QuadratureConfig{}), QuadratureConfig{}.rel_tol,
             "piecewise density");
  return d;
}

Density exponential(double rate, double left) { return Density(family::Exponential{rate, left}); }

Density qexponential(double q, double scale, double left) {
  if (q == 1.0) return exponential(scale, left);
  return Density(family::QExponential{q, scale, left});
}

Density power_law_tail(double beta, double onset) {
  return Density(family::PowerLawTail{beta, onset});
}

Density unit_power_law_tail(double beta) {
  if (!(beta > 1.0)) throw Error(Errc::InvalidBeta, "power-law tail needs beta > 1");
  return power_law_tail(beta, std::pow(beta / (beta - 1.0), 1.0 / (beta - 1.0)));
}

Density tabulated(const std::vector<std::pair<double, double>>& points) {
  family::Tabulated t;
  t.x.reserve(points.size());
  t.value.reserve(points.size());
  for (const auto& [x, v] : points) {
    t.x.push_back(x);
    t.value.push_back(v);
  }
  Density d(std::move(t));
  check_mass(total_probability(d, QuadratureConfig{}), QuadratureConfig{}.rel_tol,
             "tabulated density");
  return d;
}

double evaluate(const Density& d, double x) {
  if (std::isnan(x) || !d.support().contains(x)) return 0.0;
  return std::visit(
      Overloaded{
          [x](const family::Uniform& u) { return 1.0 / u.width; },
          [x](const family::PiecewiseConstant& p) {
            double edge = p.left;
            for (const Step& s : p.steps) {
              edge += s.width;
              if (x < edge) return s.height;
            }
            return p.steps.back().height;
          },
          [x](const family::Exponential& e) { return e.rate * std::exp(-e.rate * (x - e.left)); },
          [x](const family::QExponential& e) { return qexp_value(e, x - e.left); },
          [x](const family::PowerLawTail& p) {
            if (x < p.onset) return p.plateau();
            return p.plateau() * std::pow(x / p.onset, -p.beta);
          },
          [x](const family::Tabulated& t) { return tabulated_value(t, x); },
          [x](const family::NumericTransform& n) {
            const double a = n.map->alpha();
            if (a == 0.0) return 1.0;
            return std::exp(a * log_evaluate(n.map->source(), n.map->inverse(x)));
          },
          [x](const family::Escort& e) { return std::pow(evaluate(*e.source, x), e.q) / e.moment; },
          [x](const family::Scaled& s) { return s.factor * evaluate(*s.source, s.factor * x); },
      },
      d.kind());
}

double log_evaluate(const Density& d, double x) {
  if (std::isnan(x) || !d.support().contains(x)) return -kInf;
  return std::visit(
      Overloaded{
          [](const family::Uniform& u) { return -std::log(u.width); },
          [&d, x](const family::PiecewiseConstant&) { return std::log(evaluate(d, x)); },
          [x](const family::Exponential& e) { return std::log(e.rate) - e.rate * (x - e.left); },
          [x](const family::QExponential& e) {
            const double z = (1.0 - e.q) * e.scale * (x - e.left) / (2.0 - e.q);
            if (z >= 1.0) return e.q > 2.0 ? kInf : -kInf;
            return std::log(e.scale) + std::log1p(-z) / (1.0 - e.q);
          },
          [x](const family::PowerLawTail& p) {
            if (x < p.onset) return std::log(p.plateau());
            return std::log(p.plateau()) - p.beta * std::log(x / p.onset);
          },
          [x](const family::Tabulated& t) { return std::log(tabulated_value(t, x)); },
          [x](const family::NumericTransform& n) {
            const double a = n.map->alpha();
            if (a == 0.0) return 0.0;
            return a * log_evaluate(n.map->source(), n.map->inverse(x));
          },
          [x](const family::Escort& e) {
            return e.q * log_evaluate(*e.source, x) - std::log(e.moment);
          },
          [x](const family::Scaled& s) {
            return std::log(s.factor) + log_evaluate(*s.source, s.factor * x);
          },
      },
      d.kind());
}

QuadResult integrate_functional(const Density& d, const std::function<double(double)>& g,
                                const QuadratureConfig& cfg) {
  const std::vector<double> bps = breakpoints(d);
  return integrate([&](double x) { return g(evaluate(d, x)); }, d.support().lower(),
                   d.support().upper(), cfg, bps, length_scale(d));
}

double total_probability(const Density& d, const QuadratureConfig& cfg) {
  const double mass = std::visit(
      Overloaded{
          [](const family::PiecewiseConstant& p) {
            double m = 0.0;
            for (const Step& s : p.steps) m += s.height * s.width;
            return m;
          },
          [](const family::Tabulated& t) { return tabulated_trapezoid(t); },
          [](const family::Uniform&) { return 1.0; },
          [](const family::Exponential&) { return 1.0; },
          [](const family::QExponential&) { return 1.0; },
          [](const family::PowerLawTail&) { return 1.0; },
          [&](const auto&) {
            return integrate_functional(d, [](double r) { return r; }, cfg).value;
          },
      },
      d.kind());
  check_mass(mass, cfg.rel_tol, "density");
  return mass;
}

double cdf(const Density& d, double x, const QuadratureConfig& cfg) {
  const Support& s = d.support();
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x <= s.lower()) return 0.0;
  if (x >= s.upper()) return 1.0;
  const double p = std::visit(
      Overloaded{
          [x](const family::Uniform& u) { return (x - u.left) / u.width; },
          [x](const family::PiecewiseConstant& p) {
            double edge = p.left;
            double acc = 0.0;
            for (const Step& st : p.steps) {
              if (x < edge + st.width) return acc + st.height * (x - edge);
              edge += st.width;
              acc += st.height * st.width;
            }
            return acc;
          },
          [x](const family::Exponential& e) { return -std::expm1(-e.rate * (x - e.left)); },
          [x](const family::QExponential& e) {
            const double z = (1.0 - e.q) * e.scale * (x - e.left) / (2.0 - e.q);
            if (z >= 1.0) return 1.0;
            return -std::expm1(std::log1p(-z) * (2.0 - e.q) / (1.0 - e.q));
          },
          [x](const family::PowerLawTail& p) {
            if (x < p.onset) return p.plateau() * x;
            return 1.0 - p.plateau() * p.onset * std::pow(x / p.onset, 1.0 - p.beta) /
                             (p.beta - 1.0);
          },
          [x](const family::Tabulated& t) {
            double acc = 0.0;
            for (std::size_t i = 1; i < t.x.size(); ++i) {
              if (x < t.x[i]) {
                return acc + 0.5 * (x - t.x[i - 1]) * (t.value[i - 1] + tabulated_value(t, x));
              }
              acc += 0.5 * (t.x[i] - t.x[i - 1]) * (t.value[i] + t.value[i - 1]);
            }
            return acc;
          },
          [&](const family::Scaled& sc) { return cdf(*sc.source, sc.factor * x, cfg); },
          [&](const family::NumericTransform& n) {
            return cdf(n.map->source(), n.map->inverse(x), cfg);
          },
          [&](const auto&) {
            const std::vector<double> bps = breakpoints(d);
            return integrate([&](double t) { return evaluate(d, t); }, s.lower(), x, cfg, bps,
                             length_scale(d))
                .value;
          },
      },
      d.kind());
  return std::clamp(p, 0.0, 1.0);
}

double quantile(const Density& d, double p, const QuadratureConfig& cfg) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidArgument, "quantile needs p in [0, 1]");
  const Support& s = d.support();
  if (p == 0.0) return s.lower();
  if (p == 1.0) return s.upper();
  return std::visit(
      Overloaded{
          [p](const family::Uniform& u) { return u.left + p * u.width; },
          [p](const family::PiecewiseConstant& pc) {
            double edge = pc.left;
            double acc = 0.0;
            for (const Step& st : pc.steps) {
              const double mass = st.height * st.width;
              if (p <= acc + mass) return edge + (p - acc) / st.height;
              edge += st.width;
              acc += mass;
            }
            return edge;
          },
          [p](const family::Exponential& e) { return e.left - std::log1p(-p) / e.rate; },
          [p](const family::QExponential& e) {
            const double z = -std::expm1(std::log1p(-p) * (1.0 - e.q) / (2.0 - e.q));
            return e.left + z * (2.0 - e.q) / ((1.0 - e.q) * e.scale);
          },
          [p](const family::PowerLawTail& pl) {
            const double h = pl.plateau();
            if (p <= h * pl.onset) return p / h;
            return pl.onset * std::pow((1.0 - p) * (pl.beta - 1.0) / (h * pl.onset),
                                       1.0 / (1.0 - pl.beta));
          },
          [&](const family::NumericTransform& n) {
            return n.map->forward(quantile(n.map->source(), p, cfg));
          },
          [&](const family::Scaled& sc) { return quantile(*sc.source, p, cfg) / sc.factor; },
          [&](const auto&) { return bisect_quantile(d, p, cfg); },
      },
      d.kind());
}

double sup_value(const Density& d) {
  return std::visit(
      Overloaded{
          [](const family::Uniform& u) { return 1.0 / u.width; },
          [](const family::PiecewiseConstant& p) {
            double m = 0.0;
            for (const Step& s : p.steps) m = std::max(m, s.height);
            return m;
          },
          [](const family::Exponential& e) { return e.rate; },
          [](const family::QExponential& e) { return e.q > 2.0 ? kInf : e.scale; },
          [](const family::PowerLawTail& p) { return p.plateau(); },
          [](const family::Tabulated& t) { return *std::max_element(t.value.begin(), t.value.end()); },
          [](const family::NumericTransform& n) {
            const double a = n.map->alpha();
            const double base = a >= 0.0 ? sup_value(n.map->source()) : inf_value(n.map->source());
            return std::pow(base, a);
          },
          [](const family::Escort& e) {
            const double base = e.q >= 0.0 ? sup_value(*e.source) : inf_value(*e.source);
            return std::pow(base, e.q) / e.moment;
          },
          [](const family::Scaled& s) { return s.factor * sup_value(*s.source); },
      },
      d.kind());
}

double inf_value(const Density& d) {
  return std::visit(
      Overloaded{
          [](const family::Uniform& u) { return 1.0 / u.width; },
          [](const family::PiecewiseConstant& p) {
            double m = kInf;
            for (const Step& s : p.steps) m = std::min(m, s.height);
            return m;
          },
          [](const family::Exponential&) { return 0.0; },
          [](const family::QExponential& e) { return e.q > 2.0 ? e.scale : 0.0; },
          [](const family::PowerLawTail&) { return 0.0; },
          [](const family::Tabulated& t) { return *std::min_element(t.value.begin(), t.value.end()); },
          [](const family::NumericTransform& n) {
            const double a = n.map->alpha();
            const double base = a >= 0.0 ? inf_value(n.map->source()) : sup_value(n.map->source());
            return std::pow(base, a);
          },
          [](const family::Escort& e) {
            const double base = e.q >= 0.0 ? inf_value(*e.source) : sup_value(*e.source);
            return std::pow(base, e.q) / e.moment;
          },
          [](const family::Scaled& s) { return s.factor * inf_value(*s.source); },
      },
      d.kind());
}

std::vector<double> breakpoints(const Density& d) {
  return std::visit(
      Overloaded{
          [](const family::PiecewiseConstant& p) {
            std::vector<double> out;
            double edge = p.left;
            for (std::size_t i = 0; i + 1 < p.steps.size(); ++i) {
              edge += p.steps[i].width;
              out.push_back(edge);
            }
            return out;
          },
          [](const family::PowerLawTail& p) { return std::vector<double>{p.onset}; },
          [](const family::Tabulated& t) {
            return std::vector<double>(t.x.begin() + 1, t.x.end() - 1);
          },
          [](const family::NumericTransform& n) {
            std::vector<double> out;
            for (double b : breakpoints(n.map->source())) {
              if (std::isfinite(b)) out.push_back(n.map->forward(b));
            }
            return out;
          },
          [](const family::Escort& e) { return breakpoints(*e.source); },
          [](const family::Scaled& s) {
            std::vector<double> out = breakpoints(*s.source);
            for (double& b : out) b /= s.factor;
            return out;
          },
          [](const auto&) { return std::vector<double>{}; },
      },
      d.kind());
}

double length_scale(const Density& d) {
  return std::visit(
      Overloaded{
          [](const family::Uniform& u) { return u.width; },
          [](const family::PiecewiseConstant& p) { return piecewise_width(p); },
          [](const family::Exponential& e) { return 1.0 / e.rate; },
          [](const family::QExponential& e) {
            return qexp_compact(e.q) ? qexp_extent(e) : (2.0 - e.q) / e.scale;
          },
          [](const family::PowerLawTail& p) { return p.onset; },
          [](const family::Tabulated& t) { return t.x.back() - t.x.front(); },
          [&d](const family::NumericTransform& n) {
            if (d.support().compact()) return d.support().length();
            const YMap& m = *n.map;
            const Support& src = m.source().support();
            const double step = length_scale(m.source());
            double x1 = src.clamp(m.anchor() + step);
            if (x1 == m.anchor()) x1 = src.clamp(m.anchor() - step);
            const double ls = std::abs(m.forward(x1) - m.forward(m.anchor()));
            return std::isfinite(ls) && ls > 0.0 ? ls : 1.0;
          },
          [](const family::Escort& e) { return length_scale(*e.source); },
          [](const family::Scaled& s) { return length_scale(*s.source) / s.factor; },
      },
      d.kind());
}

}  // namespace descort
