#include "descort/ymap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "descort/error.hpp"

namespace descort {

namespace {

constexpr double kNewtonTol = 1e-13;

[[noreturn]] void transform_failed(double a, double b, const std::string& why) {
  std::ostringstream os;
  os.precision(17);
  os << why << " on subinterval [" << a << ", " << b << "]";
  throw Error(Errc::TransformFailed, os.str());
}

// Nodes of the cumulative table: Chebyshev-like on compact supports,
// expm1-geometric (dense to 1e30 scale lengths, then doubling to 1e300) on
// infinite sides, plus extra halvings towards every finite edge.
std::vector<double> build_nodes(const Density& d, double x0, int n_nodes) {
  const Support& s = d.support();
  const double lo = s.lower();
  const double hi = s.upper();
  double scale = length_scale(d);
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;

  std::vector<double> xs;
  auto add = [&](double v) {
    if (std::isfinite(v) && v >= lo && v <= hi) xs.push_back(v);
  };
  // Nodes closer to an edge than this resolve rho only to a few digits.
  auto add_near = [&](double edge, double offset) {
    if (std::abs(offset) >= 1e8 * (std::nextafter(std::abs(edge), kInf) - std::abs(edge))) {
      add(edge + offset);
    }
  };

  if (s.compact()) {
    const double len = hi - lo;
    for (int k = 0; k <= n_nodes; ++k) {
      add(lo + len * 0.5 * (1.0 - std::cos(std::numbers::pi * k / n_nodes)));
    }
    for (int j = 0; j <= 40; ++j) {
      add_near(lo, len * std::ldexp(1e-7, -j));
      add_near(hi, -len * std::ldexp(1e-7, -j));
    }
  } else {
    const double delta = std::log1p(1e30) / n_nodes;
    auto side = [&](double origin, double dir) {
      for (int k = 0; k <= n_nodes; ++k) add(origin + dir * scale * std::expm1(k * delta));
      double off = scale * std::expm1(n_nodes * delta);
      for (;;) {
        off *= 2.0;
        const double v = origin + dir * off;
        if (!std::isfinite(v) || std::abs(v) > 1e300) break;
        add(v);
      }
      for (int j = 1; j <= 40; ++j) add_near(origin, dir * scale * delta * std::ldexp(1.0, -j));
    };
    if (std::isfinite(lo)) {
      side(lo, +1.0);
    } else if (std::isfinite(hi)) {
      side(hi, -1.0);
    } else {
      side(x0, +1.0);
      side(x0, -1.0);
    }
  }
  for (double b : breakpoints(d)) add(b);
  add(x0);
  add(lo);
  add(hi);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

void require_positive_interior(const Density& d) {
  if (const auto* t = d.as<family::Tabulated>()) {
    for (std::size_t i = 1; i + 1 < t->value.size(); ++i) {
      if (!(t->value[i] > 0.0)) {
        throw Error(Errc::InvalidArgument,
                    "density vanishes inside its support; the y-map is not a bijection");
      }
    }
  }
}

}  // namespace

double default_anchor(const Support& s) {
  if (std::isfinite(s.lower())) return s.lower();
  return s.clamp(0.0);
}

YMap::YMap(std::shared_ptr<const Density> source, double alpha, double anchor)
    : source_(std::move(source)), alpha_(alpha), anchor_(anchor) {}

double YMap::slope(double x) const {
  if (alpha_ == 1.0) return source_->support().contains(x) ? 1.0 : 0.0;
  return std::exp((1.0 - alpha_) * log_evaluate(*source_, x));
}

double YMap::segment(double a, double b, const QuadratureConfig& cfg) const {
  const QuadResult r = gauss_kronrod([this](double t) { return slope(t); }, a, b,
                                     cfg.abs_tol * 1e-3, kNewtonTol, 200);
  return r.value;
}

double YMap::forward(double x) const {
  if (std::isnan(x)) throw Error(Errc::InvalidArgument, "y-map evaluated at NaN");
  if (std::isinf(x)) {
    throw Error(Errc::DivergentMap,
                "y-map is not evaluated at infinity; the image of an infinite edge is "
                "target_support()");
  }
  const Support& s = source_->support();
  x = s.clamp(x);
  return std::visit(
      [&](const auto& impl) -> double {
        using T = std::decay_t<decltype(impl)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return x;
        } else if constexpr (std::is_same_v<T, Linear>) {
          const auto it = std::upper_bound(impl.xs.begin(), impl.xs.end(), x);
          std::size_t i = static_cast<std::size_t>(it - impl.xs.begin());
          i = std::clamp<std::size_t>(i, 1, impl.xs.size() - 1) - 1;
          const double slope_i = (impl.ys[i + 1] - impl.ys[i]) / (impl.xs[i + 1] - impl.xs[i]);
          return anchor_ + impl.ys[i] + (x - impl.xs[i]) * slope_i;
        } else if constexpr (std::is_same_v<T, Exponential>) {
          const double am1 = alpha_ - 1.0;
          const double g = std::pow(impl.rate, -alpha_) *
                           std::expm1(am1 * impl.rate * (x - impl.left)) / am1;
          return anchor_ + g - impl.g_anchor;
        } else {
          return anchor_ + numeric_forward(impl, x);
        }
      },
      impl_);
}

double YMap::inverse(double y) const {
  if (std::isnan(y)) throw Error(Errc::InvalidArgument, "inverse y-map evaluated at NaN");
  const Support& s = source_->support();
  if (y <= target_.lower()) return s.lower();
  if (y >= target_.upper()) return s.upper();
  return std::visit(
      [&](const auto& impl) -> double {
        using T = std::decay_t<decltype(impl)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return y;
        } else if constexpr (std::is_same_v<T, Linear>) {
          const double g = y - anchor_;
          const auto it = std::upper_bound(impl.ys.begin(), impl.ys.end(), g);
          std::size_t i = static_cast<std::size_t>(it - impl.ys.begin());
          i = std::clamp<std::size_t>(i, 1, impl.ys.size() - 1) - 1;
          const double inv_slope = (impl.xs[i + 1] - impl.xs[i]) / (impl.ys[i + 1] - impl.ys[i]);
          return s.clamp(impl.xs[i] + (g - impl.ys[i]) * inv_slope);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          const double am1 = alpha_ - 1.0;
          const double g = y - anchor_ + impl.g_anchor;
          const double arg = am1 * std::pow(impl.rate, alpha_) * g;
          if (arg <= -1.0) return s.upper();
          return s.clamp(impl.left + std::log1p(arg) / (am1 * impl.rate));
        } else {
          return numeric_inverse(impl, y - anchor_);
        }
      },
      impl_);
}

double YMap::numeric_forward(const Numeric& m, double x) const {
  const std::vector<double>& xs = m.xs;
  const std::vector<double>& gs = m.gs;
  const Support& s = source_->support();
  if (x >= xs.back()) {
    if (x == xs.back()) return gs.back();
    return gs.back() + segment(xs.back(), x, m.cfg);
  }
  if (x <= xs.front()) {
    if (x == xs.front()) return gs.front();
    return gs.front() - segment(x, xs.front(), m.cfg);
  }
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  if (x == xs[i]) return gs[i];
  const double a = xs[i];
  const double b = xs[i + 1];
  const bool left_ok = std::isfinite(gs[i]) && a != s.lower();
  const bool right_ok = std::isfinite(gs[i + 1]) && b != s.upper();
  bool use_left = left_ok;
  if (left_ok && right_ok) use_left = (x - a) <= (b - x);
  if (!left_ok && !right_ok) {
    // Both ends of the panel are edges or divergent; integrate robustly.
    if (std::isfinite(gs[i])) {
      return gs[i] + integrate([this](double t) { return slope(t); }, a, x, m.cfg).value;
    }
    if (std::isfinite(gs[i + 1])) {
      return gs[i + 1] - integrate([this](double t) { return slope(t); }, x, b, m.cfg).value;
    }
    return gs[i];
  }
  return use_left ? gs[i] + segment(a, x, m.cfg) : gs[i + 1] - segment(x, b, m.cfg);
}

double YMap::numeric_inverse(const Numeric& m, double g) const {
  const std::vector<double>& xs = m.xs;
  const std::vector<double>& gs = m.gs;
  const auto it = std::upper_bound(gs.begin(), gs.end(), g);
  if (it == gs.begin()) return xs.front();
  if (it == gs.end()) return xs.back();
  const std::size_t i = static_cast<std::size_t>(it - gs.begin()) - 1;
  if (gs[i] == g) return xs[i];

  double lo = xs[i];
  double hi = xs[i + 1];
  double x = 0.5 * (lo + hi);
  if (std::isfinite(gs[i + 1]) && gs[i + 1] > gs[i]) {
    x = lo + (hi - lo) * (g - gs[i]) / (gs[i + 1] - gs[i]);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double f = numeric_forward(m, x) - g;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double d = slope(x);
    double next = x - f / d;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double tol = kNewtonTol * (1.0 + std::abs(x));
    if (std::abs(next - x) <= tol || hi - lo <= tol) return next;
    x = next;
  }
  return x;
}

YMap y_map(const Density& d, double alpha, const QuadratureConfig& cfg,
           std::optional<double> anchor, bool force_numeric) {
  cfg.validate();
  if (!std::isfinite(alpha)) throw Error(Errc::InvalidArgument, "alpha must be finite");
  const Support& s = d.support();
  const double x0 = anchor.value_or(default_anchor(s));
  if (!std::isfinite(x0) || !s.contains(x0)) {
    throw Error(Errc::InvalidArgument, "anchor must be a finite point of the support");
  }

  YMap m(std::make_shared<const Density>(d), alpha, x0);

  if (!force_numeric) {
    if (alpha == 1.0) {
      m.impl_ = YMap::Identity{};
      m.target_ = s;
      return m;
    }
    if (const auto* u = d.as<family::Uniform>()) {
      const double k = std::pow(u->width, alpha - 1.0);
      YMap::Linear lin{{s.lower(), s.upper()}, {k * (s.lower() - x0), k * (s.upper() - x0)}};
      m.target_ = Support(x0 + lin.ys.front(), x0 + lin.ys.back());
      m.impl_ = std::move(lin);
      return m;
    }
    if (const auto* p = d.as<family::PiecewiseConstant>()) {
      YMap::Linear lin;
      lin.xs.push_back(p->left);
      lin.ys.push_back(0.0);
      for (const Step& st : p->steps) {
        lin.xs.push_back(lin.xs.back() + st.width);
        lin.ys.push_back(lin.ys.back() + st.width * std::pow(st.height, 1.0 - alpha));
      }
      // Re-base so that the anchor maps to itself.
      const auto it = std::upper_bound(lin.xs.begin(), lin.xs.end(), x0);
      std::size_t i = static_cast<std::size_t>(it - lin.xs.begin());
      i = std::clamp<std::size_t>(i, 1, lin.xs.size() - 1) - 1;
      const double g0 = lin.ys[i] + (x0 - lin.xs[i]) * std::pow(p->steps[i].height, 1.0 - alpha);
      for (double& y : lin.ys) y -= g0;
      m.target_ = Support(x0 + lin.ys.front(), x0 + lin.ys.back());
      m.impl_ = std::move(lin);
      return m;
    }
    if (const auto* e = d.as<family::Exponential>()) {
      const double am1 = alpha - 1.0;
      const double g0 = std::pow(e->rate, -alpha) * std::expm1(am1 * e->rate * (x0 - e->left)) / am1;
      const double upper = alpha < 1.0 ? x0 - g0 + std::pow(e->rate, -alpha) / (1.0 - alpha) : kInf;
      m.target_ = Support(x0 - g0, upper);
      m.impl_ = YMap::Exponential{e->rate, e->left, g0};
      return m;
    }
  }

  require_positive_interior(d);

  YMap::Numeric num;
  num.cfg = cfg;
  num.xs = build_nodes(d, x0, cfg.cumulative_nodes);
  const std::vector<double>& xs = num.xs;
  const std::size_t n = xs.size();
  num.gs.assign(n, 0.0);
  const std::size_t i0 =
      static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x0) - xs.begin());

  const auto slope = [&m](double t) { return m.slope(t); };
  auto panel = [&](double a, double b) {
    const bool at_edge = a == s.lower() || b == s.upper();
    const QuadResult r = at_edge ? integrate(slope, a, b, cfg)
                                 : gauss_kronrod(slope, a, b, cfg.abs_tol * 1e-3,
                                                 cfg.rel_tol * 1e-2, cfg.max_subdivisions);
    if (std::isnan(r.value)) transform_failed(a, b, "y-map quadrature produced NaN");
    if (!r.converged && !r.divergent && r.error > 1e-6 * std::abs(r.value)) {
      transform_failed(a, b, "y-map quadrature did not converge");
    }
    return r.value;
  };

  for (std::size_t i = i0 + 1; i < n; ++i) {
    num.gs[i] = std::isinf(num.gs[i - 1]) ? num.gs[i - 1] : num.gs[i - 1] + panel(xs[i - 1], xs[i]);
  }
  for (std::size_t i = i0; i-- > 0;) {
    num.gs[i] = std::isinf(num.gs[i + 1]) ? num.gs[i + 1] : num.gs[i + 1] - panel(xs[i], xs[i + 1]);
  }

  const std::vector<double> bps = breakpoints(d);
  const double scale = length_scale(d);
  double g_lo = num.gs.front();
  double g_hi = num.gs.back();
  if (std::isinf(s.lower())) {
    const QuadResult r = integrate(slope, s.lower(), x0, cfg, bps, scale);
    if (std::isnan(r.value)) transform_failed(s.lower(), x0, "support image is NaN");
    g_lo = -r.value;
  }
  if (std::isinf(s.upper())) {
    const QuadResult r = integrate(slope, x0, s.upper(), cfg, bps, scale);
    if (std::isnan(r.value)) transform_failed(x0, s.upper(), "support image is NaN");
    g_hi = r.value;
  }
  m.target_ = Support(x0 + g_lo, x0 + g_hi);
  m.impl_ = std::move(num);
  return m;
}

}  // namespace descort
