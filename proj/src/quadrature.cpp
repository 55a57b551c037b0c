#include "descort/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "descort/error.hpp"

namespace descort {

namespace {

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss
// weights (QUADPACK qk15 tables).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

Panel qk15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};

  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }

  const double result = resk * half;
  resabs *= abs_half;
  resasc *= abs_half;
  double abserr = std::abs((resk - resg) * half);
  if (resasc != 0.0 && abserr != 0.0) {
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  }
  if (resabs > kTiny / (50.0 * kEps)) {
    abserr = std::max(kEps * 50.0 * resabs, abserr);
  }
  if (!std::isfinite(result)) abserr = std::numeric_limits<double>::infinity();
  return {a, b, result, abserr};
}

struct SeriesResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  bool divergent = false;
};

// Sums f over the panels returned by bounds(k), k = 0, 1, ..., which shrink
// towards a finite edge or grow towards infinity. See integrate().
template <class Bounds>
SeriesResult sum_panels(const Integrand& f, Bounds bounds, const QuadratureConfig& cfg) {
  constexpr int kMaxPanels = 1100;
  SeriesResult out;
  double c_prev = 0.0;
  double c_prev2 = 0.0;
  int rising = 0;

  for (int k = 0; k < kMaxPanels; ++k) {
    const auto [lo, hi] = bounds(k);
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) break;

    const QuadResult p =
        gauss_kronrod(f, lo, hi, cfg.abs_tol * 1e-3, cfg.rel_tol * 0.1, cfg.max_subdivisions);
    if (std::isnan(p.value)) {
      out.value = p.value;
      out.converged = false;
      return out;
    }
    if (std::isinf(p.value)) {
      out.value = p.value;
      out.error = std::numeric_limits<double>::infinity();
      out.divergent = true;
      return out;
    }
    out.value += p.value;
    out.error += p.error;
    out.converged = out.converged && p.converged;

    const double c = p.value;
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
    if (k >= 2) {
      // Relative only: panels that are all negligible in absolute terms may
      // not have reached the mass yet.
      const double rel_target = cfg.rel_tol * std::abs(out.value);
      if (std::abs(c) <= 0.01 * rel_target && std::abs(c_prev) <= 0.1 * rel_target) {
        out.error += std::abs(c);
        return out;
      }
      if (c_prev != 0.0 && c_prev2 != 0.0) {
        const double r = c / c_prev;
        const double rp = c_prev / c_prev2;
        // Divergence shows as a steady panel ratio >= 1; a transient rise
        // only means the first panels were wider than the integrand's scale.
        if (r >= 1.0 - 1e-9 && rp >= 1.0 - 1e-9 && std::abs(r - rp) <= 1e-3 * r) {
          if (++rising >= 3) {
            out.value = std::copysign(std::numeric_limits<double>::infinity(), c);
            out.error = std::numeric_limits<double>::infinity();
            out.divergent = true;
            return out;
          }
        } else {
          rising = 0;
        }
        if (r > 0.0 && r < 1.0 - 1e-9 && rp > 0.0) {
          const double rest = c * r / (1.0 - r);
          const double rest_err = 2.0 * std::abs(rest) * std::abs(r - rp) / (1.0 - r);
          if (rest_err <= 0.1 * target) {
            out.value += rest;
            out.error += rest_err;
            return out;
          }
        }
      }
    }
    c_prev2 = c_prev;
    c_prev = c;
  }

  // Resolution exhausted: accept only if the last panel no longer matters.
  const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  if (std::abs(c_prev) > target) {
    out.value = std::copysign(std::numeric_limits<double>::infinity(), c_prev);
    out.error = std::numeric_limits<double>::infinity();
    out.divergent = true;
  }
  return out;
}

// Integral over [min(e, m), max(e, m)] with panels halving towards e.
SeriesResult edge_sum(const Integrand& f, double e, double m, const QuadratureConfig& cfg) {
  const double d = m - e;
  return sum_panels(
      f,
      [=](int k) {
        const double p0 = e + std::ldexp(d, -k);
        const double p1 = e + std::ldexp(d, -(k + 1));
        return std::pair{std::min(p0, p1), std::max(p0, p1)};
      },
      cfg);
}

// Integral over [start, +inf) (dir > 0) or (-inf, start] (dir < 0).
SeriesResult tail_sum(const Integrand& f, double start, int dir, double scale,
                      const QuadratureConfig& cfg) {
  return sum_panels(
      f,
      [=](int k) {
        const double p0 = start + dir * std::ldexp(scale, k) - dir * scale;
        const double p1 = start + dir * std::ldexp(scale, k + 1) - dir * scale;
        return std::pair{std::min(p0, p1), std::max(p0, p1)};
      },
      cfg);
}

void accumulate(QuadResult& total, const SeriesResult& part) {
  if (total.divergent) return;
  if (part.divergent) {
    total.value = part.value;
    total.error = part.error;
    total.divergent = true;
    return;
  }
  total.value += part.value;
  total.error += part.error;
  total.converged = total.converged && part.converged && !std::isnan(part.value);
}

void accumulate(QuadResult& total, const QuadResult& part) {
  accumulate(total, SeriesResult{part.value, part.error, part.converged, part.divergent});
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(Errc::InvalidArgument, "quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1 || cumulative_nodes < 16) {
    throw Error(Errc::InvalidArgument, "quadrature limits too small");
  }
}

QuadratureConfig QuadratureConfig::from_environment() {
  QuadratureConfig cfg;
  if (const char* env = std::getenv("DESCORT_RELTOL"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      throw Error(Errc::InvalidArgument, std::string("bad DESCORT_RELTOL: ") + env);
    }
    cfg.rel_tol = v;
  }
  return cfg;
}

QuadResult gauss_kronrod(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                         int max_subdivisions) {
  QuadResult out;
  if (a == b) return out;

  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  Panel first = qk15(f, a, b);
  double value = first.value;
  double error = first.error;
  heap.push(first);
  if (!std::isfinite(value)) {
    out.value = value;
    out.error = error;
    out.converged = !std::isnan(value);
    out.divergent = std::isinf(value);
    return out;
  }

  int subdivisions = 1;
  bool exhausted = false;
  while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (subdivisions >= max_subdivisions) {
      exhausted = true;
      break;
    }
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b) ||
        std::abs(worst.b - worst.a) <= 4.0 * kEps * std::max(std::abs(mid), kTiny)) {
      exhausted = true;
      break;
    }
    heap.pop();
    const Panel left = qk15(f, worst.a, mid);
    const Panel right = qk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
    if (!std::isfinite(left.value) || !std::isfinite(right.value)) break;
  }

  // Re-sum to shed the drift of the running totals.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  out.divergent = std::isinf(value);
  out.converged = !std::isnan(value) && !out.divergent &&
                  (!exhausted || error <= std::max(abs_tol, rel_tol * std::abs(value)));
  return out;
}

QuadResult integrate(const Integrand& f, double lo, double hi, const QuadratureConfig& cfg,
                     std::span<const double> breakpoints, double scale) {
  if (lo == hi) return {};
  if (lo > hi) {
    QuadResult r = integrate(f, hi, lo, cfg, breakpoints, scale);
    r.value = -r.value;
    return r;
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;

  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi && std::isfinite(b)) cuts.push_back(b);
  }
  if (std::isinf(lo) && std::isinf(hi) && cuts.size() == 1) cuts.push_back(0.0);
  cuts.push_back(hi);
  std::sort(cuts.begin() + 1, cuts.end() - 1);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  QuadResult total;
  const std::size_t n = cuts.size() - 1;
  for (std::size_t i = 0; i < n && !total.divergent; ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const bool outer_left = i == 0;
    const bool outer_right = i + 1 == n;

    if (std::isinf(b)) {
      const double core_end = a + scale;
      if (outer_left) {
        accumulate(total, edge_sum(f, a, core_end, cfg));
      } else {
        accumulate(total,
                   gauss_kronrod(f, a, core_end, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions));
      }
      accumulate(total, tail_sum(f, core_end, +1, scale, cfg));
    } else if (std::isinf(a)) {
      const double core_start = b - scale;
      if (outer_right) {
        accumulate(total, edge_sum(f, b, core_start, cfg));
      } else {
        accumulate(total, gauss_kronrod(f, core_start, b, cfg.abs_tol, cfg.rel_tol,
                                        cfg.max_subdivisions));
      }
      accumulate(total, tail_sum(f, core_start, -1, scale, cfg));
    } else if (outer_left && outer_right) {
      const double m = 0.5 * (a + b);
      accumulate(total, edge_sum(f, a, m, cfg));
      accumulate(total, edge_sum(f, b, m, cfg));
    } else if (outer_left) {
      accumulate(total, edge_sum(f, a, b, cfg));
    } else if (outer_right) {
      accumulate(total, edge_sum(f, b, a, cfg));
    } else {
      accumulate(total, gauss_kronrod(f, a, b, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions));
    }
  }
  return total;
}

const char* to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonNormalized: return "NonNormalized";
    case Errc::DivergentMap: return "DivergentMap";
    case Errc::TransformFailed: return "TransformFailed";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::DivergentMoment: return "DivergentMoment";
    case Errc::Divergent: return "Divergent";
    case Errc::Unsupported: return "Unsupported";
    case Errc::InvalidBeta: return "InvalidBeta";
    case Errc::CompactSupport: return "CompactSupport";
    case Errc::PoorFit: return "PoorFit";
    case Errc::Schema: return "Schema";
  }
  return "Unknown";
}

}  // namespace descort
