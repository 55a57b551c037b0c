#include "descort/measures.hpp"

#include <cmath>
#include <optional>

#include "descort/error.hpp"
#include "descort/ymap.hpp"

namespace descort {

namespace {

std::optional<double> known_critical_q(const Density& d) {
  try {
    return critical_q(d);
  } catch (const Error& e) {
    if (e.code() != Errc::Unsupported) throw;
    return std::nullopt;
  }
}

double xlogx_neg(double r) { return r > 0.0 ? -r * std::log(r) : 0.0; }

std::array<double, 4> raw_from_cumulants(const std::array<double, 4>& k) {
  const double k1 = k[0], k2 = k[1], k3 = k[2], k4 = k[3];
  return {k1, k2 + k1 * k1, k3 + 3.0 * k2 * k1 + k1 * k1 * k1,
          k4 + 4.0 * k3 * k1 + 3.0 * k2 * k2 + 6.0 * k2 * k1 * k1 + k1 * k1 * k1 * k1};
}

// Cumulants from the mean and the central moments c2..c4 of log rho.
std::array<double, 4> cumulants_from_central(double m1, double c2, double c3, double c4) {
  return {m1, c2, c3, c4 - 3.0 * c2 * c2};
}

double quad_value(const QuadResult& r, const char* what) {
  if (r.divergent || !std::isfinite(r.value)) throw Error(Errc::Divergent, what);
  return r.value;
}

}  // namespace

QuadResult entropic_moment_estimate(const Density& d, double q, const QuadratureConfig& cfg) {
  if (!std::isfinite(q)) throw Error(Errc::InvalidArgument, "entropic parameter must be finite");
  if (q == 1.0) return {1.0, 0.0};

  if (const auto* u = d.as<family::Uniform>()) return {std::pow(u->width, 1.0 - q), 0.0};
  if (const auto* p = d.as<family::PiecewiseConstant>()) {
    double w = 0.0;
    for (const Step& s : p->steps) w += s.width * std::pow(s.height, q);
    return {w, 0.0};
  }
  if (const auto* e = d.as<family::Exponential>()) {
    return {q > 0.0 ? std::pow(e->rate, q - 1.0) / q : kInf, 0.0};
  }
  if (const auto* e = d.as<family::QExponential>()) {
    const double shift = e->q - 1.0;
    const bool finite = e->q < 2.0 ? q > shift : q < shift;
    if (!finite) return {kInf, 0.0, true, true};
    return {std::pow(e->scale, q - 1.0) * (2.0 - e->q) / (q - shift), 0.0};
  }
  if (const auto* p = d.as<family::PowerLawTail>()) {
    const double bq = p->beta * q;
    if (!(bq > 1.0)) return {kInf, 0.0, true, true};
    return {std::pow(p->plateau(), q) * p->onset * bq / (bq - 1.0), 0.0};
  }
  if (const auto* s = d.as<family::Scaled>()) {
    QuadResult r = entropic_moment_estimate(*s->source, q, cfg);
    const double f = std::pow(s->factor, q - 1.0);
    r.value *= f;
    r.error *= f;
    return r;
  }
  if (const auto* e = d.as<family::Escort>()) {
    QuadResult r = entropic_moment_estimate(*e->source, q * e->q, cfg);
    const double f = std::pow(e->moment, -q);
    r.value *= f;
    r.error *= f;
    return r;
  }

  if (const auto qc = known_critical_q(d); qc && q <= *qc) return {kInf, 0.0, true, true};
  QuadResult r = integrate_functional(d, [q](double v) { return std::pow(v, q); }, cfg);
  if (r.divergent || std::isinf(r.value)) return {kInf, r.error, r.converged, true};
  if (std::isnan(r.value)) throw Error(Errc::Divergent, "entropic moment quadrature produced NaN");
  return r;
}

double entropic_moment(const Density& d, double q, const QuadratureConfig& cfg) {
  return entropic_moment_estimate(d, q, cfg).value;
}

QuadResult shannon_entropy_estimate(const Density& d, const QuadratureConfig& cfg) {
  if (const auto* u = d.as<family::Uniform>()) return {std::log(u->width), 0.0};
  if (const auto* p = d.as<family::PiecewiseConstant>()) {
    double s = 0.0;
    for (const Step& st : p->steps) s += st.width * xlogx_neg(st.height);
    return {s, 0.0};
  }
  if (const auto* e = d.as<family::Exponential>()) return {1.0 - std::log(e->rate), 0.0};
  if (const auto* e = d.as<family::QExponential>()) {
    return {1.0 / (2.0 - e->q) - std::log(e->scale), 0.0};
  }
  if (const auto* s = d.as<family::Scaled>()) {
    QuadResult r = shannon_entropy_estimate(*s->source, cfg);
    r.value -= std::log(s->factor);
    return r;
  }
  const QuadResult r = integrate_functional(d, xlogx_neg, cfg);
  quad_value(r, "Shannon entropy integral does not converge");
  return r;
}

double shannon_entropy(const Density& d, const QuadratureConfig& cfg) {
  return shannon_entropy_estimate(d, cfg).value;
}

double renyi_entropy(const Density& d, double q, const QuadratureConfig& cfg) {
  if (q == 1.0) return shannon_entropy(d, cfg);
  return std::log(entropic_moment(d, q, cfg)) / (1.0 - q);
}

double tsallis_entropy(const Density& d, double q, const QuadratureConfig& cfg) {
  if (q == 1.0) return shannon_entropy(d, cfg);
  return (1.0 - entropic_moment(d, q, cfg)) / (q - 1.0);
}

double rescale_q(double q, double alpha) { return 1.0 + alpha * (q - 1.0); }

double lmc_renyi(const Density& d, double p, double q, const QuadratureConfig& cfg) {
  if (!(p < q)) throw Error(Errc::InvalidArgument, "LMC-Renyi complexity needs p < q");
  if (const auto qc = known_critical_q(d); qc && p <= *qc) {
    throw Error(Errc::DivergentMoment, "W_p diverges: p is at or below the critical parameter");
  }
  const double rp = renyi_entropy(d, p, cfg);
  const double rq = renyi_entropy(d, q, cfg);
  if (!std::isfinite(rp) || !std::isfinite(rq)) {
    throw Error(Errc::DivergentMoment, "Renyi entropy is not finite");
  }
  return std::exp(rp - rq);
}

double lmc_sup(const Density& d, double p, const QuadratureConfig& cfg) {
  const double top = sup_value(d);
  if (p == 1.0) return top * std::exp(shannon_entropy(d, cfg));
  const double w = entropic_moment(d, p, cfg);
  if (!std::isfinite(w)) throw Error(Errc::DivergentMoment, "W_p is infinite");
  return top / std::pow(w, 1.0 / (p - 1.0));
}

CumulantSet entropic_cumulants(const Density& d, const QuadratureConfig& cfg) {
  std::array<double, 4> k{};
  if (const auto* u = d.as<family::Uniform>()) {
    k = {-std::log(u->width), 0.0, 0.0, 0.0};
  } else if (const auto* p = d.as<family::PiecewiseConstant>()) {
    double m1 = 0.0;
    for (const Step& s : p->steps) m1 += s.width * s.height * std::log(s.height);
    double c[5] = {};
    for (const Step& s : p->steps) {
      const double dev = std::log(s.height) - m1;
      const double mass = s.width * s.height;
      c[2] += mass * dev * dev;
      c[3] += mass * dev * dev * dev;
      c[4] += mass * dev * dev * dev * dev;
    }
    k = cumulants_from_central(m1, c[2], c[3], c[4]);
  } else if (const auto* e = d.as<family::Exponential>()) {
    k = {std::log(e->rate) - 1.0, 1.0, -2.0, 6.0};
  } else if (const auto* e = d.as<family::QExponential>()) {
    const double g = 1.0 / (2.0 - e->q);
    k = {std::log(e->scale) - g, g * g, -2.0 * g * g * g, 6.0 * g * g * g * g};
  } else if (const auto* s = d.as<family::Scaled>()) {
    k = entropic_cumulants(*s->source, cfg).values;
    k[0] += std::log(s->factor);
  } else {
    const double m1 = quad_value(
        integrate_functional(d, [](double r) { return r > 0.0 ? r * std::log(r) : 0.0; }, cfg),
        "<log rho> does not converge");
    double c[5] = {};
    for (int n = 2; n <= 4; ++n) {
      c[n] = quad_value(integrate_functional(
                            d,
                            [m1, n](double r) {
                              return r > 0.0 ? r * std::pow(std::log(r) - m1, n) : 0.0;
                            },
                            cfg),
                        "central log-moment does not converge");
    }
    k = cumulants_from_central(m1, c[2], c[3], c[4]);
  }
  return {k, raw_from_cumulants(k)};
}

double cumulant_series_complexity(const Density& d, double p, double q, int n_max,
                                  const QuadratureConfig& cfg) {
  if (!(p < q)) throw Error(Errc::InvalidArgument, "cumulant series needs p < q");
  if (n_max < 1 || n_max > 4) throw Error(Errc::InvalidArgument, "n_max must be in [1, 4]");
  const CumulantSet ks = entropic_cumulants(d, cfg);
  double sum = 0.0;
  double factorial = 1.0;
  for (int n = 1; n <= n_max - 1; ++n) {
    factorial *= n + 1;
    sum += ks.values[n] * (std::pow(q - 1.0, n) - std::pow(p - 1.0, n)) / factorial;
  }
  return std::exp(sum);
}

double critical_q(const Density& d) {
  if (d.as<family::Uniform>() || d.as<family::PiecewiseConstant>()) return -kInf;
  if (d.as<family::Exponential>()) return 0.0;
  if (const auto* e = d.as<family::QExponential>()) {
    if (e->q > 2.0) {
      throw Error(Errc::Unsupported, "q-exponential with q > 2 has moments finite only below q - 1");
    }
    return e->q - 1.0;
  }
  if (const auto* p = d.as<family::PowerLawTail>()) return 1.0 / p->beta;
  if (const auto* s = d.as<family::Scaled>()) return critical_q(*s->source);
  if (const auto* n = d.as<family::NumericTransform>()) {
    const double alpha = n->map->alpha();
    if (!(alpha > 0.0)) {
      throw Error(Errc::Unsupported, "negative deformation turns the critical bound into an upper one");
    }
    return 1.0 - (1.0 - critical_q(n->map->source())) / alpha;
  }
  if (const auto* e = d.as<family::Escort>()) {
    if (!(e->q > 0.0)) throw Error(Errc::Unsupported, "escort with q <= 0");
    return critical_q(*e->source) / e->q;
  }
  throw Error(Errc::Unsupported, "tabulated densities carry no tail model");
}

MeasureReport measure_report(const Density& d, double q, const QuadratureConfig& cfg) {
  MeasureReport r;
  r.q = q;
  const QuadResult w = entropic_moment_estimate(d, q, cfg);
  const QuadResult s = shannon_entropy_estimate(d, cfg);
  r.W_q = w.value;
  r.S = s.value;
  if (q == 1.0) {
    r.R_q = r.S;
    r.T_q = r.S;
  } else {
    r.R_q = std::log(r.W_q) / (1.0 - q);
    r.T_q = (1.0 - r.W_q) / (q - 1.0);
  }
  r.error_estimate = std::max(w.error, s.error);
  return r;
}

}  // namespace descort
