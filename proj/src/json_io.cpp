#include "descort/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "descort/error.hpp"

namespace descort {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) { throw Error(Errc::Schema, what); }

double field(const json& j, const char* name, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(name)) {
    if (fallback) return *fallback;
    schema_error(std::string("missing field \"") + name + "\"");
  }
  try {
    return number_from_json(j.at(name));
  } catch (const Error&) {
    schema_error(std::string("field \"") + name + "\" must be a number");
  }
}

void warn_renormalized(std::ostream* warnings, const char* what, double mass) {
  if (warnings) {
    *warnings << "warning: " << what << " integrates to " << format_number(mass)
              << "; renormalized\n";
  }
}

void check_renormalizable(double mass, const char* what) {
  if (!(std::abs(mass - 1.0) <= kRenormalizeTolerance)) {
    throw Error(Errc::NonNormalized,
                std::string(what) + " integrates to " + format_number(mass));
  }
}

Density parse_piecewise(const json& j, std::ostream* warnings) {
  if (!j.contains("steps") || !j.at("steps").is_array() || j.at("steps").empty()) {
    schema_error("piecewise density needs a non-empty \"steps\" array");
  }
  std::vector<Step> steps;
  for (const json& s : j.at("steps")) {
    if (!s.is_object()) schema_error("each step must be an object {height, width}");
    steps.push_back({field(s, "height"), field(s, "width")});
  }
  const double left = field(j, "left", 0.0);
  double mass = 0.0;
  for (const Step& s : steps) mass += s.height * s.width;
  if (std::abs(mass - 1.0) > 100.0 * QuadratureConfig{}.rel_tol) {
    check_renormalizable(mass, "piecewise density");
    for (Step& s : steps) s.height /= mass;
    warn_renormalized(warnings, "piecewise density", mass);
  }
  return piecewise(std::move(steps), left);
}

Density parse_tabulated(const json& j, std::ostream* warnings) {
  if (!j.contains("points") || !j.at("points").is_array()) {
    schema_error("tabulated density needs a \"points\" array");
  }
  std::vector<std::pair<double, double>> pts;
  for (const json& p : j.at("points")) {
    if (!p.is_array() || p.size() != 2) schema_error("each point must be a pair [x, value]");
    try {
      pts.emplace_back(number_from_json(p[0]), number_from_json(p[1]));
    } catch (const Error&) {
      schema_error("tabulated points must be numbers");
    }
  }
  if (pts.size() < 2) schema_error("tabulated density needs at least two points");
  double mass = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    mass += 0.5 * (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second);
  }
  if (std::abs(mass - 1.0) > 100.0 * QuadratureConfig{}.rel_tol) {
    check_renormalizable(mass, "tabulated density");
    for (auto& p : pts) p.second /= mass;
    warn_renormalized(warnings, "tabulated density", mass);
  }
  return tabulated(pts);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "+inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0.0 ? "+inf" : "-inf";
  return std::strtod(format_number(v).c_str(), nullptr);
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw Error(Errc::Schema, "expected a number");
}

Density density_from_json(const json& j, std::ostream* warnings) {
  if (!j.is_object()) schema_error("density must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    schema_error("density needs a string \"kind\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "piecewise") return parse_piecewise(j, warnings);
    if (kind == "tabulated") return parse_tabulated(j, warnings);
    if (kind == "uniform") return uniform(field(j, "a"), field(j, "x0", 0.0));
    if (kind == "exponential") return exponential(field(j, "rate", 1.0), field(j, "left", 0.0));
    if (kind == "qexp") {
      const double q = field(j, "q");
      if (!(q < 2.0)) schema_error("qexp input needs q < 2");
      return qexponential(q, field(j, "scale", 1.0), field(j, "left", 0.0));
    }
    if (kind == "powerlaw") return power_law_tail(field(j, "beta"), field(j, "onset", 1.0));
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidArgument) schema_error(e.what());
    throw;
  }
  schema_error("unknown density kind \"" + kind + "\"");
}

Density load_density(const std::string& path, std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) schema_error("cannot open density file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    schema_error(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return density_from_json(j, warnings);
}

std::vector<double> curve_grid(const Density& d, int samples, const QuadratureConfig& cfg) {
  if (samples < 2) throw Error(Errc::InvalidArgument, "need at least two samples");
  const Support& s = d.support();
  const double lo = std::isfinite(s.lower()) ? s.lower() : quantile(d, 1e-6, cfg);
  const double hi = std::isfinite(s.upper()) ? s.upper() : quantile(d, 1.0 - 1e-6, cfg);
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(samples) + 8);
  for (int i = 0; i < samples; ++i) {
    xs.push_back(i == samples - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (samples - 1));
  }
  for (double b : breakpoints(d)) {
    if (b > lo && b < hi) xs.push_back(b);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

json density_to_json(const Density& d, int samples, const QuadratureConfig& cfg) {
  json j;
  if (const auto* u = d.as<family::Uniform>()) {
    j = {{"kind", "uniform"}, {"a", json_number(u->width)}, {"x0", json_number(u->left)}};
  } else if (const auto* p = d.as<family::PiecewiseConstant>()) {
    json steps = json::array();
    for (const Step& s : p->steps) {
      steps.push_back({{"height", json_number(s.height)}, {"width", json_number(s.width)}});
    }
    j = {{"kind", "piecewise"}, {"steps", steps}, {"left", json_number(p->left)}};
  } else if (const auto* e = d.as<family::Exponential>()) {
    j = {{"kind", "exponential"}, {"rate", json_number(e->rate)}, {"left", json_number(e->left)}};
  } else if (const auto* e = d.as<family::QExponential>()) {
    j = {{"kind", "qexp"},
         {"q", json_number(e->q)},
         {"scale", json_number(e->scale)},
         {"left", json_number(e->left)}};
  } else if (const auto* p = d.as<family::PowerLawTail>()) {
    j = {{"kind", "powerlaw"}, {"beta", json_number(p->beta)}, {"onset", json_number(p->onset)}};
  } else {
    const family::Tabulated* t = d.as<family::Tabulated>();
    json pts = json::array();
    if (t) {
      for (std::size_t i = 0; i < t->x.size(); ++i) {
        pts.push_back({json_number(t->x[i]), json_number(t->value[i])});
      }
    } else {
      for (double x : curve_grid(d, samples, cfg)) {
        const double v = evaluate(d, x);
        if (std::isfinite(v)) pts.push_back({json_number(x), json_number(v)});
      }
    }
    j = {{"kind", "tabulated"}, {"points", pts}};
    if (!t) j["sampled_from"] = d.kind_name();
  }
  return j;
}

json transformed_to_json(const TransformedDensity& td, int samples, const QuadratureConfig& cfg) {
  json j = density_to_json(td.base, samples, cfg);
  j["provenance"] = {{"source_kind", td.provenance.source_kind},
                     {"alpha", json_number(td.provenance.alpha)},
                     {"anchor", json_number(td.provenance.anchor)}};
  if (td.beyond_standard_range) j["beyond_standard_range"] = true;
  return j;
}

json report_to_json(const MeasureReport& r) {
  return {{"q", json_number(r.q)},
          {"W_q", json_number(r.W_q)},
          {"R_q", json_number(r.R_q)},
          {"T_q", json_number(r.T_q)},
          {"S", json_number(r.S)},
          {"error_estimate", json_number(r.error_estimate)}};
}

json tail_fit_to_json(const TailFit& f) {
  return {{"exponent", json_number(f.exponent_estimate)},
          {"r2", json_number(f.r_squared)},
          {"window", {json_number(f.x_lo), json_number(f.x_hi)}}};
}

}  // namespace descort
