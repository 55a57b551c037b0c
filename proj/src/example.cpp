#include "descort/example.hpp"

#include <cmath>
#include <cstdio>

#include "descort/json_io.hpp"
#include "descort/measures.hpp"
#include "descort/transforms.hpp"

namespace descort {

namespace {

std::string rule_text(const char* kind, double tol) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s %g", kind, tol);
  return buf;
}

double complexity_at(const Density& d, double alpha, const QuadratureConfig& cfg) {
  return lmc_renyi(transform(d, alpha, cfg).base, 1.0, 2.0, cfg);
}

}  // namespace

Density three_step_density() {
  return piecewise({{1.5, 1.0 / 3.0}, {1.0, 1.0 / 3.0}, {0.5, 1.0 / 3.0}});
}

bool matches_quoted(double value, double quoted, int significant) {
  if (!(value > 0.0) || !(quoted > 0.0)) return value == quoted;
  const double e = std::floor(std::log10(value));
  const double f = std::pow(10.0, significant - 1 - e);
  const double rounded = std::round(value * f) / f;
  const double truncated = std::trunc(value * f) / f;
  auto same = [quoted](double v) { return std::abs(v - quoted) <= 1e-9 * quoted; };
  return same(rounded) || same(truncated);
}

std::vector<PublishedCheck> reproduce_example(const QuadratureConfig& cfg) {
  const Density d = three_step_density();
  std::vector<PublishedCheck> out;

  const struct {
    double alpha;
    double value;
  } reduction[] = {{1.0, 1.06923}, {0.5, 1.01818}, {0.25, 1.00468}, {0.1, 1.00076}};
  for (const auto& r : reduction) {
    const double c = complexity_at(d, r.alpha, cfg);
    out.push_back({"C(alpha=" + format_number(r.alpha) + ")", c, r.value, rule_text("abs", 5e-5),
                   std::abs(c - r.value) <= 5e-5});
  }

  const struct {
    double alpha;
    double value;
  } increase[] = {{2.0, 1.25988}, {4.0, 2.02809}, {10.0, 12.1843}};
  for (const auto& r : increase) {
    const double c = complexity_at(d, r.alpha, cfg);
    out.push_back({"C(alpha=" + format_number(r.alpha) + ")", c, r.value, rule_text("rel", 5e-4),
                   std::abs(c - r.value) <= 5e-4 * r.value});
  }

  const double c100 = complexity_at(d, 100.0, cfg);
  out.push_back({"C(alpha=100)", c100, 3e13, "within [2e13, 4e13]", c100 >= 2e13 && c100 <= 4e13});

  const double c0 = complexity_at(d, 0.0, cfg);
  out.push_back({"C(alpha=0)", c0, 1.0, "exact", c0 == 1.0});

  const struct {
    const char* name;
    double alpha;
    int step;
    bool width;
    double quoted;
    int significant;
  } geometry[] = {
      {"w1(alpha=10)", 10.0, 0, true, 0.008, 1},   {"h1(alpha=10)", 10.0, 0, false, 57.0, 2},
      {"w2(alpha=10)", 10.0, 1, true, 0.03, 1},    {"w3(alpha=10)", 10.0, 2, true, 170.0, 2},
      {"h3(alpha=10)", 10.0, 2, false, 0.001, 1},  {"h1(alpha=100)", 100.0, 0, false, 4e17, 1},
      {"h2(alpha=100)", 100.0, 1, false, 1.0, 1},  {"h3(alpha=100)", 100.0, 2, false, 7e-31, 1},
  };
  for (const auto& g : geometry) {
    const Density t = transform(d, g.alpha, cfg).base;
    const Step& s = t.as<family::PiecewiseConstant>()->steps[static_cast<std::size_t>(g.step)];
    const double v = g.width ? s.width : s.height;
    out.push_back({g.name, v, g.quoted,
                   "quoted to " + std::to_string(g.significant) + " significant digit(s)",
                   matches_quoted(v, g.quoted, g.significant)});
  }
  return out;
}

}  // namespace descort
