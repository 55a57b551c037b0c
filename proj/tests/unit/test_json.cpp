#include <doctest.h>

#include <cmath>
#include <sstream>

#include "descort/density.hpp"
#include "descort/example.hpp"
#include "descort/json_io.hpp"
#include "descort/transforms.hpp"
#include "util.hpp"

using namespace descort;
using nlohmann::json;

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(3.3166493e13) == "3.3166493e+13");
  CHECK(format_number(kInf) == "+inf");
  CHECK(format_number(-kInf) == "-inf");
  CHECK(json_number(kInf) == "+inf");
  CHECK(json_number(NAN).is_null());
  CHECK(json_number(1.0 / 3.0).get<double>() == 0.333333333);
  CHECK(number_from_json(json("inf")) == kInf);
  CHECK(number_from_json(json("-inf")) == -kInf);
  CHECK(number_from_json(json(2.5)) == 2.5);
  CHECK(test::error_code([] { number_from_json(json("two")); }) == Errc::Schema);
}

TEST_CASE("parsing every schema kind") {
  const Density p = load_density(test::data_file("three_step.json"));
  REQUIRE(p.as<family::PiecewiseConstant>() != nullptr);
  CHECK(evaluate(p, 0.1) == doctest::Approx(1.5));
  const Density e = load_density(test::data_file("exponential.json"));
  CHECK(e.as<family::Exponential>()->rate == 2.0);
  const Density q = load_density(test::data_file("qexp.json"));
  CHECK(q.as<family::QExponential>()->q == 1.5);
  const Density pl = load_density(test::data_file("powerlaw.json"));
  CHECK(pl.as<family::PowerLawTail>()->beta == 3.0);
  const Density t = load_density(test::data_file("triangle.json"));
  CHECK(t.as<family::Tabulated>() != nullptr);
  CHECK(density_from_json(json{{"kind", "uniform"}, {"a", 2.0}, {"x0", 1.0}}).support() ==
        Support(1.0, 3.0));
}

TEST_CASE("small mass deviations renormalize with a warning") {
  std::ostringstream warn;
  const Density d = load_density(test::data_file("three_step_rounded.json"), &warn);
  CHECK(total_probability(d) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(warn.str().find("renormaliz") != std::string::npos);
  std::ostringstream quiet;
  load_density(test::data_file("three_step.json"), &quiet);
  CHECK(quiet.str().empty());
}

TEST_CASE("schema failures") {
  CHECK(test::error_code([] { load_density(test::data_file("missing_kind.json")); }) ==
        Errc::Schema);
  CHECK(test::error_code([] { load_density(test::data_file("malformed.json")); }) ==
        Errc::Schema);
  CHECK(test::error_code([] { load_density(test::data_file("no_such_file.json")); }) ==
        Errc::Schema);
  CHECK(test::error_code([] { load_density(test::data_file("not_normalized.json")); }) ==
        Errc::NonNormalized);
  CHECK(test::error_code([] { density_from_json(json{{"kind", "qexp"}, {"q", 2.5}}); }) ==
        Errc::Schema);
  CHECK(test::error_code([] { density_from_json(json{{"kind", "cauchy"}}); }) == Errc::Schema);
  CHECK(test::error_code([] { density_from_json(json{{"kind", "uniform"}, {"a", "wide"}}); }) ==
        Errc::Schema);
  CHECK(test::error_code([] { density_from_json(json{{"kind", "uniform"}, {"a", -1.0}}); }) ==
        Errc::Schema);
  CHECK(test::error_code([] {
          density_from_json(json{{"kind", "tabulated"}, {"points", {{0.0, 1.0}}}});
        }) == Errc::Schema);
}

TEST_CASE("serialization round trip") {
  for (const Density& d : {three_step_density(), exponential(2.0), qexponential(0.7, 1.5),
                           power_law_tail(2.5, 0.5), uniform(2.0, -1.0)}) {
    const Density back = density_from_json(density_to_json(d));
    CHECK(back.kind_name() == d.kind_name());
    for (double x : {0.1, 0.4, 0.9, 1.7}) {
      CHECK(evaluate(back, x) == doctest::Approx(evaluate(d, x)).epsilon(1e-8));
    }
  }
  const TransformedDensity td = transform(power_law_tail(3.0, 1.0), 2.0);
  const json j = transformed_to_json(td, 65);
  CHECK(j.at("kind") == "tabulated");
  CHECK(j.at("sampled_from") == "transformed");
  CHECK(j.at("provenance").at("alpha") == 2.0);
  CHECK(j.at("provenance").at("source_kind") == "powerlaw");
  CHECK(j.at("points").size() >= 65);
  CHECK_FALSE(j.contains("beyond_standard_range"));
  CHECK(transformed_to_json(transform(qexponential(1.5), -1.0)).at("beyond_standard_range") ==
        true);
}

TEST_CASE("curve grids") {
  const std::vector<double> g = curve_grid(three_step_density(), 11);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
  CHECK(std::find(g.begin(), g.end(), 1.0 / 3.0) != g.end());
  const std::vector<double> e = curve_grid(exponential(), 101);
  CHECK(e.size() == 101);
  CHECK(e.front() == doctest::Approx(quantile(exponential(), 1e-6)));
  CHECK(e.back() == doctest::Approx(quantile(exponential(), 1.0 - 1e-6)));
}

TEST_CASE("report serialization") {
  MeasureReport r;
  r.W_q = kInf;
  const json j = report_to_json(r);
  CHECK(j.at("W_q") == "+inf");
  TailFit f{2.0, 0.999, 1.0, 1000.0};
  const json t = tail_fit_to_json(f);
  CHECK(t.at("exponent") == 2.0);
  CHECK(t.at("window").size() == 2);
}
