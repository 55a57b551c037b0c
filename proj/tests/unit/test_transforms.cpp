#include <doctest.h>

#include <cmath>

#include "descort/density.hpp"
#include "descort/example.hpp"
#include "descort/measures.hpp"
#include "descort/transforms.hpp"
#include "descort/ymap.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace descort;

namespace {

TransformOptions numeric_only() {
  TransformOptions o;
  o.force_numeric = true;
  return o;
}

}  // namespace

TEST_CASE("uniform inputs stay uniform") {
  for (double alpha : {-1.0, 0.5, 2.0, 7.0}) {
    const TransformedDensity td = transform(uniform(2.0, 1.0), alpha);
    const auto* u = td.base.as<family::Uniform>();
    REQUIRE(u != nullptr);
    CHECK(u->width == doctest::Approx(std::pow(2.0, alpha)));
    CHECK(u->left == 1.0);
    CHECK(td.provenance.source_kind == "uniform");
    CHECK(td.provenance.alpha == alpha);
  }
}

TEST_CASE("step geometry follows (h^alpha, w h^(1-alpha))") {
  const oracle::Steps src = oracle::three_steps();
  for (double alpha : {0.1, 0.5, 2.0, 10.0}) {
    const oracle::Steps want = oracle::deform(src, alpha);
    const Density out = transform(three_step_density(), alpha).base;
    const auto* p = out.as<family::PiecewiseConstant>();
    REQUIRE(p != nullptr);
    REQUIRE(p->steps.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(p->steps[i].height == doctest::Approx(want.h[i]).epsilon(1e-14));
      CHECK(p->steps[i].width == doctest::Approx(want.w[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("exponential maps to a q-exponential") {
  for (double alpha : {0.5, 0.75, 2.0, 5.0}) {
    const TransformedDensity td = transform(exponential(3.0), alpha);
    const auto* e = td.base.as<family::QExponential>();
    REQUIRE(e != nullptr);
    CHECK(e->q == doctest::Approx((2.0 * alpha - 1.0) / alpha).epsilon(1e-15));
    CHECK(e->scale == doctest::Approx(std::pow(3.0, alpha)).epsilon(1e-15));
  }
  CHECK(transform(exponential(3.0), 1.0).base.as<family::Exponential>() != nullptr);
}

TEST_CASE("alpha = 0 gives the unit uniform around the anchor") {
  const TransformedDensity at_left = transform(exponential(), 0.0);
  const auto* u = at_left.base.as<family::Uniform>();
  REQUIRE(u != nullptr);
  CHECK(u->width == 1.0);
  CHECK(u->left == 0.0);

  TransformOptions o;
  o.anchor = 1.0;
  const Density collapsed = transform(exponential(), 0.0, {}, o).base;
  const auto* mid = collapsed.as<family::Uniform>();
  REQUIRE(mid != nullptr);
  CHECK(mid->left == doctest::Approx(1.0 - (1.0 - std::exp(-1.0))).epsilon(1e-13));
  CHECK(test::error_code([&] { inverse_transform(transform(exponential(), 0.0)); }) ==
        Errc::NotInvertible);
}

TEST_CASE("the anchor is a fixed point of the y-map") {
  TransformOptions o;
  o.anchor = 0.5;
  const TransformedDensity td = transform(three_step_density(), 3.0, {}, o);
  CHECK(td.provenance.anchor == 0.5);
  const YMap m = y_map(three_step_density(), 3.0, {}, 0.5);
  CHECK(m.forward(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(evaluate(td.base, 0.5 + 1e-9) == doctest::Approx(1.0));
  CHECK(test::error_code([] {
          TransformOptions bad;
          bad.anchor = -1.0;
          transform(exponential(), 2.0, {}, bad);
        }) == Errc::InvalidArgument);
  CHECK(test::error_code([] { transform(exponential(), NAN); }) == Errc::InvalidArgument);
}

TEST_CASE("numeric y-map agrees with the closed maps") {
  for (double alpha : {0.3, 2.0}) {
    const YMap closed = y_map(exponential(), alpha);
    const YMap numeric = y_map(exponential(), alpha, {}, std::nullopt, true);
    CHECK_FALSE(closed.numeric());
    CHECK(numeric.numeric());
    for (double x : {0.0, 0.01, 0.5, 3.0, 20.0}) {
      CHECK(numeric.forward(x) == doctest::Approx(closed.forward(x)).epsilon(1e-11));
      const double y = closed.forward(x);
      CHECK(numeric.forward(numeric.inverse(y)) == doctest::Approx(y).epsilon(1e-11));
      CHECK(numeric.slope(x) == doctest::Approx(std::exp(-(1.0 - alpha) * x)).epsilon(1e-13));
    }
  }
  const Density forced = transform(three_step_density(), 2.0, {}, numeric_only()).base;
  const Density exact = transform(three_step_density(), 2.0).base;
  CHECK(forced.support().upper() == doctest::Approx(exact.support().upper()).epsilon(1e-12));
  for (double y : {0.05, 0.2, 0.5, 0.6, 0.66}) {
    CHECK(evaluate(forced, y) == doctest::Approx(evaluate(exact, y)).epsilon(1e-12));
  }
}

TEST_CASE("y-map edges") {
  const YMap m = y_map(power_law_tail(3.0, 1.0), 0.5);
  CHECK(m.target_support().compact());
  CHECK(test::error_code([&] { m.forward(kInf); }) == Errc::DivergentMap);
  CHECK(m.inverse(m.target_support().upper() + 1.0) == kInf);
  CHECK(m.inverse(-1.0) == 0.0);
  const YMap wide = y_map(power_law_tail(3.0, 1.0), 2.0);
  CHECK(wide.target_support().upper() == kInf);
}

TEST_CASE("numeric transforms stay normalized") {
  for (double alpha : {0.5, 0.8, 1.5, 3.0}) {
    const Density d = transform(power_law_tail(3.0, 1.0), alpha).base;
    CHECK(d.as<family::NumericTransform>() != nullptr);
    CHECK(total_probability(d) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cdf(d, quantile(d, 0.4)) == doctest::Approx(0.4).epsilon(1e-9));
  }
  const Density t = transform(tabulated({{0.0, 0.25}, {1.0, 0.75}, {2.0, 0.25}}), 2.0).base;
  CHECK(total_probability(t) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tabulated densities with interior zeros are rejected") {
  const Density gap = tabulated({{0.0, 0.5}, {1.0, 0.0}, {2.0, 1.0}, {2.5, 0.0}});
  CHECK(test::error_code([&] { transform(gap, 2.0); }) == Errc::InvalidArgument);
}

TEST_CASE("q-exponential parameters after the transform") {
  const TransformedDensity td = transform(qexponential(1.5, 2.0), -1.0);
  const auto* e = td.base.as<family::QExponential>();
  REQUIRE(e != nullptr);
  CHECK(e->q == doctest::Approx(2.5));
  CHECK(e->scale == doctest::Approx(0.5));
  CHECK(td.beyond_standard_range);
  CHECK_FALSE(transform(qexponential(1.5), 2.0).beyond_standard_range);
  CHECK(transform(qexponential(1.5), 0.5).base.as<family::Exponential>() != nullptr);
}

TEST_CASE("inverse transform round trip") {
  const TransformedDensity td = transform(three_step_density(), 4.0);
  const Density restored = inverse_transform(td);
  const auto* p = restored.as<family::PiecewiseConstant>();
  REQUIRE(p != nullptr);
  const oracle::Steps s = oracle::three_steps();
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(p->steps[i].height == doctest::Approx(s.h[i]).epsilon(1e-13));
    CHECK(p->steps[i].width == doctest::Approx(s.w[i]).epsilon(1e-13));
  }
  const TransformedDensity pl = transform(power_law_tail(3.0, 1.0), 2.0);
  const Density back = inverse_transform(pl);
  for (double x : {0.5, 1.5, 4.0}) {
    CHECK(evaluate(back, x) == doctest::Approx(oracle::power_law_pdf(3.0, 1.0, x)).epsilon(1e-8));
  }
}

TEST_CASE("standard escort") {
  const Density e = standard_escort(three_step_density(), 2.0);
  const double w2 = oracle::steps_moment(oracle::three_steps(), 2.0);
  CHECK(evaluate(e, 0.1) == doctest::Approx(1.5 * 1.5 / w2));
  CHECK(evaluate(e, 0.9) == doctest::Approx(0.25 / w2));

  const Density esc = standard_escort(exponential(2.0), 3.0);
  const auto* ex = esc.as<family::Exponential>();
  REQUIRE(ex != nullptr);
  CHECK(ex->rate == doctest::Approx(6.0));

  // (1 + x)^-4 integrates to 1/3.
  const Density qe = standard_escort(qexponential(1.5), 2.0);
  const double w = 1.0 / 3.0;
  for (double x : {0.0, 0.3, 2.0, 10.0}) {
    CHECK(evaluate(qe, x) ==
          doctest::Approx(std::pow(oracle::qexp_pdf(1.5, x), 2.0) / w).epsilon(1e-6));
  }
  const Density pesc = standard_escort(power_law_tail(3.0, 1.0), 0.5);
  const auto* pl = pesc.as<family::PowerLawTail>();
  REQUIRE(pl != nullptr);
  CHECK(pl->beta == doctest::Approx(1.5));
  CHECK(test::error_code([] { standard_escort(power_law_tail(3.0, 1.0), 0.3); }) ==
        Errc::DivergentMoment);

  const Density t = tabulated({{0.0, 0.25}, {1.0, 0.75}, {2.0, 0.25}});
  const Density te = standard_escort(t, 2.0);
  CHECK(total_probability(te) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(evaluate(te, 1.0) == doctest::Approx(0.5625 / entropic_moment(t, 2.0)));
}

TEST_CASE("scaled densities") {
  const Density s = scaled(exponential(), 2.0);
  CHECK(evaluate(s, 0.5) == doctest::Approx(2.0 * std::exp(-1.0)));
  const Density t = tabulated({{0.0, 0.25}, {1.0, 0.75}, {2.0, 0.25}});
  CHECK(evaluate(scaled(t, 2.0), 0.5) == doctest::Approx(1.5));
  const Density n = transform(power_law_tail(3.0, 1.0), 2.0).base;
  const Density sn = scaled(scaled(n, 2.0), 3.0);
  const auto* sc = sn.as<family::Scaled>();
  REQUIRE(sc != nullptr);
  CHECK(sc->factor == doctest::Approx(6.0));
  CHECK(sc->source->as<family::NumericTransform>() != nullptr);
  CHECK(evaluate(sn, 0.25) == doctest::Approx(6.0 * evaluate(n, 1.5)));
  CHECK(test::error_code([] { scaled(exponential(), 0.0); }) == Errc::InvalidArgument);
}
