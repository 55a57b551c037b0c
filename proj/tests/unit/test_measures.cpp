#include <doctest.h>

#include <cmath>

#include "descort/density.hpp"
#include "descort/example.hpp"
#include "descort/measures.hpp"
#include "descort/transforms.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace descort;

TEST_CASE("step densities against direct sums") {
  const Density d = three_step_density();
  const oracle::Steps s = oracle::three_steps();
  CHECK(shannon_entropy(d) == doctest::Approx(oracle::steps_shannon(s)).epsilon(1e-14));
  for (double q : {-1.0, 0.5, 2.0, 3.5}) {
    CHECK(entropic_moment(d, q) == doctest::Approx(oracle::steps_moment(s, q)).epsilon(1e-14));
    CHECK(renyi_entropy(d, q) == doctest::Approx(oracle::steps_renyi(s, q)).epsilon(1e-13));
    CHECK(tsallis_entropy(d, q) ==
          doctest::Approx((1.0 - oracle::steps_moment(s, q)) / (q - 1.0)).epsilon(1e-13));
  }
  CHECK(lmc_renyi(d, 1.0, 2.0) == doctest::Approx(oracle::steps_complexity(s, 1.0, 2.0)));
  CHECK(lmc_renyi(d, 0.5, 4.0) == doctest::Approx(oracle::steps_complexity(s, 0.5, 4.0)));
}

TEST_CASE("exponential closed forms") {
  const double r = 2.5;
  const Density d = exponential(r);
  CHECK(shannon_entropy(d) == doctest::Approx(1.0 - std::log(r)));
  for (double q : {0.5, 2.0, 3.0}) {
    CHECK(entropic_moment(d, q) == doctest::Approx(std::pow(r, q - 1.0) / q));
  }
  CHECK(entropic_moment(d, 0.0) == kInf);
  CHECK(entropic_moment(d, -1.0) == kInf);
  const CumulantSet k = entropic_cumulants(d);
  CHECK(k.values[0] == doctest::Approx(std::log(r) - 1.0));
  CHECK(k.values[1] == doctest::Approx(1.0));
  CHECK(k.values[2] == doctest::Approx(-2.0));
  CHECK(k.values[3] == doctest::Approx(6.0));
}

TEST_CASE("q-exponential and power-law moments against hand integrals") {
  // q = 1.5: rho = (1 + x)^-2 on [0, inf). q = 0.5: rho = (1 - x/3)^2 on [0, 3].
  const Density heavy = qexponential(1.5);
  const Density light = qexponential(0.5);
  for (double w : {0.8, 2.0, 3.0}) {
    CHECK(entropic_moment(heavy, w) == doctest::Approx(1.0 / (2.0 * w - 1.0)).epsilon(1e-12));
    CHECK(entropic_moment(light, w) == doctest::Approx(3.0 / (2.0 * w + 1.0)).epsilon(1e-12));
  }
  CHECK(entropic_moment(heavy, 0.5) == kInf);
  CHECK(shannon_entropy(heavy) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(shannon_entropy(light) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(oracle::simpson([](double x) { return std::pow(oracle::qexp_pdf(0.5, x), 2.0); }, 0.0,
                        3.0) == doctest::Approx(0.6).epsilon(1e-10));

  const Density pl = power_law_tail(3.0, 1.0);
  const double h = oracle::power_law_pdf(3.0, 1.0, 0.0);
  for (double q : {0.5, 1.0 / 3.0 + 0.01, 2.0}) {
    CHECK(entropic_moment(pl, q) ==
          doctest::Approx(std::pow(h, q) * (1.0 + 1.0 / (3.0 * q - 1.0))).epsilon(1e-12));
  }
  CHECK(entropic_moment(pl, 1.0 / 3.0) == kInf);
  CHECK(renyi_entropy(pl, 0.2) == kInf);
  CHECK(critical_q(pl) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("numeric quadrature path") {
  const Density t = tabulated({{0.0, 0.25}, {1.0, 0.75}, {2.0, 0.25}});
  const auto f = [&](double x) { return evaluate(t, x); };
  CHECK(entropic_moment(t, 2.0) ==
        doctest::Approx(oracle::simpson([&](double x) { return f(x) * f(x); }, 0.0, 2.0)));
  CHECK(shannon_entropy(t) ==
        doctest::Approx(oracle::simpson([&](double x) { return -f(x) * std::log(f(x)); }, 0.0, 2.0))
            .epsilon(1e-9));
  const QuadResult r = entropic_moment_estimate(t, 2.0);
  CHECK(r.error >= 0.0);
  CHECK(r.error < 1e-8);
  CHECK(test::error_code([&] { critical_q(t); }) == Errc::Unsupported);

  const Density heavy = transform(power_law_tail(1.5, 1.0), 2.0).base;
  CHECK(entropic_moment(heavy, 0.5) == kInf);
  CHECK(critical_q(heavy) == doctest::Approx(1.0 - (1.0 - 1.0 / 1.5) / 2.0));
}

TEST_CASE("Tsallis entropy tends to Shannon") {
  for (const Density& d : {three_step_density(), exponential(0.5), qexponential(1.3)}) {
    const double s = shannon_entropy(d);
    CHECK(tsallis_entropy(d, 1.0) == doctest::Approx(s));
    CHECK(tsallis_entropy(d, 1.0 + 1e-6) == doctest::Approx(s).epsilon(1e-5));
    CHECK(tsallis_entropy(d, 1.0 - 1e-6) == doctest::Approx(s).epsilon(1e-5));
    CHECK(renyi_entropy(d, 1.0 + 1e-7) == doctest::Approx(s).epsilon(1e-5));
  }
}

TEST_CASE("complexity measures") {
  CHECK(lmc_renyi(uniform(3.0), 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lmc_sup(uniform(3.0), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lmc_sup(uniform(3.0), 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  const Density d = three_step_density();
  CHECK(lmc_sup(d, 1.0) == doctest::Approx(1.5 * std::exp(shannon_entropy(d))));
  CHECK(lmc_sup(d, 2.0) == doctest::Approx(1.5 / entropic_moment(d, 2.0)));
  CHECK(test::error_code([&] { lmc_renyi(d, 2.0, 1.0); }) == Errc::InvalidArgument);
  CHECK(test::error_code([] { lmc_renyi(exponential(), -0.5, 2.0); }) == Errc::DivergentMoment);
  CHECK(test::error_code([] { lmc_renyi(power_law_tail(2.0, 1.0), 0.5, 2.0); }) ==
        Errc::DivergentMoment);
  CHECK(rescale_q(3.0, 0.5) == 2.0);
}

TEST_CASE("entropic cumulants of steps") {
  const oracle::Steps s = oracle::three_steps();
  const CumulantSet k = entropic_cumulants(three_step_density());
  const double c2 = oracle::steps_log_central(s, 2);
  CHECK(k.values[0] == doctest::Approx(-oracle::steps_shannon(s)));
  CHECK(k.values[1] == doctest::Approx(c2));
  CHECK(k.values[2] == doctest::Approx(oracle::steps_log_central(s, 3)));
  CHECK(k.values[3] == doctest::Approx(oracle::steps_log_central(s, 4) - 3.0 * c2 * c2));
  CHECK(k.log_moments[0] == doctest::Approx(k.values[0]));
  CHECK(k.log_moments[1] == doctest::Approx(c2 + k.values[0] * k.values[0]));

  const CumulantSet u = entropic_cumulants(uniform(2.0));
  CHECK(u.values[0] == doctest::Approx(-std::log(2.0)));
  CHECK(u.values[1] == 0.0);
}

TEST_CASE("cumulant series approaches the complexity") {
  const Density d = transform(three_step_density(), 0.1).base;
  const double c = lmc_renyi(d, 1.0, 2.0);
  CHECK(cumulant_series_complexity(d, 1.0, 2.0, 1) == 1.0);
  double prev_err = kInf;
  for (int n = 2; n <= 4; ++n) {
    const double err = std::abs(cumulant_series_complexity(d, 1.0, 2.0, n) - c);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-7);
  CHECK(test::error_code([&] { cumulant_series_complexity(d, 1.0, 2.0, 5); }) ==
        Errc::InvalidArgument);
}

TEST_CASE("measure report is self-consistent") {
  const MeasureReport r = measure_report(qexponential(1.4), 2.0);
  CHECK(r.R_q == doctest::Approx(-std::log(r.W_q)));
  CHECK(r.T_q == doctest::Approx(1.0 - r.W_q));
  CHECK(r.S == doctest::Approx(shannon_entropy(qexponential(1.4))));
  CHECK(r.error_estimate >= 0.0);
}
