// One line per acceptance criterion; nonzero exit when any of them fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "descort/descort.hpp"
#include "../support/properties.hpp"

using namespace descort;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome from_checks(const std::vector<PublishedCheck>& all, const std::vector<std::string>& names) {
  Outcome o{true, ""};
  for (const PublishedCheck& c : all) {
    bool wanted = false;
    for (const std::string& n : names) wanted = wanted || c.name == n;
    if (!wanted) continue;
    if (!o.detail.empty()) o.detail += ", ";
    o.detail += c.name + "=" + format_number(c.computed) + (c.pass ? " ok" : " (expected " +
                                                              format_number(c.expected) + ")");
    o.pass = o.pass && c.pass;
  }
  return o;
}

Outcome from_tallies(const std::vector<std::pair<std::string, suite::Tally>>& parts) {
  Outcome o{true, ""};
  for (const auto& [name, t] : parts) {
    if (!o.detail.empty()) o.detail += " | ";
    o.detail += name + ": " + t.summary();
    o.pass = o.pass && t.ok();
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<PublishedCheck> published = reproduce_example();

  std::vector<std::function<Outcome()>> criteria = {
      [&] {
        return from_checks(published, {"C(alpha=1)", "C(alpha=0.5)", "C(alpha=0.25)",
                                       "C(alpha=0.1)"});
      },
      [&] {
        return from_checks(published, {"C(alpha=2)", "C(alpha=4)", "C(alpha=10)",
                                       "C(alpha=100)"});
      },
      [&] {
        return from_checks(published, {"w1(alpha=10)", "h1(alpha=10)", "w2(alpha=10)",
                                       "w3(alpha=10)", "h3(alpha=10)"});
      },
      [] {
        return from_tallies({{"probability", suite::probability_invariance()},
                             {"composition", suite::composition_law()},
                             {"scaling", suite::scaling_law()},
                             {"W_q", suite::moment_rescaling()},
                             {"entropies", suite::entropy_scaling()},
                             {"cumulants", suite::cumulant_scaling()},
                             {"C>=1", suite::complexity_lower_bound()},
                             {"C exponent", suite::complexity_exponent_identity()}});
      },
      [] { return from_tallies({{"monotonicity", suite::monotonicity()}}); },
      [] {
        return from_tallies({{"convexity", suite::convexity()},
                             {"mixed derivative", suite::mixed_derivative()}});
      },
      [] {
        return from_tallies({{"pointwise", suite::qexp_from_exponential()},
                             {"round trip", suite::qbar_round_trip()}});
      },
      [] { return from_tallies({{"tails", suite::tail_trichotomy()}}); },
      [] {
        const Density rho = transform(three_step_density(), 0.1).base;
        const double c = lmc_renyi(rho, 1.0, 2.0);
        const double approx = cumulant_series_complexity(rho, 1.0, 2.0, 2);
        const double k2 = entropic_cumulants(rho).values[1];
        const double direct = std::exp(k2 * 0.5);
        const bool pass = std::abs(approx - c) <= 1e-4 && std::abs(direct - approx) <= 1e-14;
        return Outcome{pass, "C=" + format_number(c) + " exp(K2/2)=" + format_number(approx) +
                                 " diff=" + format_number(std::abs(approx - c))};
      },
  };

  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << (i + 1) << (o.pass ? " PASS: " : " FAIL: ") << o.detail
              << std::endl;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass in "
            << format_number(seconds) << " s" << std::endl;
  return failed == 0 ? 0 : 1;
}
