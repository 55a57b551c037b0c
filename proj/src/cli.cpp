#include "descort/cli.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "descort/error.hpp"
#include "descort/example.hpp"
#include "descort/json_io.hpp"
#include "descort/measures.hpp"
#include "descort/transforms.hpp"

namespace descort {

namespace {

using nlohmann::json;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::TransformFailed:
    case Errc::DivergentMap:
    case Errc::NotInvertible:
      return kExitTransformFailed;
    case Errc::DivergentMoment:
    case Errc::Divergent:
      return kExitDivergent;
    default:
      return kExitSchema;
  }
}

// Writes to --out when given, else to the default stream.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Schema, "cannot write " + path);
  f << text;
}

struct TransformArgs {
  std::string density;
  double alpha = 1.0;
  int samples = 201;
  std::optional<double> anchor;
  std::string format = "csv";
  std::string out;
};

struct MeasureArgs {
  std::string density;
  double p = 1.0;
  double q = 2.0;
  std::string out;
};

struct SweepArgs {
  std::string density;
  std::vector<double> alphas;
  double p = 1.0;
  double q = 2.0;
  std::string format = "csv";
  std::string out;
};

struct SweepRow {
  double alpha = 0.0;
  double S = 0.0;
  double R_p = 0.0;
  double R_q = 0.0;
  double C = 0.0;
  double K2 = 0.0;
};

int cmd_transform(const TransformArgs& a, const QuadratureConfig& cfg, std::ostream& out,
                  std::ostream& err) {
  if (a.samples < 2) throw Error(Errc::Schema, "--samples must be at least 2");
  const Density d = load_density(a.density, &err);
  TransformOptions opts;
  opts.anchor = a.anchor;
  const TransformedDensity td = transform(d, a.alpha, cfg, opts);
  const Density& r = td.base;
  const std::vector<double> ys = curve_grid(r, a.samples, cfg);

  std::ostringstream os;
  if (a.format == "json") {
    json curve = json::array();
    for (double y : ys) curve.push_back({json_number(y), json_number(evaluate(r, y))});
    json j = {{"alpha", json_number(a.alpha)},
              {"source_kind", td.provenance.source_kind},
              {"anchor", json_number(td.provenance.anchor)},
              {"support", {json_number(r.support().lower()), json_number(r.support().upper())}},
              {"density", transformed_to_json(td, a.samples, cfg)},
              {"curve", curve}};
    os << j.dump(2) << '\n';
  } else {
    os << "# source_kind=" << td.provenance.source_kind << '\n'
       << "# anchor=" << format_number(td.provenance.anchor) << '\n'
       << "# support=" << format_number(r.support().lower()) << ','
       << format_number(r.support().upper()) << '\n';
    if (td.beyond_standard_range) os << "# beyond_standard_range=true\n";
    os << "alpha,y,rho\n";
    const std::string alpha = format_number(a.alpha);
    for (double y : ys) os << alpha << ',' << format_number(y) << ',' << format_number(evaluate(r, y)) << '\n';
  }
  emit(os.str(), a.out, out);
  return kExitOk;
}

int cmd_measure(const MeasureArgs& a, const QuadratureConfig& cfg, std::ostream& out,
                std::ostream& err) {
  if (!(a.p < a.q)) throw Error(Errc::Schema, "measure needs p < q");
  const Density d = load_density(a.density, &err);
  const MeasureReport rep = measure_report(d, a.q, cfg);
  const double w_p = entropic_moment(d, a.p, cfg);
  if (!std::isfinite(rep.W_q) || !std::isfinite(w_p)) {
    throw Error(Errc::DivergentMoment, "requested entropic moment is infinite");
  }
  json j = {{"p", json_number(a.p)},
            {"q", json_number(a.q)},
            {"S", json_number(rep.S)},
            {"R_p", json_number(renyi_entropy(d, a.p, cfg))},
            {"R_q", json_number(rep.R_q)},
            {"T_q", json_number(rep.T_q)},
            {"W_p", json_number(w_p)},
            {"W_q", json_number(rep.W_q)},
            {"C_pq", json_number(lmc_renyi(d, a.p, a.q, cfg))},
            {"error_estimate", json_number(rep.error_estimate)}};
  try {
    const CumulantSet ks = entropic_cumulants(d, cfg);
    j["cumulants"] = {json_number(ks.values[0]), json_number(ks.values[1]),
                      json_number(ks.values[2]), json_number(ks.values[3])};
  } catch (const Error& e) {
    if (e.code() != Errc::Divergent) throw;
    j["cumulants"] = nullptr;
  }
  try {
    j["q_c"] = json_number(critical_q(d));
  } catch (const Error& e) {
    if (e.code() != Errc::Unsupported) throw;
  }
  emit(j.dump(2) + "\n", a.out, out);
  return kExitOk;
}

SweepRow sweep_row(const Density& d, double alpha, double p, double q, const QuadratureConfig& cfg) {
  const Density t = transform(d, alpha, cfg).base;
  SweepRow row;
  row.alpha = alpha;
  row.S = shannon_entropy(t, cfg);
  row.R_p = renyi_entropy(t, p, cfg);
  row.R_q = renyi_entropy(t, q, cfg);
  row.C = lmc_renyi(t, p, q, cfg);
  try {
    row.K2 = entropic_cumulants(t, cfg).values[1];
  } catch (const Error& e) {
    if (e.code() != Errc::Divergent) throw;
    row.K2 = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

int cmd_sweep(const SweepArgs& a, const QuadratureConfig& cfg, std::ostream& out, std::ostream& err) {
  if (a.alphas.empty()) throw Error(Errc::Schema, "--alphas must list at least one value");
  if (!(a.p < a.q)) throw Error(Errc::Schema, "sweep needs p < q");
  const Density d = load_density(a.density, &err);

  std::vector<double> alphas = a.alphas;
  std::sort(alphas.begin(), alphas.end());
  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(alphas.size());
  for (double alpha : alphas) {
    jobs.push_back(std::async(std::launch::async, sweep_row, std::cref(d), alpha, a.p, a.q,
                              std::cref(cfg)));
  }
  std::vector<SweepRow> rows;
  std::optional<Error> failure;
  for (auto& job : jobs) {
    try {
      rows.push_back(job.get());
    } catch (const Error& e) {
      if (!failure) failure = e;
    }
  }
  if (failure) throw *failure;

  std::ostringstream os;
  if (a.format == "json") {
    json arr = json::array();
    for (const SweepRow& r : rows) {
      arr.push_back({{"alpha", json_number(r.alpha)},
                     {"S", json_number(r.S)},
                     {"R_p", json_number(r.R_p)},
                     {"R_q", json_number(r.R_q)},
                     {"C_pq", json_number(r.C)},
                     {"K2", json_number(r.K2)}});
    }
    json j = {{"source_kind", d.kind_name()},
              {"p", json_number(a.p)},
              {"q", json_number(a.q)},
              {"rows", arr}};
    os << j.dump(2) << '\n';
  } else {
    os << "# source_kind=" << d.kind_name() << '\n'
       << "# p=" << format_number(a.p) << '\n'
       << "# q=" << format_number(a.q) << '\n'
       << "alpha,S,R_p,R_q,C_pq,K2\n";
    for (const SweepRow& r : rows) {
      os << format_number(r.alpha) << ',' << format_number(r.S) << ',' << format_number(r.R_p)
         << ',' << format_number(r.R_q) << ',' << format_number(r.C) << ','
         << format_number(r.K2) << '\n';
    }
  }
  emit(os.str(), a.out, out);
  return kExitOk;
}

int cmd_reproduce(const std::string& path, const QuadratureConfig& cfg, std::ostream& out,
                  std::ostream& err) {
  const std::vector<PublishedCheck> checks = reproduce_example(cfg);
  std::ostringstream os;
  os << "check,computed,expected,rule,status\n";
  bool all = true;
  for (const PublishedCheck& c : checks) {
    os << c.name << ',' << format_number(c.computed) << ',' << format_number(c.expected) << ','
       << c.rule << ',' << (c.pass ? "pass" : "FAIL") << '\n';
    if (!c.pass) {
      all = false;
      err << "mismatch: " << c.name << " computed " << format_number(c.computed) << ", expected "
          << format_number(c.expected) << " (" << c.rule << ")\n";
    }
  }
  emit(os.str(), path, out);
  return all ? kExitOk : kExitMismatch;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential-escort transforms and information measures of 1-D densities",
               "descort"};
  app.require_subcommand(1);

  TransformArgs ta;
  auto* t = app.add_subcommand("transform", "Sample the transformed density rho_alpha");
  t->add_option("--density", ta.density, "Density JSON file")->required();
  t->add_option("--alpha", ta.alpha, "Deformation parameter")->required();
  t->add_option("--samples", ta.samples, "Number of curve points")->capture_default_str();
  t->add_option("--anchor", ta.anchor, "Fixed point of the y-map");
  t->add_option("--format", ta.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  t->add_option("--out", ta.out, "Output file (default stdout)");

  MeasureArgs ma;
  auto* m = app.add_subcommand("measure", "Entropies, complexity and cumulants of a density");
  m->add_option("--density", ma.density, "Density JSON file")->required();
  m->add_option("--p", ma.p, "Lower entropic parameter")->capture_default_str();
  m->add_option("--q", ma.q, "Upper entropic parameter")->capture_default_str();
  m->add_option("--out", ma.out, "Output file (default stdout)");

  SweepArgs sa;
  auto* s = app.add_subcommand("sweep", "Complexity of rho_alpha along a list of alphas");
  s->add_option("--density", sa.density, "Density JSON file")->required();
  s->add_option("--alphas", sa.alphas, "Comma-separated alphas")->required()->delimiter(',');
  s->add_option("--p", sa.p, "Lower entropic parameter")->capture_default_str();
  s->add_option("--q", sa.q, "Upper entropic parameter")->capture_default_str();
  s->add_option("--format", sa.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  s->add_option("--out", sa.out, "Output file (default stdout)");

  std::string reproduce_out;
  auto* r = app.add_subcommand("reproduce-example",
                               "Compare the three-step example against its published values");
  r->add_option("--out", reproduce_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitSchema;
  }

  try {
    const QuadratureConfig cfg = QuadratureConfig::from_environment();
    if (*t) return cmd_transform(ta, cfg, out, err);
    if (*m) return cmd_measure(ma, cfg, out, err);
    if (*s) return cmd_sweep(sa, cfg, out, err);
    return cmd_reproduce(reproduce_out, cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

}  // namespace descort
