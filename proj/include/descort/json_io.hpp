#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "descort/density.hpp"
#include "descort/measures.hpp"
#include "descort/tail.hpp"
#include "descort/transforms.hpp"

namespace descort {

/// Piecewise and tabulated inputs whose mass is off by at most this much are
/// renormalized (with a warning); larger deviations are NonNormalized.
inline constexpr double kRenormalizeTolerance = 1e-3;

/// 9 significant digits; infinities as "+inf" / "-inf".
std::string format_number(double v);
nlohmann::json json_number(double v);
/// Accepts numbers and the "+inf" / "-inf" / "inf" strings.
double number_from_json(const nlohmann::json& j);

/// Parses the density schema ({"kind": "piecewise" | "qexp" | "uniform" |
/// "exponential" | "powerlaw" | "tabulated", ...}). Throws Schema on
/// malformed input. Renormalization warnings go to `warnings` when given.
Density density_from_json(const nlohmann::json& j, std::ostream* warnings = nullptr);
Density load_density(const std::string& path, std::ostream* warnings = nullptr);

/// `samples` evenly spaced abscissae over the support, or over its
/// [1e-6, 1 - 1e-6] quantile window when it is infinite, merged with the
/// density's breakpoints. Strictly increasing.
std::vector<double> curve_grid(const Density& d, int samples, const QuadratureConfig& cfg = {});

/// Closed forms serialize to their schema; numeric densities are sampled
/// into the tabulated schema.
nlohmann::json density_to_json(const Density& d, int samples = 513,
                               const QuadratureConfig& cfg = {});
/// density_to_json plus a "provenance" object {source_kind, alpha, anchor}.
nlohmann::json transformed_to_json(const TransformedDensity& td, int samples = 513,
                                   const QuadratureConfig& cfg = {});

nlohmann::json report_to_json(const MeasureReport& r);
nlohmann::json tail_fit_to_json(const TailFit& f);

}  // namespace descort
