#include "rothman/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rothman/error.hpp"
#include "rothman/optimize.hpp"

namespace rothman {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCollapseTolerance = 1e-9;
}  // namespace

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::odds_ratio: return "odds_ratio";
    case Measure::risk_ratio: return "risk_ratio";
    case Measure::risk_difference: return "risk_difference";
    case Measure::hazard_ratio: return "hazard_ratio";
  }
  return "";
}

std::string_view abbreviation(Measure m) {
  switch (m) {
    case Measure::odds_ratio: return "OR";
    case Measure::risk_ratio: return "RR";
    case Measure::risk_difference: return "RD";
    case Measure::hazard_ratio: return "HR";
  }
  return "";
}

std::optional<Measure> parse_measure(std::string_view name) {
  for (Measure m : kAllMeasures) {
    if (name == to_string(m) || name == abbreviation(m)) return m;
  }
  return std::nullopt;
}

bool is_ratio(Measure m) noexcept { return m != Measure::risk_difference; }

bool is_collapsible(Measure m) noexcept {
  return m == Measure::risk_ratio || m == Measure::risk_difference;
}

std::optional<double> measure_value(Measure m, double x, double y) {
  switch (m) {
    case Measure::risk_difference:
      return y - x;
    case Measure::risk_ratio:
      if (x == 0.0) return y == 0.0 ? std::nullopt : std::optional<double>(kInf);
      return y / x;
    case Measure::odds_ratio: {
      const double num = y * (1.0 - x);
      const double den = x * (1.0 - y);
      if (den == 0.0) return num == 0.0 ? std::nullopt : std::optional<double>(kInf);
      return num / den;
    }
    case Measure::hazard_ratio: {
      const double num = std::log1p(-y);
      const double den = std::log1p(-x);
      if (std::isinf(num) && std::isinf(den)) return std::nullopt;
      if (den == 0.0) return num == 0.0 ? std::nullopt : std::optional<double>(kInf);
      if (std::isinf(den)) return 0.0;
      if (std::isinf(num)) return kInf;
      return num / den;
    }
  }
  return std::nullopt;
}

double to_comparison_scale(Measure m, double value) {
  return is_ratio(m) ? std::log(value) : value;
}

double from_comparison_scale(Measure m, double scaled) {
  return is_ratio(m) ? std::exp(scaled) : scaled;
}

std::optional<double> contour(Measure m, double value, double x) {
  if (!(x >= 0.0 && x <= 1.0) || std::isnan(value)) return std::nullopt;
  if (is_ratio(m) && !(value > 0.0 && std::isfinite(value))) return std::nullopt;
  double y = kNaN;
  switch (m) {
    case Measure::odds_ratio: y = value * x / (1.0 - x + value * x); break;
    case Measure::risk_ratio: y = value * x; break;
    case Measure::risk_difference: y = x + value; break;
    case Measure::hazard_ratio: y = -std::expm1(value * std::log1p(-x)); break;
  }
  if (!(y >= 0.0 && y <= 1.0)) return std::nullopt;
  return y;
}

namespace {

double spread_on_scale(Measure m, std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return 0.0;
  return to_comparison_scale(m, *hi) - to_comparison_scale(m, *lo);
}

}  // namespace

EffectModification effect_modification(Measure m, std::span<const RiskPoint> strata, double tol) {
  if (strata.size() < 2) throw ValidationError("effect modification needs at least two strata");
  if (tol < 0.0) throw ValidationError("tolerance must be nonnegative");
  EffectModification out{m, false, {}, 0.0};
  for (const auto& p : strata) {
    auto v = measure_value(m, p);
    if (!v) {
      throw DomainError(std::string(abbreviation(m)) + " is undefined in stratum '" + p.label + "'");
    }
    out.values.push_back(*v);
  }
  out.spread = spread_on_scale(m, out.values);
  out.present = !(out.spread <= tol);
  return out;
}

CollapsibilityReport collapse_analysis(Measure m, std::span<const RiskPoint> strata) {
  if (strata.size() < 2) throw ValidationError("collapsibility analysis needs at least two strata");
  const StandardizedHull hull = standardized_hull(strata);

  std::vector<std::optional<double>> stratum_values;
  std::vector<double> defined;
  for (const auto& p : strata) {
    stratum_values.push_back(measure_value(m, p));
    if (stratum_values.back()) defined.push_back(*stratum_values.back());
  }
  std::optional<double> common;
  if (defined.size() == strata.size() && spread_on_scale(m, defined) <= kCollapseTolerance) {
    common = defined.front();
  }

  bool open = false;
  auto scaled_at = [&](const RiskPoint& a, const RiskPoint& b, double t) {
    const double x = (1.0 - t) * a.x + t * b.x;
    const double y = (1.0 - t) * a.y + t * b.y;
    auto v = measure_value(m, x, y);
    if (!v) {
      open = true;
      return kNaN;
    }
    return to_comparison_scale(m, *v);
  };

  struct Extremum {
    double scaled;
    std::size_t from, to;
    double t;
  };
  std::optional<Extremum> lo, hi;
  auto update = [&](double scaled, std::size_t from, std::size_t to, double t) {
    if (std::isnan(scaled)) return;
    if (!lo || scaled < lo->scaled) lo = Extremum{scaled, from, to, t};
    if (!hi || scaled > hi->scaled) hi = Extremum{scaled, from, to, t};
  };

  const auto& v = hull.vertices;
  const auto& src = hull.vertex_sources;
  if (v.size() == 1) {
    update(scaled_at(v[0], v[0], 0.0), src[0], src[0], 0.0);
  } else {
    const std::size_t edges = v.size() == 2 ? 1 : v.size();
    for (std::size_t e = 0; e < edges; ++e) {
      const RiskPoint& a = v[e];
      const RiskPoint& b = v[(e + 1) % v.size()];
      auto f = [&](double t) { return scaled_at(a, b, t); };
      auto g = [&](double t) { return -scaled_at(a, b, t); };
      const auto mn = minimize_on_unit_interval(f);
      const auto mx = minimize_on_unit_interval(g);
      update(mn.value, src[e], src[(e + 1) % v.size()], mn.argument);
      update(-mx.value, src[e], src[(e + 1) % v.size()], mx.argument);
    }
  }
  if (!lo || !hi) throw NumericalError("measure undefined on the whole standardized hull");

  auto weights_of = [&](const Extremum& ex) {
    std::vector<double> w(strata.size(), 0.0);
    w[ex.from] += 1.0 - ex.t;
    w[ex.to] += ex.t;
    return StandardPopulation::custom(std::move(w));
  };
  const double min_value = from_comparison_scale(m, lo->scaled);
  const double max_value = from_comparison_scale(m, hi->scaled);
  const bool collapsible =
      lo->scaled == hi->scaled || (hi->scaled - lo->scaled) <= kCollapseTolerance;
  return CollapsibilityReport{m,
                              std::move(stratum_values),
                              common,
                              min_value,
                              max_value,
                              weights_of(*lo),
                              weights_of(*hi),
                              collapsible,
                              open};
}

}  // namespace rothman
