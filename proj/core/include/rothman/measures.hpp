#pragma once

// Measures of association as functions on the unit square, their contour
// lines, and collapsibility along the standardized segment or hull.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rothman/geometry.hpp"

namespace rothman {

enum class Measure { odds_ratio, risk_ratio, risk_difference, hazard_ratio };

/// Report order.
inline constexpr std::array<Measure, 4> kAllMeasures = {
    Measure::odds_ratio, Measure::risk_ratio, Measure::risk_difference, Measure::hazard_ratio};

std::string_view to_string(Measure m);
std::string_view abbreviation(Measure m);  // OR, RR, RD, HR
std::optional<Measure> parse_measure(std::string_view name);

bool is_ratio(Measure m) noexcept;

/// OR = (y/(1-y)) / (x/(1-x)), RR = y/x, RD = y - x,
/// HR = log(1-y) / log(1-x).
///
/// On the closed square the ratio measures return +inf (or 0) where the
/// limit exists and nullopt for 0/0 and inf/inf forms.
std::optional<double> measure_value(Measure m, double x, double y);
inline std::optional<double> measure_value(Measure m, const RiskPoint& p) {
  return measure_value(m, p.x, p.y);
}

/// Log for ratio measures, identity for RD. Tolerances are applied on
/// this scale.
double to_comparison_scale(Measure m, double value);
double from_comparison_scale(Measure m, double scaled);

/// The y with measure_value(m, x, y) == value, if it lies in [0, 1].
std::optional<double> contour(Measure m, double value, double x);

struct EffectModification {
  Measure measure = Measure::odds_ratio;
  bool present = false;
  std::vector<double> values;  // natural scale, one per stratum
  double spread = 0.0;         // max - min on the comparison scale
};

/// present iff the spread of stratum values exceeds tol. Throws
/// DomainError naming the first stratum where the measure is undefined.
EffectModification effect_modification(Measure m, std::span<const RiskPoint> strata, double tol);

struct CollapsibilityReport {
  Measure measure = Measure::odds_ratio;
  std::vector<std::optional<double>> stratum_values;
  /// Set when every stratum value agrees within 1e-9 on the comparison scale.
  std::optional<double> stratum_value;
  double min_value = 0.0;
  double max_value = 0.0;
  StandardPopulation argmin_weights;
  StandardPopulation argmax_weights;
  bool collapsible_here = false;
  /// True when the measure is undefined somewhere on the hull; the extrema
  /// are then infimum/supremum over the defined part (open endpoints).
  bool open_bounds = false;
};

/// Global extrema of the measure over the standardized segment (k = 2) or
/// the boundary of the standardized hull (k > 2), where monotonicity puts
/// them. Requires k >= 2.
CollapsibilityReport collapse_analysis(Measure m, std::span<const RiskPoint> strata);

/// True exactly for measures whose contours are all straight lines.
bool is_collapsible(Measure m) noexcept;

}  // namespace rothman
