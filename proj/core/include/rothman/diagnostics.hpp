#pragma once

// End-to-end analysis of a stratified cohort table: association and
// standardized points, confounding classification, per-measure GLM
// estimates with likelihood-ratio inference, and collapsibility.

#include <optional>
#include <string>
#include <vector>

#include "rothman/error.hpp"
#include "rothman/geometry.hpp"
#include "rothman/glm.hpp"
#include "rothman/measures.hpp"

namespace rothman {

enum class ConfoundingFlag {
  off_segment,    // crude point outside the standardized segment or hull
  on_segment,     // crude point on the segment (k <= 2)
  indeterminate,  // k > 2 and crude point inside the hull
};

std::string_view to_string(ConfoundingFlag flag);

struct AnalysisOptions {
  double tol = kDefaultTolerance;
  double level = 0.95;
  std::vector<StandardPopulation> custom_standards;
  /// Fit the four measures concurrently. The report is identical either way.
  bool parallel = true;
};

struct StandardizedPoint {
  std::string name;
  StandardPopulation standard;
  RiskPoint point;
};

struct StageError {
  std::string stage;
  ErrorCode code;
  std::string message;
};

struct MeasureReport {
  Measure measure;
  Link link;

  std::optional<LrInterval> crude;
  std::optional<double> crude_p_value;

  std::optional<std::vector<double>> stratum_estimates;
  std::optional<EffectModification> effect_modification;
  std::optional<double> interaction_p_value;

  std::optional<LrInterval> common;
  /// Stratum points fitted by the no-interaction model; they share the
  /// common measure's contour.
  std::optional<std::vector<RiskPoint>> common_fitted_points;
  /// Extrema of the measure along the hull of common_fitted_points.
  std::optional<CollapsibilityReport> common_collapsibility;

  std::vector<StageError> errors;
};

struct AnalysisReport {
  AssociationPoints points;
  std::vector<StandardizedPoint> standardized;
  StandardizedHull hull;
  ConfoundingRectangle rectangle;

  ConfoundingFlag confounding = ConfoundingFlag::indeterminate;
  Containment crude_containment = Containment::outside;
  double crude_distance = 0.0;
  double tolerance = kDefaultTolerance;
  std::string caveat;

  /// In kAllMeasures order.
  std::vector<MeasureReport> measures;
  /// Observed stratum points, kAllMeasures order; empty for k = 1.
  std::vector<std::optional<CollapsibilityReport>> collapsibility;
};

/// Geometry errors propagate; GLM failures are recorded per measure.
AnalysisReport analyze(const StratifiedCohortTable& table, const AnalysisOptions& options = {});

}  // namespace rothman
