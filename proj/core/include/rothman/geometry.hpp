#pragma once

// Planar geometry on the unit square of (risk in unexposed, risk in exposed).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rothman/tables.hpp"

namespace rothman {

/// Containment tolerance for population-level (infinite-sample) queries.
inline constexpr double kDefaultTolerance = 1e-9;

enum class PointKind { crude, stratum, standardized, causal };

/// x is the risk in the unexposed, y the risk in the exposed.
struct RiskPoint {
  double x = 0.0;
  double y = 0.0;
  PointKind kind = PointKind::stratum;
  std::string label;
};

/// Throws DomainError unless 0 <= x, y <= 1 (and both are finite).
void require_unit_square(const RiskPoint& p);

enum class StandardPreset { study_sample, exposed, unexposed, custom };

std::string_view to_string(StandardPreset preset);
std::optional<StandardPreset> parse_standard_preset(std::string_view name);

/// Exact weight n / d, kept alongside the double weights of count-derived
/// standard populations.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

/// A distribution over strata: nonnegative weights summing to one.
class StandardPopulation {
 public:
  /// Validates weights (>= 0, sum within 1e-12 of one).
  static StandardPopulation custom(std::vector<double> weights);
  /// Weights counts[i] / sum(counts), retaining the exact fractions.
  static StandardPopulation from_counts(std::span<const Count> counts, StandardPreset preset);

  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t i) const { return weights_.at(i); }
  std::size_t size() const noexcept { return weights_.size(); }
  StandardPreset preset() const noexcept { return preset_; }
  /// Present only for populations built from counts.
  const std::optional<std::vector<Fraction>>& exact() const noexcept { return exact_; }

 private:
  StandardPopulation(std::vector<double> w, StandardPreset p,
                     std::optional<std::vector<Fraction>> exact)
      : weights_(std::move(w)), preset_(p), exact_(std::move(exact)) {}

  std::vector<double> weights_;
  StandardPreset preset_ = StandardPreset::custom;
  std::optional<std::vector<Fraction>> exact_;
};

/// study_sample: stratum totals / grand total; exposed (unexposed): stratum
/// exposed (unexposed) totals over all exposed (unexposed) individuals.
StandardPopulation standard_population(const StratifiedCohortTable& table, StandardPreset preset);

struct AssociationPoints {
  RiskPoint crude;
  std::vector<RiskPoint> strata;
};

/// Crude point from the collapsed table plus one point per stratum. Throws
/// DomainError naming the stratum if one has an empty exposure group.
AssociationPoints association_points(const StratifiedCohortTable& table);

/// Componentwise convex combination sum_i w_i p_i.
RiskPoint standardize(std::span<const RiskPoint> strata, const StandardPopulation& standard);

/// Same combination evaluated from the table's counts. When the standard
/// carries exact weights the sum is formed in rational arithmetic and
/// rounded once, so e.g. the exposed-standard y equals the crude y exactly.
RiskPoint standardize(const StratifiedCohortTable& table, const StandardPopulation& standard);

/// Applies `for_unexposed` to the x-coordinates and `for_exposed` to the
/// y-coordinates. With the unexposed and exposed presets this reproduces
/// the crude point.
RiskPoint standardize_per_axis(const StratifiedCohortTable& table,
                               const StandardPopulation& for_unexposed,
                               const StandardPopulation& for_exposed);

/// Convex hull of the stratum points, counterclockwise from the
/// lexicographically smallest vertex. Collinear boundary points and
/// duplicates are not vertices. One vertex for k = 1 (or coincident
/// points), two for a segment.
struct StandardizedHull {
  std::vector<RiskPoint> vertices;
  /// Index into source_points for each vertex.
  std::vector<std::size_t> vertex_sources;
  std::vector<RiskPoint> source_points;

  bool is_point() const noexcept { return vertices.size() == 1; }
  bool is_segment() const noexcept { return vertices.size() == 2; }
};

StandardizedHull standardized_hull(std::span<const RiskPoint> strata);

struct ConfoundingRectangle {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(const RiskPoint& p, double tol = kDefaultTolerance) const noexcept;
  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
};

ConfoundingRectangle confounding_rectangle(std::span<const RiskPoint> strata);

enum class Containment { inside, boundary, outside };

std::string_view to_string(Containment c);

/// Euclidean distance from p to the hull; zero for points inside.
double distance_to_hull(const StandardizedHull& hull, const RiskPoint& p);

/// boundary: within distance tol of the hull boundary. A point or segment
/// hull has no interior, so the answer there is boundary or outside.
Containment contains(const StandardizedHull& hull, const RiskPoint& p,
                     double tol = kDefaultTolerance);

struct PointWeights {
  StandardPopulation weights;
  /// False when other weight vectors reproduce the same point (interior
  /// points of a hull with more than two strata, or repeated points).
  bool unique = true;
};

/// Nonnegative weights reproducing target within 1e-9, or nullopt if the
/// target is outside the hull. For k > 2 the answer comes from a fan
/// triangulation of the hull rooted at vertex 0.
std::optional<PointWeights> weights_for_point(std::span<const RiskPoint> strata,
                                              const RiskPoint& target);

}  // namespace rothman
