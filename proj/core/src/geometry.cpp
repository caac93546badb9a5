#include "rothman/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rational.hpp"
#include "rothman/error.hpp"

namespace rothman {

void require_unit_square(const RiskPoint& p) {
  if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
    throw DomainError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") is outside the unit square");
  }
}

std::string_view to_string(StandardPreset preset) {
  switch (preset) {
    case StandardPreset::study_sample: return "study_sample";
    case StandardPreset::exposed: return "exposed";
    case StandardPreset::unexposed: return "unexposed";
    case StandardPreset::custom: return "custom";
  }
  return "custom";
}

std::optional<StandardPreset> parse_standard_preset(std::string_view name) {
  if (name == "study_sample") return StandardPreset::study_sample;
  if (name == "exposed") return StandardPreset::exposed;
  if (name == "unexposed") return StandardPreset::unexposed;
  if (name == "custom") return StandardPreset::custom;
  return std::nullopt;
}

std::string_view to_string(Containment c) {
  switch (c) {
    case Containment::inside: return "inside";
    case Containment::boundary: return "boundary";
    case Containment::outside: return "outside";
  }
  return "outside";
}

StandardPopulation StandardPopulation::custom(std::vector<double> weights) {
  if (weights.empty()) throw ValidationError("standard population needs at least one weight");
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw ValidationError("weight " + std::to_string(i) + " must be a nonnegative number");
    }
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError("weights sum to " + std::to_string(sum) + ", expected 1");
  }
  return StandardPopulation(std::move(weights), StandardPreset::custom, std::nullopt);
}

StandardPopulation StandardPopulation::from_counts(std::span<const Count> counts,
                                                   StandardPreset preset) {
  const Count total = std::accumulate(counts.begin(), counts.end(), Count{0});
  if (counts.empty() || total <= 0) {
    throw ValidationError("standard population '" + std::string(to_string(preset)) +
                          "' is undefined: no individuals");
  }
  std::vector<double> w;
  std::vector<Fraction> exact;
  for (Count c : counts) {
    if (c < 0) throw ValidationError("negative count in standard population");
    exact.push_back({c, total});
    w.push_back(static_cast<double>(c) / static_cast<double>(total));
  }
  return StandardPopulation(std::move(w), preset, std::move(exact));
}

StandardPopulation standard_population(const StratifiedCohortTable& table, StandardPreset preset) {
  std::vector<Count> counts;
  for (const auto& s : table.strata()) {
    switch (preset) {
      case StandardPreset::study_sample: counts.push_back(s.cell.total()); break;
      case StandardPreset::exposed: counts.push_back(s.cell.exposed_total); break;
      case StandardPreset::unexposed: counts.push_back(s.cell.unexposed_total); break;
      case StandardPreset::custom:
        throw ValidationError("custom standard populations need explicit weights");
    }
  }
  return StandardPopulation::from_counts(counts, preset);
}

AssociationPoints association_points(const StratifiedCohortTable& table) {
  AssociationPoints out;
  const RiskPair crude = stratum_risks(collapse(table));
  out.crude = {crude.unexposed, crude.exposed, PointKind::crude, "crude"};
  for (const auto& s : table.strata()) {
    RiskPair r;
    try {
      r = stratum_risks(s.cell);
    } catch (const DomainError& e) {
      throw DomainError("stratum '" + s.label + "': " + e.what());
    }
    out.strata.push_back({r.unexposed, r.exposed, PointKind::stratum, s.label});
  }
  return out;
}

RiskPoint standardize(std::span<const RiskPoint> strata, const StandardPopulation& standard) {
  if (strata.size() != standard.size()) {
    throw ValidationError("standard population has " + std::to_string(standard.size()) +
                          " weights for " + std::to_string(strata.size()) + " strata");
  }
  RiskPoint out{0.0, 0.0, PointKind::standardized, std::string(to_string(standard.preset()))};
  for (std::size_t i = 0; i < strata.size(); ++i) {
    const double w = standard.weight(i);
    if (w == 1.0) {
      out.x = strata[i].x;
      out.y = strata[i].y;
      return out;
    }
    out.x += w * strata[i].x;
    out.y += w * strata[i].y;
  }
  out.x = std::clamp(out.x, 0.0, 1.0);
  out.y = std::clamp(out.y, 0.0, 1.0);
  return out;
}

namespace {

// Rational sum_i w_i * cases_i / total_i; nullopt on overflow.
std::optional<double> exact_weighted_risk(std::span<const Fraction> weights,
                                          const std::vector<std::pair<Count, Count>>& risks) {
  using detail::Rational;
  Rational sum{0, 1};
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i].num == 0) continue;
    auto w = Rational::make(weights[i].num, weights[i].den);
    auto r = Rational::make(risks[i].first, risks[i].second);
    if (!w || !r) return std::nullopt;
    auto term = detail::multiply(*w, *r);
    if (!term) return std::nullopt;
    auto next = detail::add(sum, *term);
    if (!next) return std::nullopt;
    sum = *next;
  }
  return sum.to_double();
}

double weighted_axis(const StratifiedCohortTable& table, const StandardPopulation& standard,
                     bool exposed_axis) {
  if (standard.size() != table.size()) {
    throw ValidationError("standard population has " + std::to_string(standard.size()) +
                          " weights for " + std::to_string(table.size()) + " strata");
  }
  std::vector<std::pair<Count, Count>> risks;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& s = table.stratum(i);
    const Count cases = exposed_axis ? s.cell.exposed_cases : s.cell.unexposed_cases;
    const Count total = exposed_axis ? s.cell.exposed_total : s.cell.unexposed_total;
    if (total == 0 && standard.weight(i) > 0.0) {
      throw DomainError("stratum '" + s.label + "' has no " +
                        (exposed_axis ? "exposed" : "unexposed") +
                        " individuals but positive standard weight");
    }
    risks.emplace_back(cases, total == 0 ? 1 : total);
  }
  if (const auto& exact = standard.exact()) {
    if (auto value = exact_weighted_risk(*exact, risks)) return *value;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < risks.size(); ++i) {
    if (standard.weight(i) == 0.0) continue;
    sum += standard.weight(i) * static_cast<double>(risks[i].first) /
           static_cast<double>(risks[i].second);
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

RiskPoint standardize(const StratifiedCohortTable& table, const StandardPopulation& standard) {
  return {weighted_axis(table, standard, false), weighted_axis(table, standard, true),
          PointKind::standardized, std::string(to_string(standard.preset()))};
}

RiskPoint standardize_per_axis(const StratifiedCohortTable& table,
                               const StandardPopulation& for_unexposed,
                               const StandardPopulation& for_exposed) {
  return {weighted_axis(table, for_unexposed, false), weighted_axis(table, for_exposed, true),
          PointKind::standardized, "per_axis"};
}

namespace {

double cross(const RiskPoint& o, const RiskPoint& a, const RiskPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double point_distance(const RiskPoint& a, const RiskPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double segment_distance(const RiskPoint& p, const RiskPoint& a, const RiskPoint& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return point_distance(p, a);
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double boundary_distance(const StandardizedHull& hull, const RiskPoint& p) {
  const auto& v = hull.vertices;
  if (v.size() == 1) return point_distance(p, v[0]);
  if (v.size() == 2) return segment_distance(p, v[0], v[1]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    best = std::min(best, segment_distance(p, v[i], v[(i + 1) % v.size()]));
  }
  return best;
}

bool strictly_inside_polygon(const StandardizedHull& hull, const RiskPoint& p) {
  const auto& v = hull.vertices;
  if (v.size() < 3) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cross(v[i], v[(i + 1) % v.size()], p) <= 0.0) return false;
  }
  return true;
}

}  // namespace

StandardizedHull standardized_hull(std::span<const RiskPoint> strata) {
  if (strata.empty()) throw ValidationError("hull needs at least one point");
  StandardizedHull hull;
  hull.source_points.assign(strata.begin(), strata.end());

  std::vector<std::size_t> order(strata.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (strata[a].x != strata[b].x) return strata[a].x < strata[b].x;
    return strata[a].y < strata[b].y;
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            return strata[a].x == strata[b].x && strata[a].y == strata[b].y;
                          }),
              order.end());

  std::vector<std::size_t> chain;
  if (order.size() == 1) {
    chain = order;
  } else {
    // Andrew's monotone chain; popping on cross <= 0 drops collinear points.
    std::vector<std::size_t> lower, upper;
    for (std::size_t idx : order) {
      while (lower.size() >= 2 &&
             cross(strata[lower[lower.size() - 2]], strata[lower.back()], strata[idx]) <= 0.0) {
        lower.pop_back();
      }
      lower.push_back(idx);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      while (upper.size() >= 2 &&
             cross(strata[upper[upper.size() - 2]], strata[upper.back()], strata[*it]) <= 0.0) {
        upper.pop_back();
      }
      upper.push_back(*it);
    }
    chain.assign(lower.begin(), lower.end() - 1);
    chain.insert(chain.end(), upper.begin(), upper.end() - 1);
  }
  for (std::size_t idx : chain) {
    hull.vertices.push_back(strata[idx]);
    hull.vertex_sources.push_back(idx);
  }
  return hull;
}

bool ConfoundingRectangle::contains(const RiskPoint& p, double tol) const noexcept {
  return p.x >= x_min - tol && p.x <= x_max + tol && p.y >= y_min - tol && p.y <= y_max + tol;
}

ConfoundingRectangle confounding_rectangle(std::span<const RiskPoint> strata) {
  if (strata.empty()) throw ValidationError("rectangle needs at least one point");
  ConfoundingRectangle r{strata[0].x, strata[0].x, strata[0].y, strata[0].y};
  for (const auto& p : strata) {
    r.x_min = std::min(r.x_min, p.x);
    r.x_max = std::max(r.x_max, p.x);
    r.y_min = std::min(r.y_min, p.y);
    r.y_max = std::max(r.y_max, p.y);
  }
  return r;
}

double distance_to_hull(const StandardizedHull& hull, const RiskPoint& p) {
  if (strictly_inside_polygon(hull, p)) return 0.0;
  return boundary_distance(hull, p);
}

Containment contains(const StandardizedHull& hull, const RiskPoint& p, double tol) {
  if (tol < 0.0) throw ValidationError("tolerance must be nonnegative");
  if (boundary_distance(hull, p) <= tol) return Containment::boundary;
  return strictly_inside_polygon(hull, p) ? Containment::inside : Containment::outside;
}

std::optional<PointWeights> weights_for_point(std::span<const RiskPoint> strata,
                                              const RiskPoint& target) {
  const StandardizedHull hull = standardized_hull(strata);
  if (contains(hull, target, kDefaultTolerance) == Containment::outside) return std::nullopt;

  std::vector<double> w(strata.size(), 0.0);
  const auto& v = hull.vertices;
  const auto& src = hull.vertex_sources;
  bool unique = v.size() == strata.size();

  if (v.size() == 1) {
    w[src[0]] = 1.0;
  } else if (v.size() == 2) {
    const double dx = v[1].x - v[0].x;
    const double dy = v[1].y - v[0].y;
    const double t = std::clamp(
        ((target.x - v[0].x) * dx + (target.y - v[0].y) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
    w[src[0]] = 1.0 - t;
    w[src[1]] = t;
  } else {
    unique = unique && v.size() == 3;
    bool found = false;
    for (std::size_t i = 1; i + 1 < v.size() && !found; ++i) {
      const double ax = v[i].x - v[0].x, ay = v[i].y - v[0].y;
      const double bx = v[i + 1].x - v[0].x, by = v[i + 1].y - v[0].y;
      const double px = target.x - v[0].x, py = target.y - v[0].y;
      const double det = ax * by - ay * bx;
      double a = (px * by - py * bx) / det;
      double b = (ax * py - ay * px) / det;
      constexpr double slack = 1e-9;
      if (a >= -slack && b >= -slack && a + b <= 1.0 + slack) {
        a = std::max(a, 0.0);
        b = std::max(b, 0.0);
        const double s = a + b;
        if (s > 1.0) {
          a /= s;
          b /= s;
        }
        w[src[0]] = 1.0 - a - b;
        w[src[i]] = a;
        w[src[i + 1]] = b;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  // Renormalize away rounding so the custom-weights invariant holds.
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
  return PointWeights{StandardPopulation::custom(std::move(w)), unique};
}

}  // namespace rothman
