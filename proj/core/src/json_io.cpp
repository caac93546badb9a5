#include "rothman/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>

#include "rothman/error.hpp"

namespace rothman {

namespace {

Json real(double v, bool rounded) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return rounded ? round_sig6(v) : v;
}

void put(Json& obj, const std::string& key, double v) {
  obj[key] = real(v, true);
  obj[key + "_full"] = real(v, false);
}

void put(Json& obj, const std::string& key, const std::optional<double>& v) {
  if (v) {
    put(obj, key, *v);
  } else {
    obj[key] = nullptr;
    obj[key + "_full"] = nullptr;
  }
}

template <typename Range>
void put_array(Json& obj, const std::string& key, const Range& values) {
  Json rounded = Json::array();
  Json full = Json::array();
  for (const auto& v : values) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::optional<double>>) {
      rounded.push_back(v ? real(*v, true) : Json(nullptr));
      full.push_back(v ? real(*v, false) : Json(nullptr));
    } else {
      rounded.push_back(real(v, true));
      full.push_back(real(v, false));
    }
  }
  obj[key] = std::move(rounded);
  obj[key + "_full"] = std::move(full);
}

std::string_view kind_name(PointKind k) {
  switch (k) {
    case PointKind::crude: return "crude";
    case PointKind::stratum: return "stratum";
    case PointKind::standardized: return "standardized";
    case PointKind::causal: return "causal";
  }
  return "stratum";
}

Json points_json(std::span<const RiskPoint> pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(to_json(p));
  return arr;
}

Json measure_json(const MeasureReport& m) {
  Json j;
  j["measure"] = abbreviation(m.measure);
  j["name"] = to_string(m.measure);
  j["link"] = to_string(m.link);
  j["crude"] = m.crude ? to_json(*m.crude) : Json(nullptr);
  put(j, "crude_p_value", m.crude_p_value);
  if (m.stratum_estimates) {
    put_array(j, "stratum_estimates", *m.stratum_estimates);
  } else {
    j["stratum_estimates"] = nullptr;
    j["stratum_estimates_full"] = nullptr;
  }
  if (m.effect_modification) {
    Json em;
    em["present"] = m.effect_modification->present;
    put(em, "spread", m.effect_modification->spread);
    j["effect_modification"] = std::move(em);
  } else {
    j["effect_modification"] = nullptr;
  }
  put(j, "interaction_p_value", m.interaction_p_value);
  j["common"] = m.common ? to_json(*m.common) : Json(nullptr);
  j["common_fitted_points"] =
      m.common_fitted_points ? points_json(*m.common_fitted_points) : Json(nullptr);
  j["common_collapsibility"] =
      m.common_collapsibility ? to_json(*m.common_collapsibility) : Json(nullptr);
  Json errors = Json::array();
  for (const auto& e : m.errors) {
    errors.push_back({{"stage", e.stage}, {"code", to_string(e.code)}, {"message", e.message}});
  }
  j["errors"] = std::move(errors);
  return j;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(1, key, "missing field");
  }
  return j.at(key);
}

std::vector<double> reals(const Json& j, const char* key) {
  const Json& arr = field(j, key);
  if (!arr.is_array()) throw ParseError(1, key, "expected an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) throw ParseError(1, key, "expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

double round_sig6(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

Json to_json(const RiskPoint& p) {
  Json j;
  j["label"] = p.label;
  j["kind"] = kind_name(p.kind);
  put(j, "x", p.x);
  put(j, "y", p.y);
  return j;
}

Json to_json(const StandardPopulation& s) {
  Json j;
  j["preset"] = to_string(s.preset());
  put_array(j, "weights", s.weights());
  if (s.exact()) {
    Json exact = Json::array();
    for (const auto& f : *s.exact()) exact.push_back(std::to_string(f.num) + "/" + std::to_string(f.den));
    j["weights_exact"] = std::move(exact);
  }
  return j;
}

Json to_json(const LrInterval& interval) {
  Json j;
  put(j, "estimate", interval.estimate);
  put(j, "lower", interval.lower);
  put(j, "upper", interval.upper);
  j["level"] = interval.level;
  j["lower_bounded"] = interval.lower_bounded;
  j["upper_bounded"] = interval.upper_bounded;
  return j;
}

Json to_json(const CollapsibilityReport& r) {
  Json j;
  j["measure"] = abbreviation(r.measure);
  put_array(j, "stratum_values", r.stratum_values);
  put(j, "stratum_value", r.stratum_value);
  put(j, "min", r.min_value);
  put(j, "max", r.max_value);
  j["argmin_weights"] = to_json(r.argmin_weights);
  j["argmax_weights"] = to_json(r.argmax_weights);
  j["collapsible_here"] = r.collapsible_here;
  j["open_bounds"] = r.open_bounds;
  return j;
}

Json to_json(const AnalysisReport& r) {
  Json j;

  Json points;
  points["crude"] = to_json(r.points.crude);
  points["strata"] = points_json(r.points.strata);
  Json standardized = Json::array();
  for (const auto& s : r.standardized) {
    standardized.push_back({{"name", s.name}, {"standard", to_json(s.standard)}, {"point", to_json(s.point)}});
  }
  points["standardized"] = std::move(standardized);
  points["hull"] = points_json(r.hull.vertices);
  Json rect;
  put(rect, "x_min", r.rectangle.x_min);
  put(rect, "x_max", r.rectangle.x_max);
  put(rect, "y_min", r.rectangle.y_min);
  put(rect, "y_max", r.rectangle.y_max);
  points["rectangle"] = std::move(rect);
  j["points"] = std::move(points);

  Json confounding;
  confounding["flag"] = to_string(r.confounding);
  confounding["crude_containment"] = to_string(r.crude_containment);
  put(confounding, "crude_distance", r.crude_distance);
  put(confounding, "tolerance", r.tolerance);
  confounding["caveat"] = r.caveat;
  j["confounding"] = std::move(confounding);

  Json measures = Json::array();
  for (const auto& m : r.measures) measures.push_back(measure_json(m));
  j["measures"] = std::move(measures);

  Json coll = Json::array();
  for (const auto& c : r.collapsibility) coll.push_back(c ? to_json(*c) : Json(nullptr));
  j["collapsibility"] = std::move(coll);
  return j;
}

Json to_json(const PopulationTruth& t) {
  Json j;
  j["causal_strata"] = points_json(t.causal_strata);
  j["causal_marginal"] = to_json(t.causal_marginal);
  j["association_strata"] = points_json(t.association_strata);
  j["crude"] = to_json(t.crude);
  j["confounded"] = t.confounded;
  put(j, "crude_distance", t.crude_distance);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

PopulationSpec parse_population_spec(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, "", e.what());
  }
  PopulationSpec spec;
  spec.stratum_probs = reals(j, "stratum_probs");
  spec.exposure_probs = reals(j, "exposure_probs");
  const Json& po = field(j, "po_probs");
  if (!po.is_array()) throw ParseError(1, "po_probs", "expected an array");
  for (const auto& row : po) {
    if (!row.is_array() || row.size() != 4) {
      throw ParseError(1, "po_probs", "each entry must be [p00, p01, p10, p11]");
    }
    std::array<double, 4> p{};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!row[i].is_number()) throw ParseError(1, "po_probs", "expected numbers");
      p[i] = row[i].get<double>();
    }
    spec.po_probs.push_back(p);
  }
  validate(spec);
  return spec;
}

}  // namespace rothman
