#include "rothman/diagnostics.hpp"

#include <functional>
#include <future>

#include "rothman/error.hpp"

namespace rothman {

std::string_view to_string(ConfoundingFlag flag) {
  switch (flag) {
    case ConfoundingFlag::off_segment: return "off_segment";
    case ConfoundingFlag::on_segment: return "on_segment";
    case ConfoundingFlag::indeterminate: return "indeterminate";
  }
  return "";
}

namespace {

constexpr const char* kCaveat =
    "Classification compares sample proportions directly, with no test for sampling "
    "error; in finite samples it is approximate.";

// Runs body, recording any library error against `stage`.
template <typename Body>
void stage(MeasureReport& report, const char* name, Body&& body) {
  try {
    body();
  } catch (const Error& e) {
    report.errors.push_back({name, e.code(), e.what()});
  }
}

MeasureReport analyze_measure(const StratifiedCohortTable& table,
                              std::span<const RiskPoint> stratum_points, Measure m,
                              const AnalysisOptions& options) {
  MeasureReport r{m, link_for(m), {}, {}, {}, {}, {}, {}, {}, {}, {}};
  const Link link = r.link;

  stage(r, "crude_fit", [&] {
    const ModelSpec spec{link, Terms::exposure_only, table};
    const GlmFit crude = fit(spec);
    const GlmFit null_fit = fit({link, Terms::intercept_only, table});
    r.crude_p_value = lr_test(null_fit, crude, 1);
    r.crude = profile_interval(spec, crude, options.level);
  });

  if (table.size() < 2) return r;
  const int df = static_cast<int>(table.size()) - 1;

  stage(r, "effect_modification",
        [&] { r.effect_modification = effect_modification(m, stratum_points, options.tol); });

  std::optional<GlmFit> saturated;
  stage(r, "stratified_fit", [&] {
    saturated = fit({link, Terms::saturated_with_interaction, table});
    r.stratum_estimates = stratum_measures(*saturated);
  });

  stage(r, "common_fit", [&] {
    const ModelSpec spec{link, Terms::exposure_plus_stratum, table};
    const GlmFit common = fit(spec);
    std::vector<RiskPoint> fitted;
    for (std::size_t c = 0; c < table.size(); ++c) {
      fitted.push_back({common.fitted_risks[c].unexposed, common.fitted_risks[c].exposed,
                        PointKind::stratum, table.stratum(c).label});
    }
    r.common_fitted_points = fitted;
    if (saturated) r.interaction_p_value = lr_test(common, *saturated, df);
    r.common = profile_interval(spec, common, options.level);
    r.common_collapsibility = collapse_analysis(m, fitted);
  });
  return r;
}

}  // namespace

AnalysisReport analyze(const StratifiedCohortTable& table, const AnalysisOptions& options) {
  if (options.tol < 0.0) throw ValidationError("tolerance must be nonnegative");
  AnalysisReport report;
  report.tolerance = options.tol;
  report.caveat = kCaveat;
  report.points = association_points(table);
  const auto& strata = report.points.strata;

  for (StandardPreset preset :
       {StandardPreset::study_sample, StandardPreset::exposed, StandardPreset::unexposed}) {
    auto standard = standard_population(table, preset);
    auto point = standardize(table, standard);
    report.standardized.push_back({std::string(to_string(preset)), std::move(standard), point});
  }
  for (std::size_t i = 0; i < options.custom_standards.size(); ++i) {
    const auto& standard = options.custom_standards[i];
    auto point = standardize(table, standard);
    point.label = "custom_" + std::to_string(i + 1);
    report.standardized.push_back({point.label, standard, point});
  }

  report.hull = standardized_hull(strata);
  report.rectangle = confounding_rectangle(strata);
  report.crude_containment = contains(report.hull, report.points.crude, options.tol);
  report.crude_distance = distance_to_hull(report.hull, report.points.crude);
  if (report.crude_containment == Containment::outside) {
    report.confounding = ConfoundingFlag::off_segment;
  } else if (strata.size() <= 2) {
    report.confounding = ConfoundingFlag::on_segment;
  } else {
    report.confounding = ConfoundingFlag::indeterminate;
  }

  if (options.parallel) {
    std::vector<std::future<MeasureReport>> jobs;
    for (Measure m : kAllMeasures) {
      jobs.push_back(std::async(std::launch::async, analyze_measure, std::cref(table),
                                std::span<const RiskPoint>(strata), m, std::cref(options)));
    }
    for (auto& j : jobs) report.measures.push_back(j.get());
  } else {
    for (Measure m : kAllMeasures) report.measures.push_back(analyze_measure(table, strata, m, options));
  }

  if (strata.size() >= 2) {
    for (Measure m : kAllMeasures) {
      try {
        report.collapsibility.push_back(collapse_analysis(m, strata));
      } catch (const NumericalError&) {
        report.collapsibility.push_back(std::nullopt);
      }
    }
  }
  return report;
}

}  // namespace rothman
