#include "rothman/figures.hpp"

#include <cmath>
#include <cstdio>

#include "rothman/error.hpp"
#include "rothman/geometry.hpp"
#include "rothman/glm.hpp"
#include "rothman/measures.hpp"

namespace rothman {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void add_strata(DiagramSpec& d, const std::vector<RiskPoint>& strata) {
  for (const auto& p : strata) d.points.push_back({p, MarkerStyle::solid_circle, p.label});
}

void add_crude(DiagramSpec& d, const RiskPoint& crude) {
  d.points.push_back({crude, MarkerStyle::open_circle, "crude"});
}

void add_hull(DiagramSpec& d, const std::vector<RiskPoint>& strata) {
  const auto hull = standardized_hull(strata);
  d.paths.push_back({hull.vertices, true, LineStyle::solid, "hull"});
}

std::vector<RiskPoint> fitted_points(const StratifiedCohortTable& table, Link link) {
  const GlmFit f = fit({link, Terms::exposure_plus_stratum, table});
  std::vector<RiskPoint> out;
  for (std::size_t i = 0; i < f.fitted_risks.size(); ++i) {
    out.push_back({f.fitted_risks[i].unexposed, f.fitted_risks[i].exposed, PointKind::stratum,
                   table.stratum(i).label});
  }
  return out;
}

std::vector<double> contour_family(Measure m) {
  if (m == Measure::risk_difference) return {-0.5, -0.25, 0.0, 0.25, 0.5};
  return {0.25, 0.5, 1.0, 2.0, 4.0};
}

std::string measure_label(Measure m, double v) {
  return std::string(abbreviation(m)) + " = " + fmt("%.3g", v);
}

}  // namespace

FigureContent build_figure(int number, const StratifiedCohortTable& table) {
  FigureContent fig;
  fig.number = number;
  const auto pts = association_points(table);

  switch (number) {
    case 1: {
      fig.slug = "standardized_points";
      fig.title = "Stratum, crude and standardized points";
      DiagramSpec d;
      d.title = fig.title;
      add_hull(d, pts.strata);
      add_strata(d, pts.strata);
      add_crude(d, pts.crude);
      for (auto preset : {StandardPreset::study_sample, StandardPreset::exposed,
                          StandardPreset::unexposed}) {
        RiskPoint p = standardize(table, standard_population(table, preset));
        p.kind = PointKind::standardized;
        d.points.push_back({p, MarkerStyle::open_circle, std::string(to_string(preset))});
      }
      fig.panels.push_back(std::move(d));
      break;
    }
    case 2: {
      fig.slug = "confounding_rectangle";
      fig.title = "Confounding rectangle";
      DiagramSpec d;
      d.title = fig.title;
      d.rectangles.push_back({confounding_rectangle(pts.strata), LineStyle::dashed});
      add_hull(d, pts.strata);
      add_strata(d, pts.strata);
      add_crude(d, pts.crude);
      fig.panels.push_back(std::move(d));
      break;
    }
    case 3: {
      fig.slug = "standardized_hull";
      fig.title = "Hull of standardized points";
      DiagramSpec d;
      d.title = fig.title;
      d.rectangles.push_back({confounding_rectangle(pts.strata), LineStyle::dashed});
      add_hull(d, pts.strata);
      add_strata(d, pts.strata);
      add_crude(d, pts.crude);
      fig.panels.push_back(std::move(d));
      break;
    }
    case 4:
    case 5: {
      const bool family = number == 4;
      fig.slug = family ? "contours" : "effect_modification";
      fig.title = family ? "Contour lines of each measure" : "Stratum-specific contour lines";
      fig.columns = 2;
      for (Measure m : kAllMeasures) {
        DiagramSpec d;
        d.title = std::string(to_string(m));
        if (family) {
          for (double v : contour_family(m)) d.contours.push_back({m, v, LineStyle::dashed, {}});
        } else {
          for (const auto& p : pts.strata) {
            const auto v = measure_value(m, p);
            if (v && std::isfinite(*v)) {
              d.contours.push_back({m, *v, LineStyle::dashed, measure_label(m, *v)});
            }
          }
        }
        add_strata(d, pts.strata);
        if (family) add_crude(d, pts.crude);
        fig.panels.push_back(std::move(d));
      }
      break;
    }
    case 6:
    case 7: {
      if (table.size() < 2) throw ValidationError("figure needs at least two strata");
      const bool collapsible = number == 6;
      const Measure m = collapsible ? Measure::risk_difference : Measure::odds_ratio;
      fig.slug = collapsible ? "collapsible" : "noncollapsible";
      fig.title = collapsible ? "Common risk difference" : "Common odds ratio";
      const auto fitted = fitted_points(table, link_for(m));
      const auto report = collapse_analysis(m, fitted);
      DiagramSpec d;
      d.title = fig.title;
      if (report.stratum_value) {
        d.contours.push_back(
            {m, *report.stratum_value, LineStyle::dashed, measure_label(m, *report.stratum_value)});
      }
      add_hull(d, fitted);
      add_strata(d, fitted);
      if (!collapsible) {
        const RiskPoint low = standardize(fitted, report.argmin_weights);
        d.contours.push_back(
            {m, report.min_value, LineStyle::dashed, measure_label(m, report.min_value)});
        d.points.push_back({{low.x, low.y, PointKind::standardized, "minimum"},
                            MarkerStyle::open_circle,
                            "min " + measure_label(m, report.min_value)});
      }
      fig.panels.push_back(std::move(d));
      break;
    }
    default:
      throw ValidationError("figure number must be between 1 and 7");
  }
  return fig;
}

std::string render_figure(const FigureContent& figure) {
  return render_panels(figure.panels, figure.columns, figure.title);
}

std::string default_figure_filename(const FigureContent& figure) {
  return "fig" + std::to_string(figure.number) + "_" + figure.slug + ".svg";
}

}  // namespace rothman
