// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "rothman/chi_square.hpp"
#include "rothman/figures.hpp"
#include "rothman/fixtures.hpp"
#include "rothman/glm.hpp"
#include "rothman/json_io.hpp"
#include "rothman/measures.hpp"
#include "rothman/simulate.hpp"
#include "svg_probe.hpp"

using namespace rothman;

namespace {

/// Collects individual comparisons for one criterion.
class Criterion {
 public:
  void near(const std::string& what, double actual, double expected, double tol) {
    const double err = std::abs(actual - expected);
    worst_ = std::max(worst_, err / tol);
    if (!(err <= tol)) fail(what + ": got " + fmt(actual) + ", want " + fmt(expected) + " +/- " + fmt(tol));
  }
  void check(const std::string& what, bool ok) {
    if (!ok) fail(what);
  }
  void fail(const std::string& message) {
    if (failures_.size() < 5) failures_.push_back(message);
    ++failure_count_;
  }
  bool passed() const { return failure_count_ == 0; }
  int failure_count() const { return failure_count_; }
  const std::vector<std::string>& failures() const { return failures_; }
  double worst_fraction_of_tolerance() const { return worst_; }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }

 private:
  std::vector<std::string> failures_;
  int failure_count_ = 0;
  double worst_ = 0.0;
};

Json run_cli_json(const std::vector<std::string>& args) {
  std::istringstream in;
  std::ostringstream out, err;
  if (cli::run(args, in, out, err) != 0) throw std::runtime_error("cli failed: " + err.str());
  return Json::parse(out.str());
}

double full(const Json& obj, const std::string& key) { return obj.at(key + "_full").get<double>(); }

// Crude estimates, LR p-value and LR intervals on the bundled table.
void crude_reproduction(Criterion& c) {
  const Json report = run_cli_json({"analyze"});
  const double est[] = {0.685, 0.760, -0.075, 0.724};
  const double lo[] = {0.535, 0.633, -0.123, 0.584};
  const double hi[] = {0.875, 0.908, -0.027, 0.892};
  for (int i = 0; i < 4; ++i) {
    const Json& m = report["measures"][i];
    const std::string name = m["measure"];
    const Json& crude = m["crude"];
    c.near(name + " crude estimate", full(crude, "estimate"), est[i], 0.001);
    c.near(name + " crude lower", full(crude, "lower"), lo[i], 0.002);
    c.near(name + " crude upper", full(crude, "upper"), hi[i], 0.002);
    c.near(name + " crude LR p-value", full(m, "crude_p_value"), 0.0024, 0.0002);
  }
}

// Stratum-specific, common and interaction results on the bundled table.
void stratified_reproduction(Criterion& c) {
  const Json report = run_cli_json({"analyze"});
  const double strata[4][2] = {{1.622, 1.018}, {1.509, 1.003}, {0.061, 0.002}, {1.563, 1.008}};
  const double common[] = {1.537, 1.062, 0.052, 1.316};
  const double lo[] = {1.119, 0.952, 0.013, 1.034};
  const double hi[] = {2.125, 1.166, 0.091, 1.676};
  const double interaction[] = {0.353, 0.010, 0.300, 0.085};
  for (int i = 0; i < 4; ++i) {
    const Json& m = report["measures"][i];
    const std::string name = m["measure"];
    for (int s = 0; s < 2; ++s) {
      c.near(name + " stratum " + std::to_string(s + 1), m["stratum_estimates_full"][s].get<double>(),
             strata[i][s], 0.001);
    }
    c.near(name + " common estimate", full(m["common"], "estimate"), common[i], 0.001);
    c.near(name + " common lower", full(m["common"], "lower"), lo[i], 0.002);
    c.near(name + " common upper", full(m["common"], "upper"), hi[i], 0.002);
    c.near(name + " interaction p-value", full(m, "interaction_p_value"), interaction[i], 0.003);
  }
}

// Standardized points and exactness of the group standards.
void standardization_arithmetic(Criterion& c) {
  const auto t = fixtures::whickham();
  const auto crude = association_points(t).crude;
  const auto study = standardize(t, standard_population(t, StandardPreset::study_sample));
  const auto exposed = standardize(t, standard_population(t, StandardPreset::exposed));
  const auto unexposed = standardize(t, standard_population(t, StandardPreset::unexposed));
  c.near("study-sample x", study.x, 0.256, 0.0005);
  c.near("study-sample y", study.y, 0.306, 0.0005);
  c.near("exposed-standard x", exposed.x, 0.182, 0.0005);
  c.near("exposed-standard y", exposed.y, 0.239, 0.0005);
  c.check("exposed-standard y equals crude y exactly", exposed.y == crude.y);
  c.check("unexposed-standard x equals crude x exactly", unexposed.x == crude.x);

  const Json cli = run_cli_json({"standardize", "--preset", "study_sample"});
  c.near("cli study-sample x", full(cli["standardized"][0]["point"], "x"), 0.256, 0.0005);
}

std::vector<RiskPoint> fitted_points(Link link, GlmFit* out = nullptr) {
  const auto table = fixtures::whickham();
  const GlmFit f = fit({link, Terms::exposure_plus_stratum, table});
  std::vector<RiskPoint> pts;
  for (const auto& r : f.fitted_risks) pts.push_back({r.unexposed, r.exposed, PointKind::stratum, {}});
  if (out) *out = f;
  return pts;
}

// Extrema along the segment joining the no-interaction fitted points.
void collapsibility(Criterion& c) {
  const auto logit = collapse_analysis(Measure::odds_ratio, fitted_points(Link::logit));
  c.near("minimum OR", logit.min_value, 1.229, 0.002);
  c.near("first-stratum weight at minimum", logit.argmin_weights.weight(0), 0.484, 0.005);

  GlmFit identity_fit;
  const auto rd = collapse_analysis(Measure::risk_difference, fitted_points(Link::identity, &identity_fit));
  c.near("RD minimum", rd.min_value, identity_fit.exposure_measure(), 1e-6);
  c.near("RD maximum", rd.max_value, identity_fit.exposure_measure(), 1e-6);
}

double segment_distance(double px, double py, const RiskPoint& a, const RiskPoint& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - a.x) * dx + (py - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (a.x + t * dx), py - (a.y + t * dy));
}

// Population-level equivalence between confounding and an off-segment crude point.
void confounding_equivalence(Criterion& c, int& degenerate, int& outside_hull) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // 1000 non-degenerate specs, plus whatever shared-coordinate cases the
  // generator produces along the way.
  int checked = 0;
  for (int trial = 0; checked < 1000; ++trial) {
    const double pick = u(rng);
    const int mode = pick < 0.6 ? 0 : pick < 0.75 ? 1 : pick < 0.9 ? 2 : 3;
    auto spec = testkit::random_population(rng, 2, mode == 3 ? 0 : mode);
    if (mode == 3) {
      // Share the x-coordinate: move mass between p00 and p01 of a copy,
      // which changes Pr(D1 = 1) but not Pr(D0 = 1).
      auto po = spec.po_probs[0];
      const double d = 0.5 * po[0] * u(rng);
      po[0] -= d;
      po[1] += d;
      spec.po_probs[1] = po;
    }
    const auto truth = population_truth(spec);

    // Independent recomputation of the crude point and its distance.
    double x_num = 0, x_den = 0, y_num = 0, y_den = 0;
    std::vector<RiskPoint> strata;
    for (std::size_t s = 0; s < 2; ++s) {
      const auto& p = spec.po_probs[s];
      const double r0 = p[2] + p[3], r1 = p[1] + p[3];
      strata.push_back({r0, r1, PointKind::stratum, {}});
      const double w1 = spec.stratum_probs[s] * spec.exposure_probs[s];
      const double w0 = spec.stratum_probs[s] * (1 - spec.exposure_probs[s]);
      x_num += w0 * r0;
      x_den += w0;
      y_num += w1 * r1;
      y_den += w1;
    }
    const double distance = segment_distance(x_num / x_den, y_num / y_den, strata[0], strata[1]);
    c.near("library crude distance", truth.crude_distance, distance, 1e-12);

    const bool exposure_varies = std::abs(spec.exposure_probs[0] - spec.exposure_probs[1]) > 1e-12;
    const bool points_differ = std::abs(strata[0].x - strata[1].x) > 1e-12 ||
                               std::abs(strata[0].y - strata[1].y) > 1e-12;
    const bool confounded = exposure_varies && points_differ;
    c.check("confounded flag matches definition", truth.confounded == confounded);
    const bool shared = points_differ && (std::abs(strata[0].x - strata[1].x) <= 1e-12 ||
                                          std::abs(strata[0].y - strata[1].y) <= 1e-12);
    if (shared) {
      ++degenerate;
      c.check("shared-coordinate case stays on segment", distance <= 1e-12);
      continue;
    }
    ++checked;
    if ((distance > 1e-12) != confounded) {
      c.fail("trial " + std::to_string(trial) + ": distance " + Criterion::fmt(distance) +
             (confounded ? " but confounded" : " but unconfounded"));
    }
  }

  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 3 + trial % 4;
    const double pick = u(rng);
    const auto spec = testkit::random_population(rng, k, pick < 0.8 ? 0 : pick < 0.9 ? 1 : 2);
    const auto truth = population_truth(spec);
    const auto hull = standardized_hull(truth.association_strata);
    if (contains(hull, truth.crude, 1e-12) == Containment::outside) {
      ++outside_hull;
      c.check("outside hull implies confounded (k=" + std::to_string(k) + ")", truth.confounded);
    }
  }
  c.check("some k>2 crude points fall outside the hull", outside_hull > 0);
}

// Straight contours for RR/RD; OR/HR pulled toward but never across the null.
void collapsibility_law(Criterion& c) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_real_distribution<double> logv(-2.0, 2.0);
  int segments = 0;
  while (segments < 1000) {
    const double x1 = u(rng), x2 = u(rng);
    if (std::abs(x1 - x2) < 1e-3) continue;
    ++segments;
    for (Measure m : kAllMeasures) {
      double v = m == Measure::risk_difference ? 0.2 * logv(rng) : std::exp(logv(rng));
      if (!is_collapsible(m) && std::abs(std::log(v)) < 1e-3) v = 1.5;
      const auto y1 = contour(m, v, x1), y2 = contour(m, v, x2);
      if (!y1 || !y2) continue;
      if (*y1 <= 0.0 || *y1 >= 1.0 || *y2 <= 0.0 || *y2 >= 1.0) continue;
      const RiskPoint a{x1, *y1, PointKind::stratum, {}}, b{x2, *y2, PointKind::stratum, {}};
      for (int i = 1; i < 100; ++i) {
        const double t = i / 100.0;
        const double val = *measure_value(m, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        if (is_collapsible(m)) {
          c.near(std::string(abbreviation(m)) + " constant along segment", val, v, 1e-12);
        } else {
          const bool between = (v > 1.0) ? (val > 1.0 && val < v) : (val < 1.0 && val > v);
          c.check(std::string(abbreviation(m)) + " strictly between null and v", between);
        }
      }
    }
  }
}

// Saturated fits, score at the optimum, chi-square CDF against quadrature.
void numerical_hygiene(Criterion& c) {
  const auto table = fixtures::whickham();
  for (Link link : {Link::logit, Link::log, Link::identity, Link::cloglog}) {
    const std::string name(to_string(link));
    const ModelSpec sat{link, Terms::saturated_with_interaction, table};
    const auto f = fit(sat);
    for (std::size_t s = 0; s < table.size(); ++s) {
      const auto obs = stratum_risks(table.stratum(s).cell);
      c.near(name + " saturated exposed risk", f.fitted_risks[s].exposed, obs.exposed, 1e-10);
      c.near(name + " saturated unexposed risk", f.fitted_risks[s].unexposed, obs.unexposed, 1e-10);
    }
    for (Terms terms : {Terms::exposure_only, Terms::exposure_plus_stratum, Terms::saturated_with_interaction}) {
      const ModelSpec spec{link, terms, table};
      const auto g = fit(spec);
      for (std::size_t j = 0; j < g.coefficients.size(); ++j) {
        const double fd = testkit::partial_derivative(
            [&](const std::vector<double>& b) { return log_likelihood_at(spec, b); }, g.coefficients, j);
        c.near(name + " finite-difference score", fd, 0.0, 1e-6);
      }
    }
  }
  for (int i = 1; i <= 50; ++i) {
    const double x = 0.25 * i;
    for (double df : {1.0, 2.0, 3.0}) {
      c.near("chi-square cdf x=" + Criterion::fmt(x), chi_square_cdf(x, df),
             testkit::chi_square_cdf_by_quadrature(x, df), 1e-8);
    }
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Every figure renders, parses, and its markers invert to the analysis values.
void figure_smoke(Criterion& c) {
  const auto dir = std::filesystem::temp_directory_path() / "rothman_acceptance_figures";
  std::filesystem::create_directories(dir);
  const auto whickham = fixtures::whickham();
  const auto pts = association_points(whickham);
  const auto six = association_points(fixtures::whickham_six_strata_synthetic());

  struct Expected {
    int panel;
    std::string cls;
    RiskPoint point;
  };
  for (int n = 1; n <= kFigureCount; ++n) {
    const auto path = dir / ("fig" + std::to_string(n) + ".svg");
    std::istringstream in;
    std::ostringstream out, err;
    const int status = cli::run({"plot", "--figure", std::to_string(n), "-o", path.string()}, in, out, err);
    const std::string tag = "figure " + std::to_string(n);
    if (status != 0) {
      c.fail(tag + " exit status " + std::to_string(status) + ": " + err.str());
      continue;
    }
    const std::string svg = slurp(path);
    c.check(tag + " well-formed", testkit::well_formed_xml(svg, "svg"));
    const auto probe = testkit::probe_svg(svg);

    std::vector<Expected> expected;
    auto add = [&](int panel, const std::string& cls, const std::vector<RiskPoint>& ps) {
      for (const auto& p : ps) expected.push_back({panel, cls, p});
    };
    switch (n) {
      case 1:
        add(0, "stratum", pts.strata);
        add(0, "crude", {pts.crude});
        for (auto preset : {StandardPreset::study_sample, StandardPreset::exposed, StandardPreset::unexposed}) {
          add(0, "standardized", {standardize(whickham, standard_population(whickham, preset))});
        }
        break;
      case 2:
        add(0, "stratum", pts.strata);
        add(0, "crude", {pts.crude});
        break;
      case 3:
        add(0, "stratum", six.strata);
        add(0, "crude", {six.crude});
        break;
      case 4:
      case 5:
        for (int panel = 0; panel < 4; ++panel) {
          add(panel, "stratum", pts.strata);
          if (n == 4) add(panel, "crude", {pts.crude});
        }
        break;
      case 6:
        add(0, "stratum", fitted_points(Link::identity));
        break;
      case 7: {
        const auto fitted = fitted_points(Link::logit);
        add(0, "stratum", fitted);
        const auto r = collapse_analysis(Measure::odds_ratio, fitted);
        add(0, "standardized", {standardize(fitted, r.argmin_weights)});
        break;
      }
    }
    c.check(tag + " marker count", probe.circles.size() == expected.size());
    for (const auto& e : expected) {
      const double err_px = probe.nearest(e.cls, e.panel, e.point.x, e.point.y);
      c.near(tag + " " + e.cls + " marker (px)", err_px, 0.0, 0.5);
    }
  }
  std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
  struct Entry {
    const char* id;
    const char* title;
    std::function<std::string(Criterion&)> body;
  };
  int degenerate = 0, outside_hull = 0;
  const std::vector<Entry> entries = {
      {"AC1", "crude estimates, LR p-value and intervals",
       [](Criterion& c) { crude_reproduction(c); return std::string(); }},
      {"AC2", "stratified, common and interaction results",
       [](Criterion& c) { stratified_reproduction(c); return std::string(); }},
      {"AC3", "standardization arithmetic",
       [](Criterion& c) { standardization_arithmetic(c); return std::string(); }},
      {"AC4", "collapsibility along fitted-point segments",
       [](Criterion& c) { collapsibility(c); return std::string(); }},
      {"AC5", "confounding iff crude off segment (1000 specs, k=2; 1000 specs, k=3..6)",
       [&](Criterion& c) {
         confounding_equivalence(c, degenerate, outside_hull);
         return " shared-coordinate cases " + std::to_string(degenerate) + ", outside-hull cases " +
                std::to_string(outside_hull);
       }},
      {"AC6", "collapsibility law on 1000 random segments",
       [](Criterion& c) { collapsibility_law(c); return std::string(); }},
      {"AC7", "numerical hygiene", [](Criterion& c) { numerical_hygiene(c); return std::string(); }},
      {"AC8", "figure smoke suite 1-7", [](Criterion& c) { figure_smoke(c); return std::string(); }},
  };

  bool all = true;
  for (const auto& e : entries) {
    Criterion c;
    std::string note;
    try {
      note = e.body(c);
    } catch (const std::exception& ex) {
      c.fail(std::string("exception: ") + ex.what());
    }
    all = all && c.passed();
    std::printf("%s %s  %s (worst error %.2f of tolerance)%s\n", e.id, c.passed() ? "PASS" : "FAIL",
                e.title, c.worst_fraction_of_tolerance(), note.empty() ? "" : (";" + note).c_str());
    for (const auto& f : c.failures()) std::printf("    %s\n", f.c_str());
    if (c.failure_count() > static_cast<int>(c.failures().size())) {
      std::printf("    ... %d failures in total\n", c.failure_count());
    }
  }
  return all ? 0 : 1;
}
