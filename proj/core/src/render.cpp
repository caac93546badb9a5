#include "rothman/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rothman/error.hpp"

namespace rothman {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string value_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const char* dash(LineStyle s) { return s == LineStyle::dashed ? " stroke-dasharray=\"6,4\"" : ""; }

std::string points_attr(const PlotFrame& f, std::span<const RiskPoint> pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out.push_back(' ');
    out += num(f.to_px_x(pts[i].x)) + "," + num(f.to_px_y(pts[i].y));
  }
  return out;
}

std::string_view kind_class(PointKind k) {
  switch (k) {
    case PointKind::crude: return "crude";
    case PointKind::stratum: return "stratum";
    case PointKind::standardized: return "standardized";
    case PointKind::causal: return "causal";
  }
  return "point";
}

void render_panel(std::ostringstream& os, const DiagramSpec& spec, int index, double ox, double oy) {
  validate(spec);
  const PlotFrame f = plot_frame(spec.canvas, ox, oy);
  os << "<g class=\"panel\" data-index=\"" << index << "\" data-left=\"" << num(f.left)
     << "\" data-top=\"" << num(f.top) << "\" data-width=\"" << num(f.width)
     << "\" data-height=\"" << num(f.height) << "\">\n";

  if (!spec.title.empty()) {
    os << "<text class=\"title\" x=\"" << num(f.left + f.width / 2) << "\" y=\""
       << num(oy + spec.canvas.margin / 2.0) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"16\">" << escape(spec.title) << "</text>\n";
  }

  // Axes and ticks.
  os << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
  os << "<rect class=\"unit-square\" x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\""
     << num(f.width) << "\" height=\"" << num(f.height) << "\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 10; ++i) {
    const double t = i / 10.0;
    os << "<line x1=\"" << num(f.to_px_x(t)) << "\" y1=\"" << num(f.to_px_y(0)) << "\" x2=\""
       << num(f.to_px_x(t)) << "\" y2=\"" << num(f.to_px_y(0) + 5) << "\"/>\n";
    os << "<line x1=\"" << num(f.to_px_x(0)) << "\" y1=\"" << num(f.to_px_y(t)) << "\" x2=\""
       << num(f.to_px_x(0) - 5) << "\" y2=\"" << num(f.to_px_y(t)) << "\"/>\n";
  }
  os << "</g>\n";
  os << "<g class=\"tick-labels\" font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int i = 0; i <= 10; ++i) {
    const double t = i / 10.0;
    char label[8];
    std::snprintf(label, sizeof label, "%.1f", t);
    os << "<text x=\"" << num(f.to_px_x(t)) << "\" y=\"" << num(f.to_px_y(0) + 18)
       << "\" text-anchor=\"middle\">" << label << "</text>\n";
    os << "<text x=\"" << num(f.to_px_x(0) - 8) << "\" y=\"" << num(f.to_px_y(t) + 4)
       << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  os << "</g>\n";
  os << "<text class=\"x-label\" x=\"" << num(f.left + f.width / 2) << "\" y=\""
     << num(f.top + f.height + 40) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"13\">" << escape(spec.x_label) << "</text>\n";
  const double yx = f.left - 42;
  const double yy = f.top + f.height / 2;
  os << "<text class=\"y-label\" x=\"" << num(yx) << "\" y=\"" << num(yy)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 "
     << num(yx) << " " << num(yy) << ")\">" << escape(spec.y_label) << "</text>\n";

  // Contours below everything else.
  os << "<g class=\"contours\" fill=\"none\">\n";
  for (const auto& c : spec.contours) {
    const auto lines = contour_polylines(c.measure, c.value);
    const std::string label = c.label.empty() ? value_label(c.value) : c.label;
    for (const auto& line : lines) {
      os << "<polyline class=\"contour\" data-measure=\"" << abbreviation(c.measure)
         << "\" data-value=\"" << value_label(c.value) << "\" stroke=\"#555555\" stroke-width=\"1.2\""
         << dash(c.style) << " points=\"" << points_attr(f, line) << "\"/>\n";
    }
    // Label where the curve crosses the cross-section x + y = 1.2, which
    // keeps labels of curves that meet at a corner apart.
    const RiskPoint* anchor = nullptr;
    double best = 0.0;
    for (const auto& line : lines) {
      for (const auto& p : line) {
        const double d = std::abs(p.x + p.y - 1.2);
        if (!anchor || d < best) {
          anchor = &p;
          best = d;
        }
      }
    }
    if (anchor) {
      const bool above = anchor->y > anchor->x + 1e-9;
      os << "<text class=\"contour-label\" x=\"" << num(f.to_px_x(anchor->x) + (above ? -4 : 4))
         << "\" y=\"" << num(f.to_px_y(anchor->y) + (above ? -4 : 12)) << "\" text-anchor=\""
         << (above ? "end" : "start") << "\" font-family=\"sans-serif\" font-size=\"10\" "
         << "fill=\"#333333\">" << escape(label) << "</text>\n";
    }
  }
  os << "</g>\n";

  os << "<line class=\"null-line\" x1=\"" << num(f.to_px_x(0)) << "\" y1=\"" << num(f.to_px_y(0))
     << "\" x2=\"" << num(f.to_px_x(1)) << "\" y2=\"" << num(f.to_px_y(1))
     << "\" stroke=\"#999999\" stroke-width=\"1.5\"/>\n";

  os << "<g class=\"rectangles\" fill=\"none\" stroke=\"black\">\n";
  for (const auto& r : spec.rectangles) {
    os << "<rect class=\"confounding-rectangle\" x=\"" << num(f.to_px_x(r.rect.x_min)) << "\" y=\""
       << num(f.to_px_y(r.rect.y_max)) << "\" width=\"" << num(r.rect.width() * f.width)
       << "\" height=\"" << num(r.rect.height() * f.height) << "\"" << dash(r.style) << "/>\n";
  }
  os << "</g>\n";

  os << "<g class=\"paths\" fill=\"none\" stroke=\"black\" stroke-width=\"2\">\n";
  for (const auto& p : spec.paths) {
    const char* element = p.closed && p.vertices.size() > 2 ? "polygon" : "polyline";
    const char* cls = p.closed && p.vertices.size() > 2 ? "hull" : "segment";
    os << "<" << element << " class=\"" << cls << "\"" << dash(p.style) << " points=\""
       << points_attr(f, p.vertices) << "\"/>\n";
  }
  os << "</g>\n";

  os << "<g class=\"points\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (const auto& p : spec.points) {
    const bool open = p.style == MarkerStyle::open_circle;
    os << "<circle class=\"point " << kind_class(p.point.kind) << (open ? " open" : " solid")
       << "\" data-panel=\"" << index << "\" cx=\"" << num(f.to_px_x(p.point.x)) << "\" cy=\""
       << num(f.to_px_y(p.point.y)) << "\" r=\"4\" stroke=\"black\" stroke-width=\"1.5\" fill=\""
       << (open ? "white" : "black") << "\"/>\n";
    if (!p.label.empty()) {
      os << "<text x=\"" << num(f.to_px_x(p.point.x) + 7) << "\" y=\""
         << num(f.to_px_y(p.point.y) + 4) << "\">" << escape(p.label) << "</text>\n";
    }
  }
  os << "</g>\n";
  os << "</g>\n";
}

}  // namespace

PlotFrame plot_frame(const Canvas& canvas, double offset_x, double offset_y) {
  return {offset_x + canvas.margin, offset_y + canvas.margin,
          static_cast<double>(canvas.width - 2 * canvas.margin),
          static_cast<double>(canvas.height - 2 * canvas.margin)};
}

void validate(const DiagramSpec& spec) {
  const auto& c = spec.canvas;
  if (c.width <= 0 || c.height <= 0 || c.margin < 0 || 2 * c.margin >= c.width ||
      2 * c.margin >= c.height) {
    throw ValidationError("canvas too small for its margins");
  }
  auto check = [](const RiskPoint& p) {
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
      throw ValidationError("diagram geometry must lie in the unit square");
    }
  };
  for (const auto& p : spec.points) check(p.point);
  for (const auto& p : spec.paths) {
    if (p.vertices.empty()) throw ValidationError("path without vertices");
    for (const auto& v : p.vertices) check(v);
  }
  for (const auto& r : spec.rectangles) {
    if (!(r.rect.x_min <= r.rect.x_max && r.rect.y_min <= r.rect.y_max)) {
      throw ValidationError("rectangle bounds are inverted");
    }
    check({r.rect.x_min, r.rect.y_min, PointKind::stratum, {}});
    check({r.rect.x_max, r.rect.y_max, PointKind::stratum, {}});
  }
  for (const auto& ct : spec.contours) {
    if (!std::isfinite(ct.value) || (is_ratio(ct.measure) && !(ct.value > 0.0))) {
      throw ValidationError("contour value outside the measure's range");
    }
  }
}

std::vector<std::vector<RiskPoint>> contour_polylines(Measure m, double value, int samples) {
  if (samples < 2) samples = 2;
  std::vector<std::vector<RiskPoint>> lines;
  std::vector<RiskPoint> current;
  // Finds the x in (a, b) where definedness switches, then the edge point.
  auto exit_point = [&](double defined_x, double undefined_x) {
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (defined_x + undefined_x);
      (contour(m, value, mid) ? defined_x : undefined_x) = mid;
    }
    return RiskPoint{defined_x, *contour(m, value, defined_x), PointKind::stratum, {}};
  };
  double prev_x = 0.0;
  bool prev_defined = false;
  for (int i = 0; i <= samples; ++i) {
    const double x = static_cast<double>(i) / samples;
    const auto y = contour(m, value, x);
    if (y) {
      if (!prev_defined && i > 0) current.push_back(exit_point(x, prev_x));
      current.push_back({x, *y, PointKind::stratum, {}});
    } else if (prev_defined) {
      current.push_back(exit_point(prev_x, x));
      lines.push_back(std::move(current));
      current.clear();
    }
    prev_x = x;
    prev_defined = y.has_value();
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

std::string render_diagram(const DiagramSpec& spec) {
  return render_panels(std::span<const DiagramSpec>(&spec, 1), 1, spec.title);
}

std::string render_panels(std::span<const DiagramSpec> panels, int columns,
                          std::string_view document_title) {
  if (panels.empty()) throw ValidationError("nothing to render");
  if (columns < 1) throw ValidationError("columns must be positive");
  const Canvas& canvas = panels.front().canvas;
  for (const auto& p : panels) {
    if (p.canvas.width != canvas.width || p.canvas.height != canvas.height) {
      throw ValidationError("panels must share one canvas size");
    }
  }
  const int cols = std::min<int>(columns, static_cast<int>(panels.size()));
  const int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
  const int width = cols * canvas.width;
  const int height = rows * canvas.height;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<title>" << escape(document_title) << "</title>\n";
  os << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const int col = static_cast<int>(i) % cols;
    const int row = static_cast<int>(i) / cols;
    render_panel(os, panels[i], static_cast<int>(i), col * canvas.width, row * canvas.height);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rothman
