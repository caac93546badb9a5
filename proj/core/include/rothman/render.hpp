#pragma once

// Rothman diagrams as standalone SVG 1.1 text. Risk in the unexposed runs
// along the x-axis and risk in the exposed up the y-axis.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rothman/geometry.hpp"
#include "rothman/measures.hpp"

namespace rothman {

enum class MarkerStyle { open_circle, solid_circle };
enum class LineStyle { solid, dashed };

struct Canvas {
  int width = 600;
  int height = 600;
  int margin = 60;
};

/// Affine map between the unit square and a panel's plotting region.
struct PlotFrame {
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;

  double to_px_x(double x) const noexcept { return left + x * width; }
  double to_px_y(double y) const noexcept { return top + (1.0 - y) * height; }
  double from_px_x(double px) const noexcept { return (px - left) / width; }
  double from_px_y(double py) const noexcept { return 1.0 - (py - top) / height; }
};

/// Plotting region of a canvas whose top-left corner sits at (offset_x, offset_y).
PlotFrame plot_frame(const Canvas& canvas, double offset_x = 0.0, double offset_y = 0.0);

struct PlotPoint {
  RiskPoint point;
  MarkerStyle style = MarkerStyle::solid_circle;
  std::string label;
};

/// Open polyline (segment) or closed polygon (hull).
struct PlotPath {
  std::vector<RiskPoint> vertices;
  bool closed = false;
  LineStyle style = LineStyle::solid;
  std::string label;
};

struct PlotRectangle {
  ConfoundingRectangle rect;
  LineStyle style = LineStyle::dashed;
};

struct PlotContour {
  Measure measure = Measure::odds_ratio;
  double value = 1.0;
  LineStyle style = LineStyle::dashed;
  /// Defaults to the value when empty.
  std::string label;
};

struct DiagramSpec {
  std::string title;
  std::string x_label = "Risk in unexposed";
  std::string y_label = "Risk in exposed";
  std::vector<PlotPoint> points;
  std::vector<PlotPath> paths;
  std::vector<PlotRectangle> rectangles;
  std::vector<PlotContour> contours;
  Canvas canvas;
};

/// Throws ValidationError for geometry outside the unit square, a
/// degenerate canvas, or a contour value outside the measure's range.
void validate(const DiagramSpec& spec);

/// Contour polylines sampled at `samples` + 1 evenly spaced x-values, split
/// where the curve leaves the unit square and ended exactly on its edge.
std::vector<std::vector<RiskPoint>> contour_polylines(Measure m, double value, int samples = 400);

/// Single-panel document. The null line is always drawn.
std::string render_diagram(const DiagramSpec& spec);

/// Panels laid out row-major on a grid with `columns` columns; each panel
/// uses its own canvas size (all panels must share one).
std::string render_panels(std::span<const DiagramSpec> panels, int columns,
                          std::string_view document_title);

}  // namespace rothman
