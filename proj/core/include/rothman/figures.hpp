#pragma once

#include <string>
#include <vector>

#include "rothman/render.hpp"
#include "rothman/tables.hpp"

namespace rothman {

inline constexpr int kFigureCount = 7;

struct FigureContent {
  int number = 0;
  std::string slug;
  std::string title;
  std::vector<DiagramSpec> panels;
  int columns = 1;
};

/// Figures 1-7:
///   1 standardized_points     stratum, crude and standardized points
///   2 confounding_rectangle   stratum points with the rectangle they span
///   3 standardized_hull       hull of the stratum points
///   4 contours                contour families for each measure
///   5 effect_modification     contours through each stratum point
///   6 collapsible             RD fitted points with their common contour
///   7 noncollapsible          OR fitted points, common contour and minimum
/// Throws ValidationError for an unknown number.
FigureContent build_figure(int number, const StratifiedCohortTable& table);

std::string render_figure(const FigureContent& figure);

/// "figN_<slug>.svg"
std::string default_figure_filename(const FigureContent& figure);

}  // namespace rothman
