#pragma once

#include <functional>

namespace rothman {

struct ScalarMinimum {
  double argument = 0.0;
  double value = 0.0;
};

/// Minimizes f over [0, 1]: a grid scan at `grid_intervals` + 1 evenly
/// spaced points picks the best bracket, then golden-section search
/// narrows it to width `tolerance`. Non-finite samples (NaN) are skipped;
/// returns the best finite value seen. Throws NumericalError if every
/// sample is NaN.
ScalarMinimum minimize_on_unit_interval(const std::function<double(double)>& f,
                                        int grid_intervals = 256, double tolerance = 1e-10);

}  // namespace rothman
