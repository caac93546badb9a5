#include "rothman/optimize.hpp"

#include <cmath>
#include <limits>

#include "rothman/error.hpp"

namespace rothman {

ScalarMinimum minimize_on_unit_interval(const std::function<double(double)>& f,
                                        int grid_intervals, double tolerance) {
  if (grid_intervals < 2) grid_intervals = 2;
  ScalarMinimum best{0.0, std::numeric_limits<double>::quiet_NaN()};
  int best_index = -1;
  for (int i = 0; i <= grid_intervals; ++i) {
    const double t = static_cast<double>(i) / grid_intervals;
    const double value = f(t);
    if (!std::isnan(value) && (best_index < 0 || value < best.value)) {
      best = {t, value};
      best_index = i;
    }
  }
  if (best_index < 0) throw NumericalError("objective undefined on the whole interval");
  auto consider = [&](double t, double value) {
    if (!std::isnan(value) && value < best.value) best = {t, value};
  };

  double lo = static_cast<double>(std::max(best_index - 1, 0)) / grid_intervals;
  double hi = static_cast<double>(std::min(best_index + 1, grid_intervals)) / grid_intervals;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tolerance) {
    // NaN compares false, pushing the bracket toward defined values.
    if (fc < fd || std::isnan(fd)) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  consider(mid, f(mid));
  consider(c, fc);
  consider(d, fd);
  return best;
}

}  // namespace rothman
