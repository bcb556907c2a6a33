#pragma once

#include <limits>

namespace tvkit {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
  [[nodiscard]] double length() const { return hi - lo; }
};

}  // namespace tvkit
