#pragma once

#include <span>

namespace majinlink::stats {

struct Quartiles {
  double median = 0;
  double q1 = 0;
  double q3 = 0;
};

/// Type-7 (linear interpolation) sample quantile, p in [0,1].
/// Throws InvalidArgument on empty input.
double quantile(std::span<const double> values, double p);

/// Median and interquartile bounds, type-7. Throws on empty input.
Quartiles median_iqr(std::span<const double> values);

}  // namespace majinlink::stats
