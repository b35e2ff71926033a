#pragma once

#include <span>

namespace herglotz {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares slope of log(value) against log(h). Non-positive values are
/// rejected with InvalidArgument.
LineFit fit_loglog(std::span<const double> h, std::span<const double> value);

}  // namespace herglotz
