#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "herglotz/grid.hpp"

namespace herglotz {

struct HolderEstimate {
  /// Least-squares slope clamped into (0, 1].
  double alpha_hat = 1.0;
  /// Unclamped least-squares slope of the stored points.
  double slope = 1.0;
  /// (log delta, log modulus) pairs used in the fit.
  std::vector<std::pair<double, double>> regression_points;
  double r_squared = 1.0;
};

/// Estimates the Holder exponent from the maximum modulus of continuity
/// M(delta) = max_t |f(t + delta) - f(t)| over dyadic lags delta = 2^k step,
/// keeping lags up to (b - a) / 8. Needs at least 64 samples.
HolderEstimate holder_exponent(const SampledSignal& f);

/// W(t) = sum_{k < terms} amp^k cos(freq^k pi t). Requires amp in (0, 1),
/// freq >= 2 and amp * freq > 1 (the nowhere-differentiable regime).
SampledSignal weierstrass(double amp, int freq, int terms, const UniformGrid& grid);

/// Theoretical Holder exponent -ln(amp) / ln(freq) of the family above.
double weierstrass_exponent(double amp, int freq);

}  // namespace herglotz
