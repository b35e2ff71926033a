#include "herglotz/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "herglotz/errors.hpp"
#include "herglotz/fit.hpp"

namespace herglotz {

HolderEstimate holder_exponent(const SampledSignal& f) {
  const std::size_t n = f.size();
  if (n < 64) {
    throw Error(ErrorKind::TooFewSamples,
                "Holder estimate needs at least 64 samples, got " + std::to_string(n));
  }
  const double step = f.grid().step();
  const double max_lag = (f.grid().b() - f.grid().a()) / 8.0;

  HolderEstimate est;
  std::vector<double> lx, ly;
  for (std::size_t lag = 1; lag < n && static_cast<double>(lag) * step <= max_lag * (1.0 + 1e-12);
       lag *= 2) {
    double modulus = 0.0;
    for (std::size_t k = 0; k + lag < n; ++k) {
      modulus = std::max(modulus, std::abs(f[k + lag] - f[k]));
    }
    if (modulus <= 0.0) continue;
    lx.push_back(std::log(static_cast<double>(lag) * step));
    ly.push_back(std::log(modulus));
    est.regression_points.emplace_back(lx.back(), ly.back());
  }
  // Constant signals (or a single usable lag) satisfy every Holder bound.
  if (lx.size() < 2) return est;

  const auto fit = fit_line(lx, ly);
  est.slope = fit.slope;
  est.r_squared = fit.r_squared;
  est.alpha_hat = std::clamp(fit.slope, std::numeric_limits<double>::min(), 1.0);
  return est;
}

SampledSignal weierstrass(double amp, int freq, int terms, const UniformGrid& grid) {
  if (!(amp > 0.0 && amp < 1.0) || freq < 2) {
    throw Error(ErrorKind::InvalidArgument, "Weierstrass needs amp in (0, 1) and freq >= 2");
  }
  if (!(amp * freq > 1.0)) {
    throw Error(ErrorKind::InvalidRegime,
                "amp * freq = " + std::to_string(amp * freq) + " <= 1 gives a differentiable sum");
  }
  if (terms < 1) throw Error(ErrorKind::InvalidArgument, "Weierstrass needs at least one term");

  std::vector<Complex> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double t = grid.node(k);
    double sum = 0.0;
    double a_pow = 1.0;
    double f_pow = 1.0;
    for (int j = 0; j < terms; ++j) {
      // cos(pi x) has period 2 in x; reduce first to keep the argument small.
      const double phase = std::fmod(f_pow * t, 2.0);
      sum += a_pow * std::cos(std::numbers::pi * phase);
      a_pow *= amp;
      f_pow *= freq;
    }
    v[k] = sum;
  }
  return {grid, std::move(v), SignalKind::Real};
}

double weierstrass_exponent(double amp, int freq) {
  return -std::log(amp) / std::log(static_cast<double>(freq));
}

}  // namespace herglotz
