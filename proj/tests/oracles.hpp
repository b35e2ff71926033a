#pragma once

// Independent reference computations used by the tests. Nothing in here calls
// into the library's operators: quotients are formed directly from closed-form
// functions, integrals by brute-force sums.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Fn = std::function<Complex(double)>;

inline Complex box(const Fn& f, double h, double t) {
  const Complex fwd = (f(t + h) - f(t)) / h;
  const Complex bwd = (f(t) - f(t - h)) / h;
  return 0.5 * (fwd + bwd) + Complex(0.0, 1.0) * 0.5 * (fwd - bwd);
}

/// box applied `order` times to the closed-form f.
inline Complex box_n(const Fn& f, double h, double t, int order) {
  if (order == 0) return f(t);
  const Fn inner = [&f, h, order](double s) { return box_n(f, h, s, order - 1); };
  return box(inner, h, t);
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (std::log(x[k]) - mx) * (std::log(x[k]) - mx);
    sxy += (std::log(x[k]) - mx) * (std::log(y[k]) - my);
  }
  return sxy / sxx;
}

/// Composite trapezoid of samples at spacing dt.
inline Complex trapezoid(const std::vector<Complex>& v, double dt) {
  Complex s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double w = (k == 0 || k + 1 == v.size()) ? 0.5 : 1.0;
    s += w * v[k];
  }
  return s * dt;
}

}  // namespace oracle
