#include "herglotz/ode.hpp"

#include <algorithm>

namespace herglotz {

MidpointStencil midpoint_stencil(std::size_t n, std::size_t k) {
  MidpointStencil st{};
  if (n < 4) {
    st.first = k;
    st.weights = {0.5, n > k + 1 ? 0.5 : 0.0, 0.0, 0.0};
    if (n <= k + 1) st.weights[0] = 1.0;
    return st;
  }
  st.first = std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, n - 4);
  const double x = static_cast<double>(k - st.first) + 0.5;
  for (int j = 0; j < 4; ++j) {
    double w = 1.0;
    for (int m = 0; m < 4; ++m) {
      if (m != j) w *= (x - m) / static_cast<double>(j - m);
    }
    st.weights[static_cast<std::size_t>(j)] = w;
  }
  return st;
}

Complex midpoint_value(std::span<const Complex> samples, std::size_t k) {
  const auto st = midpoint_stencil(samples.size(), k);
  Complex out = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    if (st.weights[j] != 0.0) out += st.weights[j] * samples[st.first + j];
  }
  return out;
}

std::vector<double> rk4_weights(std::size_t count, std::size_t lo, std::size_t hi, double dt) {
  std::vector<double> w(count, 0.0);
  for (std::size_t k = lo; k < hi; ++k) {
    w[k] += dt / 6.0;
    w[k + 1] += dt / 6.0;
    const auto st = midpoint_stencil(count, k);
    for (std::size_t j = 0; j < 4; ++j) {
      if (st.weights[j] != 0.0) w[st.first + j] += 4.0 * dt / 6.0 * st.weights[j];
    }
  }
  return w;
}

std::vector<Complex> rk4_march(std::size_t count, std::size_t start, Complex z0, double dt,
                               const StageFn& f) {
  std::vector<Complex> z(count);
  z[start] = z0;
  for (std::size_t k = start; k + 1 < count; ++k) {
    const Complex k1 = f(k, false, z[k]);
    const Complex k2 = f(k, true, z[k] + 0.5 * dt * k1);
    const Complex k3 = f(k, true, z[k] + 0.5 * dt * k2);
    const Complex k4 = f(k + 1, false, z[k] + dt * k3);
    z[k + 1] = z[k] + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  for (std::size_t k = start; k > 0; --k) {
    const Complex k1 = f(k, false, z[k]);
    const Complex k2 = f(k - 1, true, z[k] - 0.5 * dt * k1);
    const Complex k3 = f(k - 1, true, z[k] - 0.5 * dt * k2);
    const Complex k4 = f(k - 1, false, z[k] - dt * k3);
    z[k - 1] = z[k] - dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return z;
}

std::vector<Complex> cumulative_trapezoid(std::span<const Complex> f, std::size_t start,
                                          double dt) {
  std::vector<Complex> out(f.size());
  out[start] = 0.0;
  for (std::size_t k = start; k + 1 < f.size(); ++k) out[k + 1] = out[k] + 0.5 * dt * (f[k] + f[k + 1]);
  for (std::size_t k = start; k > 0; --k) out[k - 1] = out[k] - 0.5 * dt * (f[k] + f[k - 1]);
  return out;
}

Complex trapezoid(std::span<const Complex> f, std::size_t lo, std::size_t hi, double dt) {
  if (hi <= lo) return 0.0;
  Complex s = 0.5 * (f[lo] + f[hi]);
  for (std::size_t k = lo + 1; k < hi; ++k) s += f[k];
  return s * dt;
}

}  // namespace herglotz
