#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "herglotz/grid.hpp"

namespace herglotz {

/// Value halfway between samples k and k+1 by cubic Lagrange interpolation on
/// the four nearest samples (stencil clamped to the ends of the span). Spans
/// shorter than four samples fall back to the linear midpoint.
Complex midpoint_value(std::span<const Complex> samples, std::size_t k);

/// Samples and weights used by midpoint_value.
struct MidpointStencil {
  std::size_t first;
  std::array<double, 4> weights;
};
MidpointStencil midpoint_stencil(std::size_t n, std::size_t k);

/// Node weights of the quadrature RK4 performs on a z-independent integrand
/// from node lo to node hi: Simpson with cubic midpoints. Equal to dt in the
/// interior; the midpoint stencils reach one node past each end.
std::vector<double> rk4_weights(std::size_t count, std::size_t lo, std::size_t hi, double dt);

/// Right-hand side of z' = F at node k (mid = false) or at the half node
/// k + 1/2 (mid = true).
using StageFn = std::function<Complex(std::size_t k, bool mid, Complex z)>;

/// Classical RK4 on node indices 0..count-1 with spacing dt, starting from
/// z[start] = z0 and marching both forward and backward.
std::vector<Complex> rk4_march(std::size_t count, std::size_t start, Complex z0, double dt,
                               const StageFn& f);

/// Signed cumulative trapezoid integral of f from node `start`.
std::vector<Complex> cumulative_trapezoid(std::span<const Complex> f, std::size_t start,
                                          double dt);

/// Composite trapezoid over nodes [lo, hi].
Complex trapezoid(std::span<const Complex> f, std::size_t lo, std::size_t hi, double dt);

}  // namespace herglotz
