#pragma once

#include <cstddef>
#include <vector>

#include "herglotz/grid.hpp"

namespace herglotz {

/// Forward quotient (f(t+h) - f(t)) / h. The result loses h_nodes of margin
/// on the right.
SampledSignal delta_derivative(const SampledSignal& f, const ScaleParams& params);

/// Backward quotient (f(t) - f(t-h)) / h. The result loses h_nodes of margin
/// on the left.
SampledSignal nabla_derivative(const SampledSignal& f, const ScaleParams& params);

/// h-scale derivative: real part is the mean of the forward and backward
/// quotients, imaginary part is half their difference. Complex inputs are
/// handled by linearity (real and imaginary parts separately). The result
/// loses h_nodes of margin on both sides.
SampledSignal box_h_derivative(const SampledSignal& f, const ScaleParams& params);

enum class BoxMode { FixedH, Extrapolated };

struct DefectReport {
  /// Per-node residual variance of the affine-in-h fit (zeros for FixedH).
  std::vector<double> variance;
  double max_variance = 0.0;
  double mean_variance = 0.0;
};

struct BoxResult {
  SampledSignal derivative;
  DefectReport defect;
};

/// Fixed-h mode returns box_h_derivative at params.h(). Extrapolated mode
/// fits v(h) = v0 + c h per node across the ladder and returns v0, with the
/// fit's residual variance as a convergence diagnostic.
BoxResult box_derivative(const SampledSignal& f, const ScaleParams& params,
                         BoxMode mode);

/// n-fold composition of box_h_derivative; order 0 returns f unchanged.
SampledSignal higher_order_box(const SampledSignal& f, std::size_t order,
                               const ScaleParams& params);

/// box_h_derivative along one axis of a product-grid field, other coordinates
/// held fixed. The result loses h_nodes of margin on both sides of that axis.
FieldSamples partial_box(const FieldSamples& u, std::size_t axis,
                         const ScaleParams& params);

/// box_h(f g) - box_h(f) g - f box_h(g), on the box-derivative grid.
SampledSignal leibniz_residual(const SampledSignal& f, const SampledSignal& g,
                               const ScaleParams& params);

struct BarrowResult {
  Complex integral;
  /// |integral - (f(b) - f(a))|
  double defect = 0.0;
};

/// Integral of box_h f over [a, b] under the matched quadrature: left
/// rectangles at step h for the forward part, right rectangles for the
/// backward part, so the sums telescope.
BarrowResult box_integral(const SampledSignal& f, const ScaleParams& params);

/// |int box_h f g + int f box_h g - [f g]_a^b| with the matched quadrature.
double integration_by_parts_defect(const SampledSignal& f, const SampledSignal& g,
                                   const ScaleParams& params);

}  // namespace herglotz
