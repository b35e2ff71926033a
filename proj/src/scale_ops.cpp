#include "herglotz/scale_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herglotz/errors.hpp"

namespace herglotz {

namespace {

// (forward + backward)/2 + i (forward - backward)/2, written so that for real
// inputs the real part is exactly the mean of the two quotients.
Complex combine_box(Complex fwd, Complex bwd) {
  const Complex mean = 0.5 * (fwd + bwd);
  const Complex half_diff = 0.5 * (fwd - bwd);
  return {mean.real() - half_diff.imag(), mean.imag() + half_diff.real()};
}

SignalKind quotient_kind(const SampledSignal& f) { return f.kind(); }

}  // namespace

SampledSignal delta_derivative(const SampledSignal& f, const ScaleParams& params) {
  params.check_grid(f.grid());
  const std::size_t hn = params.h_nodes();
  const UniformGrid out = f.grid().shrink(0, hn);
  const double h = params.h();
  std::vector<Complex> v(out.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = (f[k + hn] - f[k]) / h;
  return {out, std::move(v), quotient_kind(f)};
}

SampledSignal nabla_derivative(const SampledSignal& f, const ScaleParams& params) {
  params.check_grid(f.grid());
  const std::size_t hn = params.h_nodes();
  const UniformGrid out = f.grid().shrink(hn, 0);
  const double h = params.h();
  std::vector<Complex> v(out.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = (f[k + hn] - f[k]) / h;
  return {out, std::move(v), quotient_kind(f)};
}

SampledSignal box_h_derivative(const SampledSignal& f, const ScaleParams& params) {
  params.check_grid(f.grid());
  const std::size_t hn = params.h_nodes();
  const UniformGrid out = f.grid().shrink(hn, hn);
  const double h = params.h();
  std::vector<Complex> v(out.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Complex fwd = (f[k + 2 * hn] - f[k + hn]) / h;
    const Complex bwd = (f[k + hn] - f[k]) / h;
    v[k] = combine_box(fwd, bwd);
  }
  return {out, std::move(v), SignalKind::Complex};
}

BoxResult box_derivative(const SampledSignal& f, const ScaleParams& params, BoxMode mode) {
  if (mode == BoxMode::FixedH) {
    auto d = box_h_derivative(f, params);
    DefectReport defect;
    defect.variance.assign(d.size(), 0.0);
    return {std::move(d), std::move(defect)};
  }

  const auto& ladder = params.ladder_nodes();
  if (ladder.size() < params.ladder_min_points()) {
    throw Error(ErrorKind::LadderTooShort,
                "extrapolation needs at least " + std::to_string(params.ladder_min_points()) +
                    " ladder entries, got " + std::to_string(ladder.size()));
  }
  params.check_grid(f.grid());
  const std::size_t widest = *std::max_element(ladder.begin(), ladder.end());
  const UniformGrid out = f.grid().shrink(widest, widest);

  std::vector<SampledSignal> levels;
  levels.reserve(ladder.size());
  for (auto n : ladder) {
    levels.push_back(box_h_derivative(f, params.with_h_nodes(n))
                         .restrict_margins(out.margin_lo(), out.margin_hi()));
  }

  const auto K = static_cast<double>(ladder.size());
  std::vector<double> hs;
  double h_mean = 0.0;
  for (auto n : ladder) {
    hs.push_back(static_cast<double>(n) * params.step());
    h_mean += hs.back();
  }
  h_mean /= K;
  double sxx = 0.0;
  for (double h : hs) sxx += (h - h_mean) * (h - h_mean);

  std::vector<Complex> v0(out.size());
  DefectReport defect;
  defect.variance.resize(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    Complex y_mean = 0.0;
    for (const auto& lv : levels) y_mean += lv[k];
    y_mean /= K;
    Complex sxy = 0.0;
    for (std::size_t j = 0; j < hs.size(); ++j) sxy += (hs[j] - h_mean) * (levels[j][k] - y_mean);
    const Complex slope = sxy / sxx;
    v0[k] = y_mean - slope * h_mean;
    double ss = 0.0;
    for (std::size_t j = 0; j < hs.size(); ++j) ss += std::norm(levels[j][k] - v0[k] - slope * hs[j]);
    defect.variance[k] = ss / (K - 2.0);
  }
  if (!defect.variance.empty()) {
    double sum = 0.0;
    for (double v : defect.variance) {
      defect.max_variance = std::max(defect.max_variance, v);
      sum += v;
    }
    defect.mean_variance = sum / static_cast<double>(defect.variance.size());
  }
  return {SampledSignal(out, std::move(v0), SignalKind::Complex), std::move(defect)};
}

SampledSignal higher_order_box(const SampledSignal& f, std::size_t order,
                               const ScaleParams& params) {
  params.check_grid(f.grid());
  const std::size_t need = order * params.h_nodes();
  if (need > f.grid().margin_lo() || need > f.grid().margin_hi()) {
    throw Error(ErrorKind::InsufficientMargin,
                "order-" + std::to_string(order) + " box derivative needs " +
                    std::to_string(need) + " margin nodes on each side");
  }
  SampledSignal out = f;
  for (std::size_t k = 0; k < order; ++k) out = box_h_derivative(out, params);
  return out;
}

FieldSamples partial_box(const FieldSamples& u, std::size_t axis, const ScaleParams& params) {
  if (axis >= u.rank()) {
    throw Error(ErrorKind::AxisOutOfRange,
                "axis " + std::to_string(axis) + " of a rank-" + std::to_string(u.rank()) + " field");
  }
  params.check_grid(u.axes()[axis]);
  const std::size_t hn = params.h_nodes();
  std::vector<UniformGrid> axes = u.axes();
  axes[axis] = axes[axis].shrink(hn, hn);

  std::size_t total = 1;
  for (const auto& g : axes) total *= g.size();
  std::vector<Complex> v(total);
  const double h = params.h();
  const std::size_t stride = u.stride(axis);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    idx[axis] += hn;
    const std::size_t centre = u.flat_index(idx);
    idx[axis] -= hn;
    const Complex fwd = (u[centre + hn * stride] - u[centre]) / h;
    const Complex bwd = (u[centre] - u[centre - hn * stride]) / h;
    v[flat] = combine_box(fwd, bwd);
    for (std::size_t d = axes.size(); d-- > 0;) {
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
    }
  }
  return {std::move(axes), std::move(v), SignalKind::Complex};
}

SampledSignal leibniz_residual(const SampledSignal& f, const SampledSignal& g,
                               const ScaleParams& params) {
  if (!(f.grid() == g.grid())) {
    throw Error(ErrorKind::GridMismatch, "Leibniz residual needs both signals on one grid");
  }
  const auto fg = box_h_derivative(f * g, params);
  const auto df = box_h_derivative(f, params);
  const auto dg = box_h_derivative(g, params);
  const std::size_t hn = params.h_nodes();
  std::vector<Complex> v(fg.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = fg[k] - df[k] * g[k + hn] - f[k + hn] * dg[k];
  }
  return {fg.grid(), std::move(v), SignalKind::Complex};
}

namespace {

struct MatchedSteps {
  std::size_t hn;
  std::size_t count;  // number of h-steps from a to b
  double h;
};

MatchedSteps matched_steps(const UniformGrid& grid, const ScaleParams& params) {
  params.check_grid(grid);
  const std::size_t hn = params.h_nodes();
  if (grid.margin_lo() < hn || grid.margin_hi() < hn) {
    throw Error(ErrorKind::InsufficientMargin,
                "box integral needs box_h f on [a, b], i.e. " + std::to_string(hn) +
                    " margin nodes each side");
  }
  if (grid.cells() % hn != 0) {
    throw Error(ErrorKind::StepNotDividing,
                "h = " + std::to_string(params.h()) + " does not divide b - a");
  }
  return {hn, grid.cells() / hn, params.h()};
}

}  // namespace

BarrowResult box_integral(const SampledSignal& f, const ScaleParams& params) {
  const auto s = matched_steps(f.grid(), params);
  const std::size_t ia = f.grid().index_of_a();
  Complex fwd_sum = 0.0;
  Complex bwd_sum = 0.0;
  for (std::size_t j = 0; j < s.count; ++j) {
    const std::size_t k = ia + j * s.hn;
    fwd_sum += s.h * ((f[k + s.hn] - f[k]) / s.h);
  }
  for (std::size_t j = 1; j <= s.count; ++j) {
    const std::size_t k = ia + j * s.hn;
    bwd_sum += s.h * ((f[k] - f[k - s.hn]) / s.h);
  }
  BarrowResult r;
  r.integral = combine_box(fwd_sum, bwd_sum);
  r.defect = std::abs(r.integral - (f.at_b() - f.at_a()));
  return r;
}

namespace {

// Matched-quadrature integral of box_h(f) * g.
Complex matched_product_integral(const SampledSignal& f, const SampledSignal& g,
                                 const MatchedSteps& s) {
  const std::size_t ia = f.grid().index_of_a();
  Complex fwd_sum = 0.0;
  Complex bwd_sum = 0.0;
  for (std::size_t j = 0; j < s.count; ++j) {
    const std::size_t k = ia + j * s.hn;
    fwd_sum += s.h * ((f[k + s.hn] - f[k]) / s.h) * g[k];
  }
  for (std::size_t j = 1; j <= s.count; ++j) {
    const std::size_t k = ia + j * s.hn;
    bwd_sum += s.h * ((f[k] - f[k - s.hn]) / s.h) * g[k];
  }
  return combine_box(fwd_sum, bwd_sum);
}

}  // namespace

double integration_by_parts_defect(const SampledSignal& f, const SampledSignal& g,
                                   const ScaleParams& params) {
  if (!(f.grid() == g.grid())) {
    throw Error(ErrorKind::GridMismatch, "integration by parts needs both signals on one grid");
  }
  const auto s = matched_steps(f.grid(), params);
  const Complex lhs = matched_product_integral(f, g, s) + matched_product_integral(g, f, s);
  const Complex boundary = f.at_b() * g.at_b() - f.at_a() * g.at_a();
  return std::abs(lhs - boundary);
}

}  // namespace herglotz
