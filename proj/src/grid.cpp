#include "herglotz/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herglotz/errors.hpp"

namespace herglotz {

namespace {

std::size_t whole_cells(double a, double b, double step) {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(step))) {
    throw Error(ErrorKind::InvalidArgument, "grid bounds and step must be finite");
  }
  if (!(b > a)) throw Error(ErrorKind::InvalidArgument, "grid requires a < b");
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid step must be positive");
  const double ratio = (b - a) / step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
    throw Error(ErrorKind::StepNotDividing,
                "(b - a) / step = " + std::to_string(ratio) + " is not a whole number");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

UniformGrid::UniformGrid(double a, double b, double step, std::size_t margin_nodes)
    : UniformGrid(a, b, step, margin_nodes, margin_nodes) {}

UniformGrid::UniformGrid(double a, double b, double step, std::size_t margin_lo,
                         std::size_t margin_hi)
    : a_(a),
      b_(b),
      step_(step),
      margin_lo_(margin_lo),
      margin_hi_(margin_hi),
      cells_(whole_cells(a, b, step)) {}

UniformGrid UniformGrid::shrink(std::size_t lo, std::size_t hi) const {
  if (lo > margin_lo_ || hi > margin_hi_) {
    throw Error(ErrorKind::InsufficientMargin,
                "operator needs " + std::to_string(lo) + "/" + std::to_string(hi) +
                    " margin nodes but grid has " + std::to_string(margin_lo_) + "/" +
                    std::to_string(margin_hi_));
  }
  return with_margins(margin_lo_ - lo, margin_hi_ - hi);
}

UniformGrid UniformGrid::with_margins(std::size_t lo, std::size_t hi) const {
  UniformGrid g = *this;
  g.margin_lo_ = lo;
  g.margin_hi_ = hi;
  return g;
}

bool UniformGrid::compatible(const UniformGrid& other) const noexcept {
  return a_ == other.a_ && b_ == other.b_ && step_ == other.step_;
}

bool UniformGrid::operator==(const UniformGrid& other) const noexcept {
  return compatible(other) && margin_lo_ == other.margin_lo_ &&
         margin_hi_ == other.margin_hi_;
}

// ---------------------------------------------------------------------------

SampledSignal::SampledSignal(UniformGrid grid, std::vector<Complex> values,
                             SignalKind kind)
    : grid_(std::move(grid)), values_(std::move(values)), kind_(kind) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "signal has " + std::to_string(values_.size()) + " values for " +
                    std::to_string(grid_.size()) + " grid nodes");
  }
  if (kind_ == SignalKind::Real) {
    for (const auto& v : values_) {
      if (v.imag() != 0.0) {
        throw Error(ErrorKind::InvalidArgument,
                    "real-valued signal has a nonzero imaginary part");
      }
    }
  }
}

SampledSignal SampledSignal::sample(const UniformGrid& grid,
                                    const std::function<double(double)>& fn) {
  std::vector<Complex> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid.node(k));
  return {grid, std::move(v), SignalKind::Real};
}

SampledSignal SampledSignal::sample_complex(const UniformGrid& grid,
                                            const std::function<Complex(double)>& fn) {
  std::vector<Complex> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid.node(k));
  return {grid, std::move(v), SignalKind::Complex};
}

SampledSignal SampledSignal::constant(const UniformGrid& grid, double value) {
  return {grid, std::vector<Complex>(grid.size(), Complex(value, 0.0)), SignalKind::Real};
}

const Complex& SampledSignal::at_offset(std::ptrdiff_t offset) const {
  const auto k = static_cast<std::ptrdiff_t>(grid_.index_of_a()) + offset;
  if (k < 0 || k >= static_cast<std::ptrdiff_t>(values_.size())) {
    throw Error(ErrorKind::InsufficientMargin,
                "node offset " + std::to_string(offset) + " outside the sampled range");
  }
  return values_[static_cast<std::size_t>(k)];
}

SampledSignal SampledSignal::restrict_margins(std::size_t lo, std::size_t hi) const {
  if (lo > grid_.margin_lo() || hi > grid_.margin_hi()) {
    throw Error(ErrorKind::InsufficientMargin, "cannot widen a signal's margins");
  }
  const std::size_t drop_lo = grid_.margin_lo() - lo;
  const std::size_t drop_hi = grid_.margin_hi() - hi;
  std::vector<Complex> v(values_.begin() + static_cast<std::ptrdiff_t>(drop_lo),
                         values_.end() - static_cast<std::ptrdiff_t>(drop_hi));
  return {grid_.with_margins(lo, hi), std::move(v), kind_};
}

SampledSignal SampledSignal::real_part() const {
  std::vector<Complex> v(values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = values_[k].real();
  return {grid_, std::move(v), SignalKind::Real};
}

double SampledSignal::sup_norm() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

template <typename Op>
SampledSignal combine(const SampledSignal& f, const SampledSignal& g, Op op) {
  if (!(f.grid() == g.grid())) {
    throw Error(ErrorKind::GridMismatch, "pointwise operation on different grids");
  }
  std::vector<Complex> v(f.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = op(f[k], g[k]);
  const bool real = f.is_real() && g.is_real();
  return {f.grid(), std::move(v), real ? SignalKind::Real : SignalKind::Complex};
}

}  // namespace

SampledSignal operator+(const SampledSignal& f, const SampledSignal& g) {
  return combine(f, g, [](Complex x, Complex y) { return x + y; });
}

SampledSignal operator-(const SampledSignal& f, const SampledSignal& g) {
  return combine(f, g, [](Complex x, Complex y) { return x - y; });
}

SampledSignal operator*(const SampledSignal& f, const SampledSignal& g) {
  return combine(f, g, [](Complex x, Complex y) {
    // Keep real products free of -0.0 / rounding noise in the imaginary slot.
    if (x.imag() == 0.0 && y.imag() == 0.0) return Complex(x.real() * y.real(), 0.0);
    return x * y;
  });
}

SampledSignal operator*(Complex c, const SampledSignal& f) {
  std::vector<Complex> v(f.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = c * f[k];
  const bool real = f.is_real() && c.imag() == 0.0;
  if (real) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = Complex(c.real() * f[k].real(), 0.0);
  }
  return {f.grid(), std::move(v), real ? SignalKind::Real : SignalKind::Complex};
}

// ---------------------------------------------------------------------------

ScaleParams::ScaleParams(double step, std::size_t h_nodes,
                         std::vector<std::size_t> ladder_nodes,
                         std::size_t ladder_min_points)
    : step_(step),
      h_nodes_(h_nodes),
      ladder_nodes_(std::move(ladder_nodes)),
      ladder_min_points_(ladder_min_points) {
  if (!(step_ > 0.0) || !std::isfinite(step_)) {
    throw Error(ErrorKind::InvalidArgument, "scale step requires a positive grid step");
  }
  if (h_nodes_ == 0) throw Error(ErrorKind::InvalidArgument, "h must be at least one grid step");
  if (!(h() < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "h = " + std::to_string(h()) + " must lie in (0, 1)");
  }
  if (ladder_min_points_ < 3) {
    throw Error(ErrorKind::InvalidArgument, "ladder_min_points must be at least 3");
  }
  for (std::size_t k = 0; k < ladder_nodes_.size(); ++k) {
    if (ladder_nodes_[k] == 0) throw Error(ErrorKind::InvalidArgument, "ladder entry of zero steps");
    if (static_cast<double>(ladder_nodes_[k]) * step_ >= 1.0) {
      throw Error(ErrorKind::InvalidArgument, "ladder entries must lie in (0, 1)");
    }
    if (k > 0 && ladder_nodes_[k] >= ladder_nodes_[k - 1]) {
      throw Error(ErrorKind::InvalidArgument, "ladder must be strictly decreasing");
    }
  }
}

namespace {

std::size_t nodes_for(double step, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::InvalidArgument, "scale step h must be positive");
  }
  const double ratio = h / step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw Error(ErrorKind::StepNotDividing,
                "h = " + std::to_string(h) + " is not a whole multiple of step " +
                    std::to_string(step));
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

ScaleParams ScaleParams::from_h(double step, double h, const std::vector<double>& ladder) {
  std::vector<std::size_t> nodes;
  nodes.reserve(ladder.size());
  for (double l : ladder) nodes.push_back(nodes_for(step, l));
  return {step, nodes_for(step, h), std::move(nodes)};
}

ScaleParams ScaleParams::dyadic(double step, std::size_t h_nodes, std::size_t h0_nodes,
                                std::size_t levels) {
  std::vector<std::size_t> nodes;
  std::size_t n = h0_nodes;
  for (std::size_t k = 0; k < levels; ++k) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "dyadic ladder falls below one grid step");
    nodes.push_back(n);
    if (k + 1 < levels && n % 2 != 0) {
      throw Error(ErrorKind::StepNotDividing, "dyadic ladder needs h0_nodes divisible by 2^(levels-1)");
    }
    n /= 2;
  }
  return {step, h_nodes, std::move(nodes)};
}

std::vector<double> ScaleParams::ladder() const {
  std::vector<double> out;
  out.reserve(ladder_nodes_.size());
  for (auto n : ladder_nodes_) out.push_back(static_cast<double>(n) * step_);
  return out;
}

ScaleParams ScaleParams::with_h_nodes(std::size_t h_nodes) const {
  return {step_, h_nodes, ladder_nodes_, ladder_min_points_};
}

void ScaleParams::check_grid(const UniformGrid& grid) const {
  if (std::abs(grid.step() - step_) > 1e-12 * step_) {
    throw Error(ErrorKind::GridMismatch,
                "scale parameters were built for step " + std::to_string(step_) +
                    " but the signal grid has step " + std::to_string(grid.step()));
  }
}

// ---------------------------------------------------------------------------

FieldSamples::FieldSamples(std::vector<UniformGrid> axes, std::vector<Complex> values,
                           SignalKind kind)
    : axes_(std::move(axes)), values_(std::move(values)), kind_(kind) {
  if (axes_.empty()) throw Error(ErrorKind::InvalidArgument, "field needs at least one axis");
  strides_.assign(axes_.size(), 1);
  std::size_t total = 1;
  for (std::size_t d = axes_.size(); d-- > 0;) {
    strides_[d] = total;
    total *= axes_[d].size();
  }
  if (total != values_.size()) {
    throw Error(ErrorKind::InvalidArgument, "field value count does not match its product grid");
  }
  if (kind_ == SignalKind::Real) {
    for (const auto& v : values_) {
      if (v.imag() != 0.0) {
        throw Error(ErrorKind::InvalidArgument, "real-valued field has a nonzero imaginary part");
      }
    }
  }
}

FieldSamples FieldSamples::sample(std::vector<UniformGrid> axes,
                                  const std::function<double(std::span<const double>)>& fn) {
  std::size_t total = 1;
  for (const auto& g : axes) total *= g.size();
  std::vector<Complex> values(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  std::vector<double> coords(axes.size());
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t d = 0; d < axes.size(); ++d) coords[d] = axes[d].node(idx[d]);
    values[flat] = fn(coords);
    for (std::size_t d = axes.size(); d-- > 0;) {
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
    }
  }
  return {std::move(axes), std::move(values), SignalKind::Real};
}

std::size_t FieldSamples::flat_index(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) flat += index[d] * strides_[d];
  return flat;
}

void FieldSamples::unflatten(std::size_t flat, std::span<std::size_t> index) const {
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    index[d] = flat / strides_[d];
    flat %= strides_[d];
  }
}

FieldSamples FieldSamples::restrict_margins(std::span<const std::size_t> lo,
                                            std::span<const std::size_t> hi) const {
  std::vector<UniformGrid> axes;
  std::vector<std::size_t> drop(axes_.size());
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    if (lo[d] > axes_[d].margin_lo() || hi[d] > axes_[d].margin_hi()) {
      throw Error(ErrorKind::InsufficientMargin, "cannot widen a field's margins");
    }
    drop[d] = axes_[d].margin_lo() - lo[d];
    axes.push_back(axes_[d].with_margins(lo[d], hi[d]));
  }
  std::size_t total = 1;
  for (const auto& g : axes) total *= g.size();
  std::vector<Complex> values(total);
  std::vector<std::size_t> idx(axes.size(), 0), src(axes.size());
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t d = 0; d < axes.size(); ++d) src[d] = idx[d] + drop[d];
    values[flat] = values_[flat_index(src)];
    for (std::size_t d = axes.size(); d-- > 0;) {
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
    }
  }
  return {std::move(axes), std::move(values), kind_};
}

}  // namespace herglotz
