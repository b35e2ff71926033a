#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace herglotz {

using Complex = std::complex<double>;

/// Uniform node set covering [a, b] plus `margin_lo` nodes before a and
/// `margin_hi` nodes after b. Node k sits at a + (k - margin_lo) * step.
///
/// Signals live on the extended interval so that forward/backward quotients
/// at the ends of [a, b] read real samples instead of one-sided fallbacks.
/// Operators that consume margin (delta, nabla, box) return a grid with the
/// margin reduced on the side(s) they read from.
class UniformGrid {
 public:
  UniformGrid(double a, double b, double step, std::size_t margin_nodes);
  UniformGrid(double a, double b, double step, std::size_t margin_lo,
              std::size_t margin_hi);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double step() const noexcept { return step_; }
  std::size_t margin_lo() const noexcept { return margin_lo_; }
  std::size_t margin_hi() const noexcept { return margin_hi_; }
  /// Smallest of the two margins; the symmetric margin for symmetric grids.
  std::size_t margin_nodes() const noexcept {
    return margin_lo_ < margin_hi_ ? margin_lo_ : margin_hi_;
  }
  bool symmetric() const noexcept { return margin_lo_ == margin_hi_; }

  /// Number of steps between a and b.
  std::size_t cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return margin_lo_ + cells_ + 1 + margin_hi_; }
  std::size_t index_of_a() const noexcept { return margin_lo_; }
  std::size_t index_of_b() const noexcept { return margin_lo_ + cells_; }

  double node(std::size_t k) const noexcept {
    return a_ + (static_cast<double>(k) - static_cast<double>(margin_lo_)) * step_;
  }

  /// Same grid with `lo`/`hi` nodes removed from the respective margins.
  /// Throws InsufficientMargin when a margin is too small.
  UniformGrid shrink(std::size_t lo, std::size_t hi) const;
  UniformGrid with_margins(std::size_t lo, std::size_t hi) const;

  /// Same interval and step (margins may differ).
  bool compatible(const UniformGrid& other) const noexcept;
  bool operator==(const UniformGrid& other) const noexcept;

 private:
  double a_;
  double b_;
  double step_;
  std::size_t margin_lo_;
  std::size_t margin_hi_;
  std::size_t cells_;
};

enum class SignalKind { Real, Complex };

/// Complex samples, one per grid node. A real-valued signal keeps every
/// imaginary part at exactly zero; the constructor rejects anything else.
class SampledSignal {
 public:
  SampledSignal(UniformGrid grid, std::vector<Complex> values,
                SignalKind kind = SignalKind::Complex);

  static SampledSignal sample(const UniformGrid& grid,
                              const std::function<double(double)>& fn);
  static SampledSignal sample_complex(const UniformGrid& grid,
                                      const std::function<Complex(double)>& fn);
  static SampledSignal constant(const UniformGrid& grid, double value);

  const UniformGrid& grid() const noexcept { return grid_; }
  SignalKind kind() const noexcept { return kind_; }
  bool is_real() const noexcept { return kind_ == SignalKind::Real; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const Complex> values() const& noexcept { return values_; }
  std::vector<Complex> values() && { return std::move(values_); }
  const Complex& operator[](std::size_t k) const { return values_[k]; }

  /// Value at the node whose position is `offset` nodes from a.
  const Complex& at_offset(std::ptrdiff_t offset) const;
  const Complex& at_a() const { return values_[grid_.index_of_a()]; }
  const Complex& at_b() const { return values_[grid_.index_of_b()]; }

  /// Copy reduced to a grid with smaller margins.
  SampledSignal restrict_margins(std::size_t lo, std::size_t hi) const;
  /// Real parts only, as a Real-kind signal.
  SampledSignal real_part() const;

  double sup_norm() const;

 private:
  UniformGrid grid_;
  std::vector<Complex> values_;
  SignalKind kind_;
};

SampledSignal operator+(const SampledSignal& f, const SampledSignal& g);
SampledSignal operator-(const SampledSignal& f, const SampledSignal& g);
SampledSignal operator*(const SampledSignal& f, const SampledSignal& g);
SampledSignal operator*(Complex c, const SampledSignal& f);

/// Scale step h as a whole number of grid steps, plus an optional geometric
/// ladder of further h values (also whole numbers of steps) for
/// extrapolation and convergence studies.
class ScaleParams {
 public:
  ScaleParams(double step, std::size_t h_nodes,
              std::vector<std::size_t> ladder_nodes = {},
              std::size_t ladder_min_points = 3);

  /// h = h_nodes * step, validated to be a whole multiple within 1e-9.
  static ScaleParams from_h(double step, double h,
                            const std::vector<double>& ladder = {});
  /// Ladder h0 * 2^-k, k = 0..levels-1 with h0 = h0_nodes * step.
  static ScaleParams dyadic(double step, std::size_t h_nodes,
                            std::size_t h0_nodes = 16, std::size_t levels = 5);

  double step() const noexcept { return step_; }
  double h() const noexcept { return static_cast<double>(h_nodes_) * step_; }
  std::size_t h_nodes() const noexcept { return h_nodes_; }
  const std::vector<std::size_t>& ladder_nodes() const noexcept { return ladder_nodes_; }
  std::vector<double> ladder() const;
  std::size_t ladder_min_points() const noexcept { return ladder_min_points_; }

  /// Same ladder and step, different working h.
  ScaleParams with_h_nodes(std::size_t h_nodes) const;

  /// Throws GridMismatch unless `grid` uses this step.
  void check_grid(const UniformGrid& grid) const;

 private:
  double step_;
  std::size_t h_nodes_;
  std::vector<std::size_t> ladder_nodes_;
  std::size_t ladder_min_points_;
};

/// Samples of u on a (1 + n)-dimensional product grid, axis 0 first,
/// row-major (last axis fastest).
class FieldSamples {
 public:
  FieldSamples(std::vector<UniformGrid> axes, std::vector<Complex> values,
               SignalKind kind = SignalKind::Complex);

  static FieldSamples sample(std::vector<UniformGrid> axes,
                             const std::function<double(std::span<const double>)>& fn);

  const std::vector<UniformGrid>& axes() const noexcept { return axes_; }
  std::size_t rank() const noexcept { return axes_.size(); }
  SignalKind kind() const noexcept { return kind_; }
  std::span<const Complex> values() const& noexcept { return values_; }
  std::vector<Complex> values() && { return std::move(values_); }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  std::size_t flat_index(std::span<const std::size_t> index) const;
  void unflatten(std::size_t flat, std::span<std::size_t> index) const;
  const Complex& operator[](std::size_t flat) const { return values_[flat]; }

  /// Copy with axis margins reduced to the given per-axis values.
  FieldSamples restrict_margins(std::span<const std::size_t> lo,
                                std::span<const std::size_t> hi) const;

 private:
  std::vector<UniformGrid> axes_;
  std::vector<Complex> values_;
  std::vector<std::size_t> strides_;
  SignalKind kind_;
};

}  // namespace herglotz
