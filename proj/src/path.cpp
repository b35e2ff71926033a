#include "herglotz/path.hpp"

#include <cmath>

#include "herglotz/errors.hpp"
#include "herglotz/ode.hpp"

namespace herglotz {

StagePath::StagePath(UniformGrid grid, std::vector<SampledSignal> channels)
    : grid_(std::move(grid)), channels_(std::move(channels)) {
  for (const auto& c : channels_) {
    if (!(c.grid() == grid_)) throw Error(ErrorKind::GridMismatch, "path channels must share one grid");
  }
}

void StagePath::args(std::size_t k, bool mid, Complex z, std::span<Complex> out) const {
  out[0] = mid ? grid_.node(k) + 0.5 * grid_.step() : grid_.node(k);
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    out[c + 1] = mid ? midpoint_value(channels_[c].values(), k) : channels_[c][k];
  }
  out[channels_.size() + 1] = z;
}

SampledSignal integrate_along(const StagePath& path, const Lagrangian& lagrangian, Complex z_a) {
  std::vector<Complex> buf(path.slot_count());
  auto rhs = [&](std::size_t k, bool mid, Complex z) {
    path.args(k, mid, z, buf);
    return lagrangian.value(buf);
  };
  auto z = rk4_march(path.size(), path.grid().index_of_a(), z_a, path.grid().step(), rhs);
  return {path.grid(), std::move(z), SignalKind::Complex};
}

SampledSignal partial_along(const StagePath& path, const Lagrangian& lagrangian,
                            std::size_t slot, const SampledSignal& z) {
  std::vector<Complex> buf(path.slot_count());
  std::vector<Complex> out(path.size());
  if (!lagrangian.partial_is_zero(slot)) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      path.args(k, false, z[k], buf);
      out[k] = lagrangian.partial(slot, buf);
    }
  }
  return {path.grid(), std::move(out), SignalKind::Complex};
}

SampledSignal value_along(const StagePath& path, const Lagrangian& lagrangian,
                          const SampledSignal& z) {
  std::vector<Complex> buf(path.slot_count());
  std::vector<Complex> out(path.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    path.args(k, false, z[k], buf);
    out[k] = lagrangian.value(buf);
  }
  return {path.grid(), std::move(out), SignalKind::Complex};
}

SampledSignal exp_neg_cumulative(const SampledSignal& g) {
  auto acc = cumulative_trapezoid(g.values(), g.grid().index_of_a(), g.grid().step());
  bool real = true;
  for (auto& v : acc) {
    v = std::exp(-v);
    real = real && v.imag() == 0.0;
  }
  acc[g.grid().index_of_a()] = 1.0;
  if (real) {
    for (auto& v : acc) v = v.real();
  }
  return {g.grid(), std::move(acc), real ? SignalKind::Real : SignalKind::Complex};
}

}  // namespace herglotz
