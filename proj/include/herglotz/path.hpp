#pragma once

#include <span>
#include <vector>

#include "herglotz/grid.hpp"
#include "herglotz/lagrangian.hpp"

namespace herglotz {

/// Lagrangian arguments sampled along a trajectory: slot 0 is t, the last slot
/// is z, and the slots in between are read from `channels` (x, box x, ...), all
/// on one grid. Half-node values come from cubic interpolation.
class StagePath {
 public:
  StagePath(UniformGrid grid, std::vector<SampledSignal> channels);

  const UniformGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  std::size_t slot_count() const noexcept { return channels_.size() + 2; }
  const SampledSignal& channel(std::size_t c) const { return channels_[c]; }

  /// Fills `out` (slot_count() entries) at node k or half node k + 1/2.
  void args(std::size_t k, bool mid, Complex z, std::span<Complex> out) const;

 private:
  UniformGrid grid_;
  std::vector<SampledSignal> channels_;
};

/// z over every node of the path grid, z(a) = z_a, by RK4 in both directions.
SampledSignal integrate_along(const StagePath& path, const Lagrangian& lagrangian, Complex z_a);

/// A Lagrangian partial (by slot index) evaluated at the nodes of the path.
SampledSignal partial_along(const StagePath& path, const Lagrangian& lagrangian,
                            std::size_t slot, const SampledSignal& z);

SampledSignal value_along(const StagePath& path, const Lagrangian& lagrangian,
                          const SampledSignal& z);

/// exp(-cumulative trapezoid of g from a); equals 1 at a.
SampledSignal exp_neg_cumulative(const SampledSignal& g);

}  // namespace herglotz
