#pragma once

#include <vector>

#include "herglotz/herglotz.hpp"

namespace herglotz {

/// z' = L(t, x, box x, ..., box^n x, z). boundary[i] holds the left value of
/// box^i x(a) and the right value of box^i x(b) (or free), i = 0..n-1. The
/// Lagrangian's slots must be higher_order_slots(n).
class HigherOrderProblem {
 public:
  HigherOrderProblem(double a, double b, Complex z_a, std::vector<Boundary> boundary,
                     Lagrangian lagrangian, ScaleParams scale);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  Complex z_a() const noexcept { return z_a_; }
  std::size_t order() const noexcept { return boundary_.size(); }
  const std::vector<Boundary>& boundary() const noexcept { return boundary_; }
  const Lagrangian& lagrangian() const noexcept { return lagrangian_; }
  const ScaleParams& scale() const noexcept { return scale_; }

  UniformGrid grid(std::size_t margin_nodes) const;

  /// Writes x(a) and x(b). Conditions on box^i x for i >= 1 involve
  /// neighbouring samples and are reported by boundary_defects instead.
  Trajectory enforce(const Trajectory& x) const;

  /// (t, x, box x, ..., box^n x) on the grid where box^n x exists.
  StagePath path(const Trajectory& x) const;

 private:
  double a_;
  double b_;
  Complex z_a_;
  std::vector<Boundary> boundary_;
  Lagrangian lagrangian_;
  ScaleParams scale_;
};

/// |box^i x(a) - x_ia| and, for fixed right ends, |box^i x(b) - x_ib|, per i.
struct BoundaryDefect {
  std::size_t order;
  double left;
  double right;  // 0 for a free right end
};
std::vector<BoundaryDefect> boundary_defects(const HigherOrderProblem& problem,
                                             const Trajectory& x);

/// Needs x margins >= n h_nodes.
ZSolution integrate_z_ho(const HigherOrderProblem& problem, const Trajectory& x);

/// lambda dL/dx + sum_i (-1)^i box^i(lambda dL/d(box^i x)). Needs x margins
/// >= 2 n h_nodes.
ELReport el_residual_ho(const HigherOrderProblem& problem, const Trajectory& x,
                        const ZSolution& z, double tolerance = 5e-2);

/// For each i in 1..n whose box^(i-1) x(b) is free:
/// sum_{k=i}^n (-1)^(k-i) box^(k-i)(lambda dL/d(box^k x)) at b.
std::vector<TransversalityEntry> transversality_ho(const HigherOrderProblem& problem,
                                                   const Trajectory& x, const ZSolution& z);

}  // namespace herglotz
