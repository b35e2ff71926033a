#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "herglotz/grid.hpp"
#include "herglotz/lagrangian.hpp"
#include "herglotz/path.hpp"

namespace herglotz {

/// Left value is always fixed; an empty right value means x(b) is free.
struct Boundary {
  double left = 0.0;
  std::optional<double> right;

  bool free_right() const noexcept { return !right.has_value(); }
};

/// Real-valued trajectory components on one grid.
class Trajectory {
 public:
  explicit Trajectory(std::vector<SampledSignal> components);
  static Trajectory sample(const UniformGrid& grid,
                           const std::vector<std::function<double(double)>>& fns);

  const UniformGrid& grid() const { return components_.front().grid(); }
  std::size_t dimension() const noexcept { return components_.size(); }
  const SampledSignal& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<SampledSignal>& components() const noexcept { return components_; }

 private:
  std::vector<SampledSignal> components_;
};

/// First-order problem: extremize z(b) where z' = L(t, x, box x, z), z(a) = z_a.
/// The Lagrangian's slots must be first_order_slots(dimension).
class HerglotzProblem {
 public:
  HerglotzProblem(double a, double b, Complex z_a, std::vector<Boundary> boundary,
                  Lagrangian lagrangian, ScaleParams scale);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  Complex z_a() const noexcept { return z_a_; }
  std::size_t dimension() const noexcept { return boundary_.size(); }
  const std::vector<Boundary>& boundary() const noexcept { return boundary_; }
  const Lagrangian& lagrangian() const noexcept { return lagrangian_; }
  const ScaleParams& scale() const noexcept { return scale_; }
  bool has_free_boundary() const;

  UniformGrid grid(std::size_t margin_nodes) const;

  /// Copy of x with the fixed boundary values written into nodes a and b.
  /// Throws GridMismatch if x does not live on this interval and step.
  Trajectory enforce(const Trajectory& x) const;

  /// (t, x, box x) along x, on the grid where box x exists.
  StagePath path(const Trajectory& x) const;

 private:
  double a_;
  double b_;
  Complex z_a_;
  std::vector<Boundary> boundary_;
  Lagrangian lagrangian_;
  ScaleParams scale_;
};

struct ZSolution {
  SampledSignal z;         // on [a, b]
  Complex terminal;        // z(b)
  double im_diagnostic;    // max |Im z| on [a, b]
  SampledSignal extended;  // z continued into the margins where box x exists
};

struct TransversalityEntry {
  std::size_t index;  // coordinate (first order) or derivative order (higher order), from 1
  Complex value;
};

struct ELReport {
  std::vector<SampledSignal> residual;  // on [a, b]
  std::vector<double> sup_norms;
  SampledSignal lambda;                 // on [a, b]
  std::vector<TransversalityEntry> transversality;
  /// Barrow defect of lambda * dL/d(box x_i) at the working h, per coordinate.
  /// Empty when h does not divide b - a.
  std::vector<double> barrow_defect;
  double tolerance = 0.0;
  bool certified = false;
  double h = 0.0;
  double step = 0.0;
  double im_z_max = 0.0;

  /// Sets tolerance and recomputes `certified`.
  void certify(double tol);
};

/// Needs x margins >= h_nodes.
ZSolution integrate_z(const HerglotzProblem& problem, const Trajectory& x);

/// exp(-int_a^t dL/dz) on the grid of z.extended; exactly 1 at a.
SampledSignal lambda_weight(const HerglotzProblem& problem, const Trajectory& x,
                            const ZSolution& z);

/// box_h(p_i) - dL/dx_i - dL/dz * p_i with p_i = dL/d(box x_i). Needs x margins
/// >= 2 h_nodes.
ELReport el_residual(const HerglotzProblem& problem, const Trajectory& x, const ZSolution& z,
                     double tolerance = 5e-2);

/// p_i(b) for every coordinate with a free right end. Throws NoFreeBoundary.
std::vector<TransversalityEntry> transversality_residual(const HerglotzProblem& problem,
                                                         const Trajectory& x,
                                                         const ZSolution& z);

/// |z(b) - (trapezoid int L dt + z_a)| for a z-free Lagrangian; throws NotZFree.
double classical_reduction_check(const HerglotzProblem& problem, const Trajectory& x);

}  // namespace herglotz
