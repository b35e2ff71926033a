#pragma once

#include <utility>
#include <vector>

#include "herglotz/herglotz.hpp"

namespace herglotz {

/// z' = int_Omega L(t, s, u, box_t u, box_s1 u, ..., z) ds over a box Omega
/// with one or two space axes. Every axis uses the step of `scale`. The
/// Lagrangian's slots must be field_slots(space dimensions).
class FieldProblem {
 public:
  FieldProblem(double a, double b, std::vector<std::pair<double, double>> space, Complex z_a,
               Lagrangian lagrangian, ScaleParams scale);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const std::vector<std::pair<double, double>>& space() const noexcept { return space_; }
  std::size_t space_dims() const noexcept { return space_.size(); }
  Complex z_a() const noexcept { return z_a_; }
  const Lagrangian& lagrangian() const noexcept { return lagrangian_; }
  const ScaleParams& scale() const noexcept { return scale_; }

  /// Time axis followed by the space axes, each with `margin_nodes` margin.
  std::vector<UniformGrid> axes(std::size_t margin_nodes) const;

 private:
  double a_;
  double b_;
  std::vector<std::pair<double, double>> space_;
  Complex z_a_;
  Lagrangian lagrangian_;
  ScaleParams scale_;
};

struct FieldReport {
  FieldSamples residual;  // on [a, b] x Omega
  double sup_norm = 0.0;
  SampledSignal lambda;   // on [a, b]
  double tolerance = 0.0;
  bool certified = false;
  double h = 0.0;
  double step = 0.0;
  double im_z_max = 0.0;

  void certify(double tol);
};

/// Needs margins >= h_nodes on every axis of u.
ZSolution integrate_z_field(const FieldProblem& problem, const FieldSamples& u);

/// exp(-int_a^t int_Omega dL/dz), on the time grid of z.extended.
SampledSignal lambda_field(const FieldProblem& problem, const FieldSamples& u,
                           const ZSolution& z);

/// dL/du + dL/d(box_t u) int_Omega dL/dz - box_t(dL/d(box_t u))
/// - sum_i box_si(dL/d(box_si u)) at every node of [a, b] x Omega.
/// Needs margins >= 2 h_nodes on every axis.
FieldReport el_residual_field(const FieldProblem& problem, const FieldSamples& u,
                              const ZSolution& z, double tolerance = 1e-1);

}  // namespace herglotz
