#pragma once

#include <vector>

#include "herglotz/herglotz.hpp"

namespace herglotz {

enum class SolveMode { Stationary, Minimize, Maximize };
enum class SolveStatus { Converged, MaxIterationsExceeded, LineSearchFailure };

std::string to_string(SolveMode mode);
std::string to_string(SolveStatus status);

struct StepControl {
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  std::size_t max_backtracks = 40;
};

struct SolveOptions {
  std::size_t max_iterations = 200;
  double gradient_tolerance = 1e-10;
  StepControl step_control;
  SolveMode mode = SolveMode::Stationary;
  double certification_tolerance = 5e-2;
  /// Secant updates before the Jacobian of the gradient map is rebuilt.
  std::size_t restart_every = 10;
  /// Trajectories are searched among cubic splines whose knots are at least
  /// this many h apart. Node-scale oscillations (period near 4h) make Re z(b)
  /// stationary in too many directions; the spline cannot represent them.
  double knot_spacing = 4.0;
  /// Stationary mode: Jacobian directions with singular value below this
  /// fraction of the largest are not stepped along, and convergence is
  /// judged on the gradient's component in the remaining range.
  double rank_tolerance = 1e-12;

  /// Throws InvalidArgument on non-positive tolerances or a shrink factor
  /// outside (0, 1).
  void validate() const;
};

/// A free node value: coordinate i (from 0) at grid offset `offset` from a.
struct NodeRef {
  std::size_t coordinate;
  std::size_t offset;
};

/// Entries of terminal_gradient: per coordinate, nodes a + step .. b - step,
/// then b itself when x_i(b) is free.
std::vector<NodeRef> gradient_layout(const HerglotzProblem& problem);

/// Knot count K used by extremize: the largest K >= 3 dividing the cells of
/// [a, b] with at least knot_spacing * h between knots. Throws
/// InvalidArgument when none exists.
std::size_t knot_count(const HerglotzProblem& problem, double knot_spacing);

/// d Re z(b) / d x_j along the hat perturbation at each node of
/// gradient_layout (peak 1, support two steps, margins held), from
/// Re((1/lambda(b)) int_a^b lambda [dL/dx eta + dL/d(box x) box_h eta] dt)
/// using the node weights of the RK4 quadrature that produces z.
std::vector<double> terminal_gradient(const HerglotzProblem& problem, const Trajectory& x);

struct TraceRow {
  std::size_t iter;
  Complex objective;
  double grad_norm;
  double step;
};

struct SolveResult {
  Trajectory trajectory;
  ELReport report;
  std::vector<TraceRow> trace;
  SolveStatus status;
  bool certified;  // converged and the EL report passes
};

/// Drives the gradient of Re z(b) over the spline knot values to zero
/// (stationary) or descends/ascends Re z(b).
/// Deterministic for given inputs. Never throws for non-convergence; see status.
SolveResult extremize(const HerglotzProblem& problem, const Trajectory& init,
                      const SolveOptions& options);

}  // namespace herglotz
