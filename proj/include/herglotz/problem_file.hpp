#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "herglotz/fields.hpp"
#include "herglotz/higher_order.hpp"
#include "herglotz/io.hpp"
#include "herglotz/solver.hpp"

namespace herglotz {

enum class Variant { Scalar, Vector, HigherOrder, Field };

std::string to_string(Variant v);

/// Parsed problem document.
///
///   {
///     "variant": "scalar" | "vector" | "higher_order" | "field",
///     "interval": [a, b],
///     "z_a": number | [re, im],                        default 0
///     "dimension": n,                                  vector only
///     "order": n,                                      higher_order only
///     "space": [[lo, hi], ...],                        field only (1 or 2 axes)
///     "lagrangian": "v1^2 + z",
///     "boundaries": [{"left": x, "right": y | "free"}], not for field
///     "grid": {"step": s, "margin_nodes": m},          margin optional
///     "scale": {"h": h, "ladder": [h0, h1, ...]},      ladder optional
///     "solve": {...SolveOptions fields...},            optional
///     "initial": "expr" | ["expr1", ...]               optional
///   }
///
/// Unknown keys anywhere are rejected with SchemaError.
struct ProblemFile {
  Variant variant = Variant::Scalar;
  double a = 0.0;
  double b = 1.0;
  Complex z_a = 0.0;
  std::size_t dimension = 1;  // coordinates, or the order for higher_order
  std::vector<std::pair<double, double>> space;
  std::string lagrangian;
  std::vector<Boundary> boundaries;
  double step = 0.0;
  std::optional<std::size_t> margin_nodes;
  double h = 0.0;
  std::vector<double> ladder;
  SolveOptions solve;
  std::vector<std::string> initial;

  ScaleParams scale() const;
  /// margin_nodes if given, else what residual evaluation needs for the
  /// variant (2 h_nodes, or 2 n h_nodes for higher order).
  std::size_t margin() const;

  HerglotzProblem herglotz_problem() const;
  HigherOrderProblem higher_order_problem() const;
  FieldProblem field_problem() const;

  /// Samples the `initial` expressions (in t, and s1.. for fields) on the
  /// problem grid with margin(). Throws SchemaError when absent.
  Trajectory initial_trajectory() const;
  FieldSamples initial_field() const;
};

/// Samples a real expression in t on every node of `grid`. Throws DomainError
/// where the value is complex or not finite.
SampledSignal sample_expression(const std::string& source, const UniformGrid& grid);

/// Throws SchemaError (with a JSON path in the message), SyntaxError or
/// UnknownIdentifier.
ProblemFile parse_problem(const io::Json& doc);
ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem(const std::string& path);

}  // namespace herglotz
