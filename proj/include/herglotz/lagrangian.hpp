#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herglotz/expr.hpp"
#include "herglotz/grid.hpp"

namespace herglotz {

/// A Lagrangian together with its partial derivatives, evaluated on a fixed
/// argument layout ("slots"). Expression-backed Lagrangians differentiate
/// symbolically; native callbacks fall back to central differences.
class Lagrangian {
 public:
  using Native = std::function<Complex(std::span<const Complex>)>;

  Lagrangian(std::string_view source, std::vector<std::string> slots);
  Lagrangian(const expr::Expr& e, std::vector<std::string> slots);
  Lagrangian(Native fn, std::vector<std::string> slots);

  const std::vector<std::string>& slots() const noexcept { return slots_; }
  std::size_t slot_count() const noexcept { return slots_.size(); }
  /// Index of a named slot; throws UnknownIdentifier.
  std::size_t slot(std::string_view name) const;

  bool symbolic() const noexcept { return expression_.has_value(); }
  const std::optional<expr::Expr>& expression() const noexcept { return expression_; }
  std::string source() const;

  /// Throws EvaluationError on domain errors inside the expression.
  Complex value(std::span<const Complex> args) const;
  Complex partial(std::size_t slot, std::span<const Complex> args) const;

  /// True only when the symbolic partial folds to the constant 0.
  bool partial_is_zero(std::size_t slot) const;
  const expr::Expr& partial_expression(std::size_t slot) const;

 private:
  std::vector<std::string> slots_;
  std::optional<expr::Expr> expression_;
  std::vector<expr::Expr> partial_exprs_;
  std::vector<expr::Program> programs_;  // [0] = L, [1 + k] = dL/dslot_k
  Native native_;
};

/// t, x1..xn, v1..vn, z
std::vector<std::string> first_order_slots(std::size_t dimension);
/// t, x1, v1, v1_2, ..., v1_order, z
std::vector<std::string> higher_order_slots(std::size_t order);
/// t, s1..sn, u, ut, ux1..uxn, z
std::vector<std::string> field_slots(std::size_t space_dims);

}  // namespace herglotz
