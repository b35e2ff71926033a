#include "herglotz/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "herglotz/errors.hpp"

namespace herglotz {

Lagrangian::Lagrangian(std::string_view source, std::vector<std::string> slots)
    : Lagrangian(expr::parse(source), std::move(slots)) {}

Lagrangian::Lagrangian(const expr::Expr& e, std::vector<std::string> slots)
    : slots_(std::move(slots)), expression_(e) {
  programs_.emplace_back(e, slots_);
  for (const auto& name : slots_) {
    partial_exprs_.push_back(expr::differentiate(e, name));
    programs_.emplace_back(partial_exprs_.back(), slots_);
  }
}

Lagrangian::Lagrangian(Native fn, std::vector<std::string> slots)
    : slots_(std::move(slots)), native_(std::move(fn)) {
  if (!native_) throw Error(ErrorKind::InvalidArgument, "empty native Lagrangian");
}

std::size_t Lagrangian::slot(std::string_view name) const {
  const std::string canon = expr::canonical_variable(name);
  const auto it = std::find(slots_.begin(), slots_.end(), canon);
  if (it == slots_.end()) {
    throw Error(ErrorKind::UnknownIdentifier, "Lagrangian has no argument '" + canon + "'");
  }
  return static_cast<std::size_t>(it - slots_.begin());
}

std::string Lagrangian::source() const {
  return expression_ ? expr::print(*expression_) : std::string("<native>");
}

Complex Lagrangian::value(std::span<const Complex> args) const {
  try {
    return native_ ? native_(args) : programs_[0](args);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DomainError) throw;
    throw Error(ErrorKind::EvaluationError, std::string("Lagrangian: ") + e.what());
  }
}

Complex Lagrangian::partial(std::size_t slot, std::span<const Complex> args) const {
  if (!native_) {
    try {
      return programs_[1 + slot](args);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DomainError) throw;
      throw Error(ErrorKind::EvaluationError,
                  "dL/d" + slots_[slot] + ": " + std::string(e.what()));
    }
  }
  std::vector<Complex> probe(args.begin(), args.end());
  const double step = 1e-6 * std::max(1.0, std::abs(args[slot]));
  probe[slot] = args[slot] + step;
  const Complex up = native_(probe);
  probe[slot] = args[slot] - step;
  const Complex down = native_(probe);
  return (up - down) / (2.0 * step);
}

bool Lagrangian::partial_is_zero(std::size_t slot) const {
  return !native_ && programs_[1 + slot].is_constant_zero();
}

const expr::Expr& Lagrangian::partial_expression(std::size_t slot) const {
  if (native_) throw Error(ErrorKind::InvalidArgument, "native Lagrangians have no symbolic partials");
  return partial_exprs_[slot];
}

std::vector<std::string> first_order_slots(std::size_t dimension) {
  std::vector<std::string> s{"t"};
  for (std::size_t i = 1; i <= dimension; ++i) s.push_back("x" + std::to_string(i));
  for (std::size_t i = 1; i <= dimension; ++i) s.push_back("v" + std::to_string(i));
  s.push_back("z");
  return s;
}

std::vector<std::string> higher_order_slots(std::size_t order) {
  std::vector<std::string> s{"t", "x1", "v1"};
  for (std::size_t k = 2; k <= order; ++k) s.push_back("v1_" + std::to_string(k));
  s.push_back("z");
  return s;
}

std::vector<std::string> field_slots(std::size_t space_dims) {
  std::vector<std::string> s{"t"};
  for (std::size_t i = 1; i <= space_dims; ++i) s.push_back("s" + std::to_string(i));
  s.push_back("u");
  s.push_back("ut");
  for (std::size_t i = 1; i <= space_dims; ++i) s.push_back("ux" + std::to_string(i));
  s.push_back("z");
  return s;
}

}  // namespace herglotz
