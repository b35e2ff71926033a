#pragma once

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace herglotz::expr {

using Complex = std::complex<double>;

enum class NodeKind { Constant, Variable, Negate, Binary, Call };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Exp, Log, Sqrt, Abs };

struct Node;

/// Immutable expression tree handle. Copies share structure.
class Expr {
 public:
  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr negate(Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(Function fn, Expr arg);

  NodeKind kind() const;
  double value() const;             // Constant
  const std::string& name() const;  // Variable
  BinaryOp op() const;              // Binary
  Function function() const;        // Call
  const Expr& operand() const;      // Negate / Call argument / Binary lhs
  const Expr& lhs() const { return operand(); }
  const Expr& rhs() const;          // Binary

  bool is_constant(double v) const;

  /// Structural equality (same shape, names, ops and constant bits).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
  friend struct Node;
};

/// True for names in the Lagrangian alphabet: t, x<i>, v<i>, v<i>_<k>, u, ut,
/// ux<i>, z, s<i> (indices start at 1).
bool is_alphabet_variable(std::string_view name);

/// v<i>_1 is the same quantity as v<i>; everything else is returned unchanged.
std::string canonical_variable(std::string_view name);

/// Parses with precedence ^ (right-assoc) > unary minus > * / > + -.
/// Identifiers must be alphabet variables, the constant `pi`, or one of the
/// functions sin cos exp log sqrt abs. U+2212 is accepted as a minus sign.
/// Throws SyntaxError (1-based character position) or UnknownIdentifier.
Expr parse(std::string_view source);

/// Minimal-parenthesis rendering; parse(print(e)) == e for parsed trees.
std::string print(const Expr& e);

using Bindings = std::map<std::string, Complex, std::less<>>;

/// Complex evaluation, principal branches for log and sqrt. Throws
/// UnboundVariable or DomainError (log 0, division by zero, 0 to a
/// non-positive power).
Complex evaluate(const Expr& e, const Bindings& bindings);

/// Symbolic partial derivative with constant folding. abs(f) differentiates
/// to f/abs(f) * f', which raises DomainError when evaluated at f = 0.
Expr differentiate(const Expr& e, std::string_view var);

bool depends_on(const Expr& e, std::string_view var);
std::set<std::string> free_variables(const Expr& e);

std::string to_string(Function fn);

/// Postfix form of an expression with variables resolved to slot indices, for
/// evaluation in inner loops.
class Program {
 public:
  /// Throws UnknownIdentifier if a free variable is not among `slots`.
  Program(const Expr& e, std::span<const std::string> slots);

  Complex operator()(std::span<const Complex> args) const;
  bool is_constant_zero() const { return constant_zero_; }

 private:
  enum class Op { PushConst, PushSlot, Neg, Add, Sub, Mul, Div, Pow, Call };
  struct Instr {
    Op op;
    std::size_t slot = 0;
    Complex value;
    Function fn = Function::Sin;
  };
  void emit(const Expr& e, std::span<const std::string> slots);

  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
  bool constant_zero_ = false;
};

}  // namespace herglotz::expr
