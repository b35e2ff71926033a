#include "herglotz/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "herglotz/errors.hpp"

namespace herglotz::expr {

struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;
  std::string name;
  BinaryOp op = BinaryOp::Add;
  Function fn = Function::Sin;
  Expr a{nullptr};
  Expr b{nullptr};

  static Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }
};

Expr Expr::constant(double value) {
  Node n;
  n.kind = NodeKind::Constant;
  n.value = value;
  return Node::make(std::move(n));
}

Expr Expr::variable(std::string name) {
  Node n;
  n.kind = NodeKind::Variable;
  n.name = std::move(name);
  return Node::make(std::move(n));
}

Expr Expr::negate(Expr operand) {
  Node n;
  n.kind = NodeKind::Negate;
  n.a = std::move(operand);
  return Node::make(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  Node n;
  n.kind = NodeKind::Binary;
  n.op = op;
  n.a = std::move(lhs);
  n.b = std::move(rhs);
  return Node::make(std::move(n));
}

Expr Expr::call(Function fn, Expr arg) {
  Node n;
  n.kind = NodeKind::Call;
  n.fn = fn;
  n.a = std::move(arg);
  return Node::make(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
BinaryOp Expr::op() const { return node_->op; }
Function Expr::function() const { return node_->fn; }
const Expr& Expr::operand() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

bool Expr::is_constant(double v) const {
  return node_->kind == NodeKind::Constant && node_->value == v;
}

bool operator==(const Expr& x, const Expr& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_) return false;
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case NodeKind::Constant:
      // Bitwise identity; print() emits 17 significant digits.
      return x.value() == y.value() && std::signbit(x.value()) == std::signbit(y.value());
    case NodeKind::Variable: return x.name() == y.name();
    case NodeKind::Negate: return x.operand() == y.operand();
    case NodeKind::Binary:
      return x.op() == y.op() && x.lhs() == y.lhs() && x.rhs() == y.rhs();
    case NodeKind::Call: return x.function() == y.function() && x.operand() == y.operand();
  }
  return false;
}

std::string to_string(Function fn) {
  switch (fn) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sqrt: return "sqrt";
    case Function::Abs: return "abs";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Alphabet

namespace {

bool is_index(std::string_view s) {
  if (s.empty() || s[0] < '1' || s[0] > '9') return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool lookup_function(std::string_view name, Function& fn) {
  static const std::pair<std::string_view, Function> table[] = {
      {"sin", Function::Sin}, {"cos", Function::Cos},   {"exp", Function::Exp},
      {"log", Function::Log}, {"sqrt", Function::Sqrt}, {"abs", Function::Abs},
  };
  for (const auto& [n, f] : table) {
    if (n == name) {
      fn = f;
      return true;
    }
  }
  return false;
}

}  // namespace

bool is_alphabet_variable(std::string_view name) {
  if (name == "t" || name == "u" || name == "ut" || name == "z") return true;
  if (name.size() >= 3 && name.substr(0, 2) == "ux") return is_index(name.substr(2));
  if (name.size() >= 2 && (name[0] == 'x' || name[0] == 's')) return is_index(name.substr(1));
  if (name.size() >= 2 && name[0] == 'v') {
    const auto rest = name.substr(1);
    const auto us = rest.find('_');
    if (us == std::string_view::npos) return is_index(rest);
    return is_index(rest.substr(0, us)) && is_index(rest.substr(us + 1));
  }
  return false;
}

std::string canonical_variable(std::string_view name) {
  if (name.size() >= 4 && name[0] == 'v' && name.substr(name.size() - 2) == "_1" &&
      is_alphabet_variable(name)) {
    return std::string(name.substr(0, name.size() - 2));
  }
  return std::string(name);
}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  std::size_t position = 0;  // 1-based character position
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance(1);
    Token tok;
    tok.position = chars_ + 1;
    if (pos_ >= src_.size()) {
      tok.kind = Tok::End;
      return tok;
    }
    const char c = src_[pos_];
    if (src_.substr(pos_, 3) == "\xE2\x88\x92") {  // U+2212 MINUS SIGN
      pos_ += 3;
      ++chars_;
      tok.kind = Tok::Minus;
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(tok);
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        advance(1);
      }
      tok.kind = Tok::Ident;
      tok.text = std::string(src_.substr(start, pos_ - start));
      return tok;
    }
    advance(1);
    switch (c) {
      case '+': tok.kind = Tok::Plus; return tok;
      case '-': tok.kind = Tok::Minus; return tok;
      case '*': tok.kind = Tok::Star; return tok;
      case '/': tok.kind = Tok::Slash; return tok;
      case '^': tok.kind = Tok::Caret; return tok;
      case '(': tok.kind = Tok::LParen; return tok;
      case ')': tok.kind = Tok::RParen; return tok;
      default: break;
    }
    throw SyntaxError(tok.position, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance(std::size_t n) {
    pos_ += n;
    chars_ += n;
  }

  Token lex_number(Token& tok) {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        advance(1);
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance(1);
      n += digits();
    }
    if (n == 0) throw SyntaxError(tok.position, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_, save_chars = chars_;
      advance(1);
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance(1);
      if (digits() == 0) {
        pos_ = save;
        chars_ = save_chars;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    tok.kind = Tok::Number;
    tok.number = std::strtod(text.c_str(), nullptr);
    tok.text = text;
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t chars_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

  Expr parse_all() {
    if (tok_.kind == Tok::End) throw SyntaxError(tok_.position, "empty expression");
    Expr e = parse_sum();
    if (tok_.kind != Tok::End) throw SyntaxError(tok_.position, "unexpected token after expression");
    return e;
  }

 private:
  void bump() { tok_ = lex_.next(); }

  Expr parse_sum() {
    Expr lhs = parse_product();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const BinaryOp op = tok_.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      bump();
      lhs = Expr::binary(op, lhs, parse_product());
    }
    return lhs;
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const BinaryOp op = tok_.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      bump();
      lhs = Expr::binary(op, lhs, parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (tok_.kind == Tok::Minus) {
      bump();
      return Expr::negate(parse_unary());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (tok_.kind == Tok::Caret) {
      bump();
      return Expr::binary(BinaryOp::Pow, base, parse_unary());
    }
    return base;
  }

  Expr parse_primary() {
    const Token tok = tok_;
    switch (tok.kind) {
      case Tok::Number:
        bump();
        return Expr::constant(tok.number);
      case Tok::LParen: {
        bump();
        Expr inner = parse_sum();
        if (tok_.kind != Tok::RParen) throw SyntaxError(tok_.position, "expected ')'");
        bump();
        return inner;
      }
      case Tok::Ident: {
        bump();
        Function fn;
        if (lookup_function(tok.text, fn)) {
          if (tok_.kind != Tok::LParen) {
            throw SyntaxError(tok_.position, "expected '(' after " + tok.text);
          }
          bump();
          Expr arg = parse_sum();
          if (tok_.kind != Tok::RParen) throw SyntaxError(tok_.position, "expected ')'");
          bump();
          return Expr::call(fn, arg);
        }
        if (tok.text == "pi") return Expr::constant(std::numbers::pi);
        if (!is_alphabet_variable(tok.text)) {
          throw Error(ErrorKind::UnknownIdentifier,
                      "'" + tok.text + "' at position " + std::to_string(tok.position) +
                          " is not in the variable alphabet");
        }
        return Expr::variable(canonical_variable(tok.text));
      }
      case Tok::End: throw SyntaxError(tok.position, "unexpected end of input");
      default: throw SyntaxError(tok.position, "expected an operand");
    }
  }

  Lexer lex_;
  Token tok_;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

constexpr int kPrecSum = 1, kPrecProduct = 2, kPrecUnary = 3, kPrecPower = 4, kPrecAtom = 5;

int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant: return e.value() < 0 || std::signbit(e.value()) ? kPrecUnary : kPrecAtom;
    case NodeKind::Variable:
    case NodeKind::Call: return kPrecAtom;
    case NodeKind::Negate: return kPrecUnary;
    case NodeKind::Binary:
      switch (e.op()) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return kPrecSum;
        case BinaryOp::Mul:
        case BinaryOp::Div: return kPrecProduct;
        case BinaryOp::Pow: return kPrecPower;
      }
  }
  return kPrecAtom;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_into(const Expr& e, int min_prec, std::string& out) {
  const bool parens = precedence(e) < min_prec;
  if (parens) out += '(';
  switch (e.kind()) {
    case NodeKind::Constant: out += format_number(e.value()); break;
    case NodeKind::Variable: out += e.name(); break;
    case NodeKind::Negate:
      out += '-';
      print_into(e.operand(), kPrecUnary, out);
      break;
    case NodeKind::Call:
      out += to_string(e.function());
      out += '(';
      print_into(e.operand(), 0, out);
      out += ')';
      break;
    case NodeKind::Binary:
      switch (e.op()) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          print_into(e.lhs(), kPrecSum, out);
          out += e.op() == BinaryOp::Add ? '+' : '-';
          print_into(e.rhs(), kPrecSum + 1, out);
          break;
        case BinaryOp::Mul:
        case BinaryOp::Div:
          print_into(e.lhs(), kPrecProduct, out);
          out += e.op() == BinaryOp::Mul ? '*' : '/';
          print_into(e.rhs(), kPrecProduct + 1, out);
          break;
        case BinaryOp::Pow:
          print_into(e.lhs(), kPrecAtom, out);
          out += '^';
          print_into(e.rhs(), kPrecUnary, out);
          break;
      }
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_into(e, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Complex integer_power(Complex base, long n) {
  if (n < 0) {
    if (base == Complex(0.0)) throw Error(ErrorKind::DomainError, "zero raised to a negative power");
    return 1.0 / integer_power(base, -n);
  }
  Complex result = 1.0;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Complex apply_binary(BinaryOp op, Complex x, Complex y) {
  switch (op) {
    case BinaryOp::Add: return x + y;
    case BinaryOp::Sub: return x - y;
    case BinaryOp::Mul:
      if (x.imag() == 0.0 && y.imag() == 0.0) return x.real() * y.real();
      return x * y;
    case BinaryOp::Div:
      if (y == Complex(0.0)) throw Error(ErrorKind::DomainError, "division by zero");
      if (x.imag() == 0.0 && y.imag() == 0.0) return x.real() / y.real();
      return x / y;
    case BinaryOp::Pow: {
      if (y.imag() == 0.0 && y.real() == std::trunc(y.real()) && std::abs(y.real()) <= 1024.0) {
        return integer_power(x, static_cast<long>(y.real()));
      }
      if (x == Complex(0.0)) {
        if (y.imag() == 0.0 && y.real() > 0.0) return 0.0;
        throw Error(ErrorKind::DomainError, "zero raised to a non-positive power");
      }
      if (x.imag() == 0.0 && x.real() > 0.0 && y.imag() == 0.0) {
        return std::pow(x.real(), y.real());
      }
      return std::pow(x, y);
    }
  }
  return 0.0;
}

Complex apply_call(Function fn, Complex x) {
  const bool real = x.imag() == 0.0;
  switch (fn) {
    case Function::Sin: return real ? Complex(std::sin(x.real())) : std::sin(x);
    case Function::Cos: return real ? Complex(std::cos(x.real())) : std::cos(x);
    case Function::Exp: return real ? Complex(std::exp(x.real())) : std::exp(x);
    case Function::Log:
      if (x == Complex(0.0)) throw Error(ErrorKind::DomainError, "log of zero");
      if (real && x.real() > 0.0) return std::log(x.real());
      return std::log(x);
    case Function::Sqrt:
      if (real && x.real() >= 0.0) return std::sqrt(x.real());
      return std::sqrt(x);
    case Function::Abs: return std::abs(x);
  }
  return 0.0;
}

}  // namespace

Complex evaluate(const Expr& e, const Bindings& bindings) {
  switch (e.kind()) {
    case NodeKind::Constant: return e.value();
    case NodeKind::Variable: {
      const auto it = bindings.find(e.name());
      if (it == bindings.end()) {
        throw Error(ErrorKind::UnboundVariable, "no value bound to '" + e.name() + "'");
      }
      return it->second;
    }
    case NodeKind::Negate: return -evaluate(e.operand(), bindings);
    case NodeKind::Binary:
      return apply_binary(e.op(), evaluate(e.lhs(), bindings), evaluate(e.rhs(), bindings));
    case NodeKind::Call: return apply_call(e.function(), evaluate(e.operand(), bindings));
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Differentiation with constant folding

namespace {

bool is_const(const Expr& e) { return e.kind() == NodeKind::Constant; }

Expr fold_neg(const Expr& a) {
  if (is_const(a)) return Expr::constant(-a.value());
  if (a.kind() == NodeKind::Negate) return a.operand();
  return Expr::negate(a);
}

Expr fold_add(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) return Expr::constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::binary(BinaryOp::Add, a, b);
}

Expr fold_sub(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) return Expr::constant(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return fold_neg(b);
  return Expr::binary(BinaryOp::Sub, a, b);
}

Expr fold_mul(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) return Expr::constant(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return fold_neg(b);
  if (b.is_constant(-1.0)) return fold_neg(a);
  return Expr::binary(BinaryOp::Mul, a, b);
}

Expr fold_div(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b) && b.value() != 0.0) return Expr::constant(a.value() / b.value());
  if (a.is_constant(0.0)) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr::binary(BinaryOp::Div, a, b);
}

Expr fold_pow(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  if (b.is_constant(0.0)) return Expr::constant(1.0);
  if (is_const(a) && is_const(b)) {
    const Complex v = apply_binary(BinaryOp::Pow, a.value(), b.value());
    if (v.imag() == 0.0 && std::isfinite(v.real())) return Expr::constant(v.real());
  }
  return Expr::binary(BinaryOp::Pow, a, b);
}

Expr fn(Function f, const Expr& a) { return Expr::call(f, a); }

Expr derive(const Expr& e, std::string_view var) {
  switch (e.kind()) {
    case NodeKind::Constant: return Expr::constant(0.0);
    case NodeKind::Variable: return Expr::constant(e.name() == var ? 1.0 : 0.0);
    case NodeKind::Negate: return fold_neg(derive(e.operand(), var));
    case NodeKind::Binary: {
      const Expr& a = e.lhs();
      const Expr& b = e.rhs();
      switch (e.op()) {
        case BinaryOp::Add: return fold_add(derive(a, var), derive(b, var));
        case BinaryOp::Sub: return fold_sub(derive(a, var), derive(b, var));
        case BinaryOp::Mul:
          return fold_add(fold_mul(derive(a, var), b), fold_mul(a, derive(b, var)));
        case BinaryOp::Div: {
          const Expr num = fold_sub(fold_mul(derive(a, var), b), fold_mul(a, derive(b, var)));
          return fold_div(num, fold_pow(b, Expr::constant(2.0)));
        }
        case BinaryOp::Pow: {
          const Expr da = derive(a, var);
          if (!depends_on(b, var)) {
            const Expr lowered = is_const(b) ? Expr::constant(b.value() - 1.0)
                                             : fold_sub(b, Expr::constant(1.0));
            return fold_mul(fold_mul(b, fold_pow(a, lowered)), da);
          }
          const Expr db = derive(b, var);
          if (!depends_on(a, var)) {
            return fold_mul(fold_mul(e, fn(Function::Log, a)), db);
          }
          const Expr inner = fold_add(fold_mul(db, fn(Function::Log, a)),
                                      fold_div(fold_mul(b, da), a));
          return fold_mul(e, inner);
        }
      }
      break;
    }
    case NodeKind::Call: {
      const Expr& a = e.operand();
      const Expr da = derive(a, var);
      if (da.is_constant(0.0)) return da;
      switch (e.function()) {
        case Function::Sin: return fold_mul(fn(Function::Cos, a), da);
        case Function::Cos: return fold_neg(fold_mul(fn(Function::Sin, a), da));
        case Function::Exp: return fold_mul(e, da);
        case Function::Log: return fold_div(da, a);
        case Function::Sqrt: return fold_div(da, fold_mul(Expr::constant(2.0), e));
        case Function::Abs: return fold_mul(fold_div(a, e), da);
      }
      break;
    }
  }
  return Expr::constant(0.0);
}

void collect(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case NodeKind::Constant: return;
    case NodeKind::Variable: out.insert(e.name()); return;
    case NodeKind::Negate:
    case NodeKind::Call: collect(e.operand(), out); return;
    case NodeKind::Binary:
      collect(e.lhs(), out);
      collect(e.rhs(), out);
      return;
  }
}

}  // namespace

Expr differentiate(const Expr& e, std::string_view var) {
  return derive(e, canonical_variable(var));
}

bool depends_on(const Expr& e, std::string_view var) {
  switch (e.kind()) {
    case NodeKind::Constant: return false;
    case NodeKind::Variable: return e.name() == var;
    case NodeKind::Negate:
    case NodeKind::Call: return depends_on(e.operand(), var);
    case NodeKind::Binary: return depends_on(e.lhs(), var) || depends_on(e.rhs(), var);
  }
  return false;
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Program

Program::Program(const Expr& e, std::span<const std::string> slots) {
  emit(e, slots);
  std::size_t depth = 0;
  for (const auto& ins : code_) {
    switch (ins.op) {
      case Op::PushConst:
      case Op::PushSlot: ++depth; break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
      case Op::Pow: --depth; break;
      default: break;
    }
    max_depth_ = std::max(max_depth_, depth);
  }
  constant_zero_ = e.is_constant(0.0);
}

void Program::emit(const Expr& e, std::span<const std::string> slots) {
  switch (e.kind()) {
    case NodeKind::Constant: code_.push_back({Op::PushConst, 0, e.value()}); return;
    case NodeKind::Variable: {
      for (std::size_t k = 0; k < slots.size(); ++k) {
        if (slots[k] == e.name()) {
          code_.push_back({Op::PushSlot, k, 0.0});
          return;
        }
      }
      throw Error(ErrorKind::UnknownIdentifier,
                  "variable '" + e.name() + "' is not an argument of this Lagrangian");
    }
    case NodeKind::Negate:
      emit(e.operand(), slots);
      code_.push_back(Instr{Op::Neg, 0, 0.0, Function::Sin});
      return;
    case NodeKind::Call:
      emit(e.operand(), slots);
      code_.push_back({Op::Call, 0, 0.0, e.function()});
      return;
    case NodeKind::Binary: {
      emit(e.lhs(), slots);
      emit(e.rhs(), slots);
      Op op = Op::Add;
      switch (e.op()) {
        case BinaryOp::Add: op = Op::Add; break;
        case BinaryOp::Sub: op = Op::Sub; break;
        case BinaryOp::Mul: op = Op::Mul; break;
        case BinaryOp::Div: op = Op::Div; break;
        case BinaryOp::Pow: op = Op::Pow; break;
      }
      code_.push_back(Instr{op, 0, 0.0, Function::Sin});
      return;
    }
  }
}

Complex Program::operator()(std::span<const Complex> args) const {
  // Expressions are shallow in practice; fall back to the heap otherwise.
  Complex small[32];
  std::vector<Complex> big;
  Complex* stack = small;
  if (max_depth_ > 32) {
    big.resize(max_depth_);
    stack = big.data();
  }
  std::size_t sp = 0;
  for (const auto& ins : code_) {
    switch (ins.op) {
      case Op::PushConst: stack[sp++] = ins.value; break;
      case Op::PushSlot: stack[sp++] = args[ins.slot]; break;
      case Op::Neg: stack[sp - 1] = -stack[sp - 1]; break;
      case Op::Call: stack[sp - 1] = apply_call(ins.fn, stack[sp - 1]); break;
      default: {
        const Complex y = stack[--sp];
        BinaryOp op = BinaryOp::Add;
        switch (ins.op) {
          case Op::Add: op = BinaryOp::Add; break;
          case Op::Sub: op = BinaryOp::Sub; break;
          case Op::Mul: op = BinaryOp::Mul; break;
          case Op::Div: op = BinaryOp::Div; break;
          default: op = BinaryOp::Pow; break;
        }
        stack[sp - 1] = apply_binary(op, stack[sp - 1], y);
      }
    }
  }
  return stack[0];
}

}  // namespace herglotz::expr
