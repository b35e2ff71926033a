#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "herglotz/errors.hpp"
#include "herglotz/expr.hpp"
#include "herglotz/lagrangian.hpp"

using namespace herglotz;
using namespace herglotz::expr;

namespace {

constexpr Complex I(0.0, 1.0);

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an herglotz::Error");
  return ErrorKind::InvalidArgument;
}

const std::vector<std::string> kVars{"t", "x1", "v1", "z", "v1_2"};

// Random trees over a small alphabet. Constants are non-negative because the
// printer writes a negative constant as a unary minus, which parses back to a
// Negate node.
class TreeGen {
 public:
  explicit TreeGen(std::uint64_t seed, bool with_abs) : rng_(seed), with_abs_(with_abs) {}

  Expr operator()(int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    switch (pick(rng_)) {
      case 0: {
        std::uniform_int_distribution<int> c(0, 3);
        const double vals[] = {0.5, 2.0, 3.0, 0.25};
        return Expr::constant(vals[c(rng_)]);
      }
      case 1: {
        std::uniform_int_distribution<std::size_t> v(0, kVars.size() - 1);
        return Expr::variable(kVars[v(rng_)]);
      }
      case 2:
        return Expr::negate((*this)(depth - 1));
      case 3: {
        std::uniform_int_distribution<int> f(0, with_abs_ ? 5 : 4);
        const Function fns[] = {Function::Sin, Function::Cos, Function::Exp, Function::Log,
                                Function::Sqrt, Function::Abs};
        return Expr::call(fns[f(rng_)], (*this)(depth - 1));
      }
      case 4: {
        std::uniform_int_distribution<int> e(2, 3);
        return Expr::binary(BinaryOp::Pow, (*this)(depth - 1),
                            Expr::constant(static_cast<double>(e(rng_))));
      }
      default: {
        std::uniform_int_distribution<int> o(0, 3);
        const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div};
        return Expr::binary(ops[o(rng_)], (*this)(depth - 1), (*this)(depth - 1));
      }
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  bool with_abs_;
};

// Central difference in one variable, or nullopt if evaluation fails.
std::optional<Complex> central(const Expr& e, Bindings b, const std::string& var, double step) {
  try {
    const Complex x = b[var];
    b[var] = x + step;
    const Complex up = evaluate(e, b);
    b[var] = x - step;
    const Complex dn = evaluate(e, b);
    return (up - dn) / (2 * step);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

TEST_CASE("parse: examples") {
  const auto e = parse("v1^2 + z");
  REQUIRE(e.kind() == NodeKind::Binary);
  CHECK(e.op() == BinaryOp::Add);
  CHECK(e.lhs() == Expr::binary(BinaryOp::Pow, Expr::variable("v1"), Expr::constant(2)));
  CHECK(e.rhs() == Expr::variable("z"));

  CHECK(parse("sin(t)*x1") ==
        Expr::binary(BinaryOp::Mul, Expr::call(Function::Sin, Expr::variable("t")),
                     Expr::variable("x1")));

  try {
    (void)parse("v1^2 −");
    FAIL("no error");
  } catch (const SyntaxError& err) {
    CHECK(err.position() == 7);
    CHECK(std::string(err.what()).find("position 7") != std::string::npos);
  }
}

TEST_CASE("parse: precedence and associativity") {
  // ^ is right-associative and binds tighter than unary minus.
  CHECK(parse("2^3^2") == parse("2^(3^2)"));
  CHECK(parse("-x1^2") == Expr::negate(parse("x1^2")));
  CHECK(parse("x1^-2") == Expr::binary(BinaryOp::Pow, Expr::variable("x1"),
                                       Expr::negate(Expr::constant(2))));
  CHECK(parse("t-x1-z") == parse("(t-x1)-z"));
  CHECK(parse("t/x1/z") == parse("(t/x1)/z"));
  CHECK(parse("t+x1*z") == parse("t+(x1*z)"));
  CHECK(parse("  t\t+ 1e-3 ") == parse("t+0.001"));
  CHECK(evaluate(parse("pi"), {}) == Complex(std::numbers::pi));
}

TEST_CASE("parse: errors") {
  CHECK(kind_of([] { (void)parse(""); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { (void)parse("(t"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { (void)parse("t)"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { (void)parse("sin t"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { (void)parse("t $ 2"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { (void)parse("y + 1"); }) == ErrorKind::UnknownIdentifier);
  CHECK(kind_of([] { (void)parse("tan(t)"); }) == ErrorKind::UnknownIdentifier);
  CHECK(kind_of([] { (void)parse("x0"); }) == ErrorKind::UnknownIdentifier);
  try {
    (void)parse("t + * x1");
    FAIL("no error");
  } catch (const SyntaxError& err) {
    CHECK(err.position() == 5);
  }
}

TEST_CASE("alphabet") {
  for (const char* ok : {"t", "z", "u", "ut", "x1", "x12", "v3", "v1_2", "v2_10", "ux1", "s2"}) {
    CHECK_MESSAGE(is_alphabet_variable(ok), ok);
  }
  for (const char* bad : {"x", "x0", "v1_0", "v1_", "y", "uxx", "s0", "x01", "T"}) {
    CHECK_MESSAGE(!is_alphabet_variable(bad), bad);
  }
  CHECK(canonical_variable("v2_1") == "v2");
  CHECK(canonical_variable("v2_3") == "v2_3");
}

TEST_CASE("print/parse round trip on generated trees") {
  TreeGen gen(2024, true);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const Expr e = gen(1 + k % 6);
    const std::string s = print(e);
    const Expr back = parse(s);
    CHECK_MESSAGE(print(back) == s, s);
    CHECK_MESSAGE(parse(print(back)) == back, s);
    // Printing is faithful for non-negative constants: the tree itself survives.
    CHECK_MESSAGE(back == e, s);
    ++checked;
  }
  CHECK(checked >= 50);

  // Constants keep every bit.
  for (double c : {0.1, 1.0 / 3.0, 6.02214076e23, 1e-300}) {
    CHECK(parse(print(Expr::constant(c))) == Expr::constant(c));
  }
}

TEST_CASE("evaluate: examples") {
  CHECK(evaluate(parse("v1^2+z"), {{"v1", 2.0}, {"z", 1.0}}) == Complex(5.0));
  const Complex euler = evaluate(parse("exp(t)"), {{"t", I * std::numbers::pi}});
  CHECK(std::abs(euler - Complex(-1.0)) <= 1e-12);
  CHECK(evaluate(parse("x1*v1"), {{"x1", 1.0 + I}, {"v1", 1.0 - I}}) == Complex(2.0));

  // principal branches
  const Complex l = evaluate(parse("log(t)"), {{"t", -1.0}});
  CHECK(l.imag() == doctest::Approx(std::numbers::pi));
  CHECK(std::abs(evaluate(parse("sqrt(t)"), {{"t", -4.0}}) - 2.0 * I) < 1e-15);
  CHECK(evaluate(parse("abs(t)"), {{"t", 3.0 - 4.0 * I}}) == Complex(5.0));
}

TEST_CASE("evaluate: errors") {
  CHECK(kind_of([] { (void)evaluate(parse("t+z"), {{"t", 1.0}}); }) == ErrorKind::UnboundVariable);
  CHECK(kind_of([] { (void)evaluate(parse("log(t)"), {{"t", 0.0}}); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { (void)evaluate(parse("1/t"), {{"t", 0.0}}); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { (void)evaluate(parse("t^-1"), {{"t", 0.0}}); }) == ErrorKind::DomainError);
}

TEST_CASE("differentiate: examples") {
  CHECK(differentiate(parse("v1^2+z"), "v1") ==
        Expr::binary(BinaryOp::Mul, Expr::constant(2), Expr::variable("v1")));
  CHECK(differentiate(parse("v1^2+z"), "z") == Expr::constant(1));
  CHECK(differentiate(parse("v1^2+z"), "x1") == Expr::constant(0));

  // Cross-check sin(t)*3*x1^2 by value at a few points.
  const Expr d = differentiate(parse("sin(t)*x1^3"), "x1");
  const Expr hand = parse("sin(t)*3*x1^2");
  for (double t : {0.3, 1.1, -2.0}) {
    for (double x : {0.5, -1.5}) {
      const Bindings b{{"t", t}, {"x1", x}};
      CHECK(std::abs(evaluate(d, b) - evaluate(hand, b)) < 1e-14);
    }
  }

  // abs: sign away from 0, flagged at 0.
  const Expr da = differentiate(parse("abs(x1)"), "x1");
  CHECK(evaluate(da, {{"x1", 2.5}}) == Complex(1.0));
  CHECK(evaluate(da, {{"x1", -0.5}}) == Complex(-1.0));
  CHECK(kind_of([&] { (void)evaluate(da, {{"x1", 0.0}}); }) == ErrorKind::DomainError);
}

TEST_CASE("differentiate agrees with central differences on random trees") {
  TreeGen gen(99, false);
  std::uniform_real_distribution<double> re(0.2, 1.5), im(0.1, 0.5);
  int compared = 0;
  int trees_with_points = 0;
  for (int k = 0; k < 300; ++k) {
    const Expr e = gen(1 + k % 6);
    bool any = false;
    for (const auto& var : free_variables(e)) {
      const Expr d = differentiate(e, var);
      for (int p = 0; p < 20; ++p) {
        Bindings b;
        for (const auto& v : kVars) b[v] = Complex(re(gen.rng()), im(gen.rng()));
        Complex f, sym;
        try {
          f = evaluate(e, b);
          sym = evaluate(d, b);
        } catch (const Error&) {
          continue;
        }
        if (!std::isfinite(std::abs(f)) || std::abs(f) > 1e3) continue;
        const auto fd = central(e, b, var, 1e-5);
        const auto fd2 = central(e, b, var, 2e-5);
        if (!fd || !fd2) continue;
        // Skip points where the difference quotient itself is unstable
        // (branch cuts, poles nearby).
        if (std::abs(*fd - *fd2) > 1e-7 * std::max(1.0, std::abs(*fd))) continue;
        CHECK_MESSAGE(std::abs(sym - *fd) <= 1e-6 * std::max(1.0, std::abs(sym)),
                      print(e), " d/d", var);
        ++compared;
        any = true;
      }
    }
    trees_with_points += any ? 1 : 0;
  }
  CHECK(trees_with_points >= 150);
  CHECK(compared >= 2000);
}

TEST_CASE("differentiate is linear") {
  TreeGen gen(5, false);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.3, 1.2);
  for (int k = 0; k < 60; ++k) {
    const Expr f = gen(3), g = gen(3);
    const double a = u(gen.rng()), c = u(gen.rng());
    const Expr comb = Expr::binary(
        BinaryOp::Add, Expr::binary(BinaryOp::Mul, Expr::constant(std::abs(a)), f),
        Expr::binary(BinaryOp::Mul, Expr::constant(std::abs(c)), g));
    Bindings b;
    for (const auto& v : kVars) b[v] = Complex(pos(gen.rng()), 0.2);
    try {
      const Complex lhs = evaluate(differentiate(comb, "x1"), b);
      const Complex rhs = std::abs(a) * evaluate(differentiate(f, "x1"), b) +
                          std::abs(c) * evaluate(differentiate(g, "x1"), b);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    } catch (const Error&) {
    }
  }
}

TEST_CASE("free variables and dependence") {
  const Expr e = parse("sin(t)*x1 + v1_2^2");
  CHECK(free_variables(e) == std::set<std::string>{"t", "x1", "v1_2"});
  CHECK(depends_on(e, "x1"));
  CHECK(!depends_on(e, "z"));
  // v1 and v1_1 are the same quantity.
  CHECK(parse("v1_1") == parse("v1"));
}

TEST_CASE("compiled programs match the tree evaluator") {
  TreeGen gen(17, true);
  const std::vector<std::string> slots(kVars.begin(), kVars.end());
  std::uniform_real_distribution<double> u(0.2, 1.5);
  for (int k = 0; k < 100; ++k) {
    const Expr e = gen(1 + k % 5);
    const Program prog(e, slots);
    std::vector<Complex> args(slots.size());
    Bindings b;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      args[s] = Complex(u(gen.rng()), u(gen.rng()));
      b[slots[s]] = args[s];
    }
    try {
      const Complex ref = evaluate(e, b);
      CHECK(prog(args) == ref);
    } catch (const Error&) {
      CHECK_THROWS_AS(prog(args), Error);
    }
  }
  CHECK(Program(differentiate(parse("t+v1"), "z"), slots).is_constant_zero());
  CHECK(kind_of([&] { Program(parse("ut"), slots); }) == ErrorKind::UnknownIdentifier);
}

TEST_CASE("Lagrangian partials") {
  const Lagrangian l("v1^2 + x1*z", first_order_slots(1));
  const std::vector<Complex> args{0.5, 2.0, 3.0 + I, -1.0};  // t, x1, v1, z
  CHECK(l.value(args) == (3.0 + I) * (3.0 + I) - 2.0);
  CHECK(l.partial(l.slot("v1"), args) == 2.0 * (3.0 + I));
  CHECK(l.partial(l.slot("x1"), args) == Complex(-1.0));
  CHECK(l.partial(l.slot("z"), args) == Complex(2.0));
  CHECK(l.partial_is_zero(l.slot("t")));
  CHECK(!l.partial_is_zero(l.slot("z")));

  const Lagrangian native(
      [](std::span<const Complex> a) { return a[2] * a[2] + a[1] * a[3]; }, first_order_slots(1));
  CHECK(!native.symbolic());
  for (std::size_t s = 0; s < 4; ++s) {
    CHECK(std::abs(native.partial(s, args) - l.partial(s, args)) < 1e-8);
  }

  CHECK(kind_of([] { Lagrangian("ut + z", first_order_slots(1)); }) ==
        ErrorKind::UnknownIdentifier);
  const Lagrangian lg("log(x1)", first_order_slots(1));
  CHECK(kind_of([&] { (void)lg.value(std::vector<Complex>{0.0, 0.0, 0.0, 0.0}); }) ==
        ErrorKind::EvaluationError);
  CHECK(higher_order_slots(3) == std::vector<std::string>{"t", "x1", "v1", "v1_2", "v1_3", "z"});
  CHECK(field_slots(2) ==
        std::vector<std::string>{"t", "s1", "s2", "u", "ut", "ux1", "ux2", "z"});
}
