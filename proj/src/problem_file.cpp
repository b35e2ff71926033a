#include "herglotz/problem_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "herglotz/errors.hpp"
#include "herglotz/expr.hpp"

namespace herglotz {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Scalar: return "scalar";
    case Variant::Vector: return "vector";
    case Variant::HigherOrder: return "higher_order";
    case Variant::Field: return "field";
  }
  return "?";
}

namespace {

using io::Json;

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaError, path + ": " + what);
}

void only_keys(const Json& j, const std::string& path, std::set<std::string> allowed) {
  if (!j.is_object()) schema(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) schema(path + "." + key, "unknown key");
  }
}

const Json& need(const Json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) schema(path + "." + key, "missing");
  return j.at(key);
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(path, "must be finite");
  return v;
}

std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) schema(path, "expected a non-negative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

Complex complex_value(const Json& j, const std::string& path) {
  if (j.is_number()) return number(j, path);
  if (j.is_array() && j.size() == 2) return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  schema(path, "expected a number or [re, im]");
}

SolveMode solve_mode(const std::string& s, const std::string& path) {
  if (s == "stationary") return SolveMode::Stationary;
  if (s == "minimize") return SolveMode::Minimize;
  if (s == "maximize") return SolveMode::Maximize;
  schema(path, "expected stationary, minimize or maximize");
}

SolveOptions solve_options(const Json& j, const std::string& path) {
  only_keys(j, path, {"mode", "max_iterations", "gradient_tolerance", "certification_tolerance",
                      "initial_step", "shrink", "sufficient_decrease", "max_backtracks",
                      "restart_every", "knot_spacing", "rank_tolerance"});
  SolveOptions o;
  auto num = [&](const char* key, double& into) {
    if (j.contains(key)) into = number(j[key], path + "." + key);
  };
  auto cnt = [&](const char* key, std::size_t& into) {
    if (j.contains(key)) into = count(j[key], path + "." + key);
  };
  if (j.contains("mode")) o.mode = solve_mode(text(j["mode"], path + ".mode"), path + ".mode");
  cnt("max_iterations", o.max_iterations);
  num("gradient_tolerance", o.gradient_tolerance);
  num("certification_tolerance", o.certification_tolerance);
  num("initial_step", o.step_control.initial_step);
  num("shrink", o.step_control.shrink);
  num("sufficient_decrease", o.step_control.sufficient_decrease);
  cnt("max_backtracks", o.step_control.max_backtracks);
  cnt("restart_every", o.restart_every);
  num("knot_spacing", o.knot_spacing);
  num("rank_tolerance", o.rank_tolerance);
  try {
    o.validate();
  } catch (const Error& e) {
    schema(path, e.what());
  }
  return o;
}

std::vector<std::string> field_initial_vars(std::size_t dims) {
  std::vector<std::string> v{"t"};
  for (std::size_t d = 1; d <= dims; ++d) v.push_back("s" + std::to_string(d));
  return v;
}

// Parses every `initial` expression up front so errors surface at load time.
void check_initial(const std::vector<std::string>& sources, const std::vector<std::string>& vars) {
  for (const auto& s : sources) {
    const auto e = expr::parse(s);
    for (const auto& name : expr::free_variables(e)) {
      if (std::find(vars.begin(), vars.end(), name) == vars.end()) {
        throw Error(ErrorKind::SchemaError, "initial: variable " + name + " is not allowed here");
      }
    }
  }
}

}  // namespace

SampledSignal sample_expression(const std::string& source, const UniformGrid& grid) {
  const auto e = expr::parse(source);
  std::vector<Complex> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Complex c = expr::evaluate(e, {{"t", grid.node(k)}});
    if (c.imag() != 0.0 || !std::isfinite(c.real())) {
      throw Error(ErrorKind::DomainError,
                  "expression " + source + " is not real and finite at t = " + io::format_double(grid.node(k)));
    }
    v[k] = c.real();
  }
  return SampledSignal(grid, std::move(v), SignalKind::Real);
}

ProblemFile parse_problem(const Json& doc) {
  only_keys(doc, "$", {"variant", "interval", "z_a", "dimension", "order", "space", "lagrangian",
                       "boundaries", "grid", "scale", "solve", "initial"});
  ProblemFile p;
  const std::string v = text(need(doc, "$", "variant"), "$.variant");
  if (v == "scalar") p.variant = Variant::Scalar;
  else if (v == "vector") p.variant = Variant::Vector;
  else if (v == "higher_order") p.variant = Variant::HigherOrder;
  else if (v == "field") p.variant = Variant::Field;
  else schema("$.variant", "expected scalar, vector, higher_order or field");

  const Json& iv = need(doc, "$", "interval");
  if (!iv.is_array() || iv.size() != 2) schema("$.interval", "expected [a, b]");
  p.a = number(iv[0], "$.interval[0]");
  p.b = number(iv[1], "$.interval[1]");
  if (!(p.a < p.b)) schema("$.interval", "needs a < b");
  if (doc.contains("z_a")) p.z_a = complex_value(doc["z_a"], "$.z_a");
  p.lagrangian = text(need(doc, "$", "lagrangian"), "$.lagrangian");

  auto forbid = [&](const char* key) {
    if (doc.contains(key)) schema(std::string("$.") + key, "not allowed for variant " + v);
  };
  switch (p.variant) {
    case Variant::Scalar:
      forbid("order"), forbid("space");
      if (doc.contains("dimension") && count(doc["dimension"], "$.dimension") != 1) {
        schema("$.dimension", "scalar problems have dimension 1");
      }
      p.dimension = 1;
      break;
    case Variant::Vector:
      forbid("order"), forbid("space");
      p.dimension = count(need(doc, "$", "dimension"), "$.dimension");
      if (p.dimension == 0) schema("$.dimension", "must be at least 1");
      break;
    case Variant::HigherOrder:
      forbid("dimension"), forbid("space");
      p.dimension = count(need(doc, "$", "order"), "$.order");
      if (p.dimension == 0) schema("$.order", "must be at least 1");
      break;
    case Variant::Field: {
      forbid("dimension"), forbid("order"), forbid("boundaries");
      const Json& sp = need(doc, "$", "space");
      if (!sp.is_array() || sp.empty() || sp.size() > 2) schema("$.space", "expected 1 or 2 [lo, hi] pairs");
      for (std::size_t d = 0; d < sp.size(); ++d) {
        const std::string path = "$.space[" + std::to_string(d) + "]";
        if (!sp[d].is_array() || sp[d].size() != 2) schema(path, "expected [lo, hi]");
        p.space.emplace_back(number(sp[d][0], path + "[0]"), number(sp[d][1], path + "[1]"));
        if (!(p.space.back().first < p.space.back().second)) schema(path, "needs lo < hi");
      }
      p.dimension = p.space.size();
      break;
    }
  }

  if (p.variant != Variant::Field) {
    const Json& bs = need(doc, "$", "boundaries");
    if (!bs.is_array() || bs.size() != p.dimension) {
      schema("$.boundaries", "expected " + std::to_string(p.dimension) + " entries");
    }
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const std::string path = "$.boundaries[" + std::to_string(i) + "]";
      only_keys(bs[i], path, {"left", "right"});
      Boundary bc;
      bc.left = number(need(bs[i], path, "left"), path + ".left");
      const Json& r = need(bs[i], path, "right");
      if (r.is_string()) {
        if (r.get<std::string>() != "free") schema(path + ".right", "expected a number or \"free\"");
      } else {
        bc.right = number(r, path + ".right");
      }
      p.boundaries.push_back(bc);
    }
  }

  const Json& grid = need(doc, "$", "grid");
  only_keys(grid, "$.grid", {"step", "margin_nodes"});
  p.step = number(need(grid, "$.grid", "step"), "$.grid.step");
  if (!(p.step > 0.0)) schema("$.grid.step", "must be positive");
  if (grid.contains("margin_nodes")) p.margin_nodes = count(grid["margin_nodes"], "$.grid.margin_nodes");

  const Json& sc = need(doc, "$", "scale");
  only_keys(sc, "$.scale", {"h", "ladder"});
  p.h = number(need(sc, "$.scale", "h"), "$.scale.h");
  if (sc.contains("ladder")) {
    const Json& l = sc["ladder"];
    if (!l.is_array()) schema("$.scale.ladder", "expected an array of h values");
    for (std::size_t k = 0; k < l.size(); ++k) {
      p.ladder.push_back(number(l[k], "$.scale.ladder[" + std::to_string(k) + "]"));
    }
  }

  if (doc.contains("solve")) p.solve = solve_options(doc["solve"], "$.solve");

  if (doc.contains("initial")) {
    const Json& init = doc["initial"];
    if (init.is_string()) {
      p.initial.push_back(init.get<std::string>());
    } else if (init.is_array()) {
      for (std::size_t k = 0; k < init.size(); ++k) {
        p.initial.push_back(text(init[k], "$.initial[" + std::to_string(k) + "]"));
      }
    } else {
      schema("$.initial", "expected an expression or an array of expressions");
    }
    const std::size_t want = p.variant == Variant::Vector ? p.dimension : 1;
    if (p.initial.size() != want) {
      schema("$.initial", "expected " + std::to_string(want) + " expression(s)");
    }
    check_initial(p.initial, p.variant == Variant::Field ? field_initial_vars(p.dimension)
                                                         : std::vector<std::string>{"t"});
  }

  // Building the library objects validates slots, h/step compatibility and
  // the Lagrangian's alphabet.
  switch (p.variant) {
    case Variant::Scalar:
    case Variant::Vector: (void)p.herglotz_problem(); break;
    case Variant::HigherOrder: (void)p.higher_order_problem(); break;
    case Variant::Field: (void)p.field_problem(); break;
  }
  return p;
}

ProblemFile parse_problem_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(doc);
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_problem_text(ss.str());
}

ScaleParams ProblemFile::scale() const { return ScaleParams::from_h(step, h, ladder); }

std::size_t ProblemFile::margin() const {
  if (margin_nodes) return *margin_nodes;
  const std::size_t hn = scale().h_nodes();
  return variant == Variant::HigherOrder ? 2 * dimension * hn : 2 * hn;
}

HerglotzProblem ProblemFile::herglotz_problem() const {
  if (variant != Variant::Scalar && variant != Variant::Vector) {
    throw Error(ErrorKind::SchemaError, "variant " + to_string(variant) + " is not first order");
  }
  return HerglotzProblem(a, b, z_a, boundaries, Lagrangian(lagrangian, first_order_slots(dimension)),
                         scale());
}

HigherOrderProblem ProblemFile::higher_order_problem() const {
  if (variant != Variant::HigherOrder) throw Error(ErrorKind::SchemaError, "not a higher_order problem");
  return HigherOrderProblem(a, b, z_a, boundaries,
                            Lagrangian(lagrangian, higher_order_slots(dimension)), scale());
}

FieldProblem ProblemFile::field_problem() const {
  if (variant != Variant::Field) throw Error(ErrorKind::SchemaError, "not a field problem");
  return FieldProblem(a, b, space, z_a, Lagrangian(lagrangian, field_slots(dimension)), scale());
}

Trajectory ProblemFile::initial_trajectory() const {
  if (variant == Variant::Field) throw Error(ErrorKind::SchemaError, "field problems have no trajectory");
  if (initial.empty()) throw Error(ErrorKind::SchemaError, "$.initial: missing");
  const UniformGrid g(a, b, step, margin());
  std::vector<SampledSignal> comps;
  for (const auto& source : initial) comps.push_back(sample_expression(source, g));
  return Trajectory(std::move(comps));
}

FieldSamples ProblemFile::initial_field() const {
  if (variant != Variant::Field) throw Error(ErrorKind::SchemaError, "not a field problem");
  if (initial.empty()) throw Error(ErrorKind::SchemaError, "$.initial: missing");
  const auto e = expr::parse(initial.front());
  const auto vars = field_initial_vars(dimension);
  return FieldSamples::sample(field_problem().axes(margin()), [&](std::span<const double> at) {
    expr::Bindings bind;
    for (std::size_t d = 0; d < at.size(); ++d) bind[vars[d]] = at[d];
    const Complex c = expr::evaluate(e, bind);
    if (c.imag() != 0.0 || !std::isfinite(c.real())) {
      throw Error(ErrorKind::DomainError, "initial field expression is not real and finite");
    }
    return c.real();
  });
}

}  // namespace herglotz
