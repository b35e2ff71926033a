#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "herglotz/errors.hpp"
#include "herglotz/fit.hpp"
#include "herglotz/io.hpp"
#include "herglotz/parallel.hpp"
#include "herglotz/problem_file.hpp"
#include "herglotz/scale_ops.hpp"
#include "herglotz/signals.hpp"

using namespace herglotz;
using io::Json;

namespace {

enum Exit { kOk = 0, kNotCertified = 1, kUsage = 2, kNumeric = 3, kMaxIterations = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::UnboundVariable:
    case ErrorKind::SchemaError:
    case ErrorKind::IoError:
      return kUsage;
    default:
      return kNumeric;
  }
}

struct Globals {
  std::optional<double> tol;
  std::string out_dir;
  std::optional<std::size_t> threads;
};

// Where a signal comes from: an expression in t, `weierstrass:amp,freq[,terms]`,
// or a t,re[,im] CSV file.
struct SignalSource {
  std::string expr;
  std::string input;
  double a = 0.0;
  double b = 1.0;
  double step = 0.01;
};

SampledSignal load_signal(const SignalSource& src, std::size_t margin) {
  if (!src.input.empty()) {
    std::ifstream f(src.input, std::ios::binary);
    if (!f) throw Error(ErrorKind::IoError, "cannot open " + src.input);
    return io::read_signal_csv(f, src.a, src.b, src.step);
  }
  const UniformGrid g(src.a, src.b, src.step, margin);
  const std::string prefix = "weierstrass:";
  if (src.expr.rfind(prefix, 0) == 0) {
    std::vector<double> p;
    std::stringstream ss(src.expr.substr(prefix.size()));
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        p.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, "bad weierstrass parameter: " + cell);
      }
    }
    if (p.size() < 2 || p.size() > 3) {
      throw Error(ErrorKind::InvalidArgument, "expected weierstrass:amp,freq[,terms]");
    }
    return weierstrass(p[0], static_cast<int>(p[1]), p.size() == 3 ? static_cast<int>(p[2]) : 30, g);
  }
  return sample_expression(src.expr, g);
}

std::size_t nodes_of(double h, double step) {
  return ScaleParams::from_h(step, h).h_nodes();
}

std::size_t max_nodes(const std::vector<double>& ladder, double step) {
  std::size_t m = 0;
  for (double h : ladder) m = std::max(m, nodes_of(h, step));
  return m;
}

void require_ladder(const std::vector<double>& ladder) {
  if (ladder.size() < 3) {
    throw Error(ErrorKind::LadderTooShort,
                "a study needs at least 3 h values, got " + std::to_string(ladder.size()));
  }
}

double fitted_slope(const std::vector<double>& h, const std::vector<double>& value) {
  if (std::any_of(value.begin(), value.end(), [](double v) { return !(v > 0.0); })) {
    return std::nan("");
  }
  return fit_loglog(h, value).slope;
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

void emit(const Globals& g, const std::string& name, const std::string& text) {
  std::cout << text;
  if (!g.out_dir.empty()) io::write_file(g.out_dir, name, text);
}

// ---- derive ---------------------------------------------------------------

struct DeriveArgs {
  SignalSource src;
  double h = 0.05;
  std::size_t order = 1;
  std::string mode = "fixed";
  std::vector<double> ladder;
};

int run_derive(const Globals& g, const DeriveArgs& d) {
  if (d.src.expr.empty() == d.src.input.empty()) {
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --expr or --input");
  }
  if (d.order == 0) throw Error(ErrorKind::InvalidArgument, "--order must be at least 1");
  const ScaleParams params = ScaleParams::from_h(d.src.step, d.h, d.ladder);
  std::size_t margin = d.order * params.h_nodes();
  if (d.mode == "extrapolated") {
    if (d.order != 1) throw Error(ErrorKind::InvalidArgument, "extrapolated mode supports --order 1");
    margin = std::max(params.h_nodes(), max_nodes(d.ladder, d.src.step));
  }
  SampledSignal f = load_signal(d.src, margin);
  SampledSignal out = f;
  if (d.mode == "fixed") {
    out = higher_order_box(f, d.order, params);
  } else if (d.mode == "extrapolated") {
    out = box_derivative(f, params, BoxMode::Extrapolated).derivative;
  } else if (d.mode == "delta" || d.mode == "nabla") {
    for (std::size_t k = 0; k < d.order; ++k) {
      out = d.mode == "delta" ? delta_derivative(out, params) : nabla_derivative(out, params);
    }
  }
  std::ostringstream csv;
  io::write_signal_csv(csv, out.restrict_margins(0, 0));
  emit(g, "derive.csv", csv.str());
  return kOk;
}

// ---- residual -------------------------------------------------------------

Trajectory trajectory_for(const ProblemFile& p, const std::string& csv) {
  if (csv.empty()) return p.initial_trajectory();
  std::ifstream f(csv, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + csv);
  return io::read_trajectory_csv(f, p.a, p.b, p.step);
}

struct Evaluated {
  Json report;
  bool certified = false;
  double sup = 0.0;
};

Evaluated evaluate_problem(const ProblemFile& p, const std::string& csv, std::optional<double> tol,
                           const Globals& g, bool snapshots) {
  Evaluated out;
  if (p.variant == Variant::Field) {
    const auto problem = p.field_problem();
    const auto u = p.initial_field();
    const auto z = integrate_z_field(problem, u);
    const auto r = el_residual_field(problem, u, z, tol.value_or(1e-1));
    out.report = io::report_json(r);
    out.report["z_b"] = complex_json(z.terminal);
    out.certified = r.certified;
    out.sup = r.sup_norm;
    if (snapshots && !g.out_dir.empty()) io::write_field_snapshots(g.out_dir, "residual", r.residual);
    return out;
  }
  const Trajectory x = trajectory_for(p, csv);
  if (p.variant == Variant::HigherOrder) {
    const auto problem = p.higher_order_problem();
    const auto xe = problem.enforce(x);
    const auto z = integrate_z_ho(problem, xe);
    const auto r = el_residual_ho(problem, xe, z, tol.value_or(5e-2));
    out.report = io::report_json(r);
    out.report["z_b"] = complex_json(z.terminal);
    Json defects = Json::array();
    for (const auto& d : boundary_defects(problem, xe)) {
      defects.push_back(Json{{"order", d.order}, {"left", d.left}, {"right", d.right}});
    }
    out.report["boundary_defects"] = defects;
    out.certified = r.certified;
    out.sup = *std::max_element(r.sup_norms.begin(), r.sup_norms.end());
    return out;
  }
  const auto problem = p.herglotz_problem();
  const auto xe = problem.enforce(x);
  const auto z = integrate_z(problem, xe);
  const auto r = el_residual(problem, xe, z, tol.value_or(5e-2));
  out.report = io::report_json(r);
  out.report["z_b"] = complex_json(z.terminal);
  out.certified = r.certified;
  out.sup = *std::max_element(r.sup_norms.begin(), r.sup_norms.end());
  return out;
}

int run_residual(const Globals& g, const std::string& problem_path, const std::string& csv) {
  const auto p = load_problem(problem_path);
  auto ev = evaluate_problem(p, csv, g.tol, g, true);
  Json doc;
  doc["variant"] = to_string(p.variant);
  doc["grid"] = io::grid_json(UniformGrid(p.a, p.b, p.step, p.margin()));
  for (auto& [key, value] : ev.report.items()) doc[key] = value;
  emit(g, "report.json", io::dump(doc) + "\n");
  return ev.certified ? kOk : kNotCertified;
}

// ---- solve ----------------------------------------------------------------

// Straight line between the boundary values, or the constant left value
// when the right end is free.
Trajectory default_initial(const ProblemFile& p) {
  const UniformGrid grid(p.a, p.b, p.step, p.margin());
  std::vector<std::function<double(double)>> fns;
  for (const auto& bc : p.boundaries) {
    const double left = bc.left;
    const double right = bc.right.value_or(bc.left);
    const double a = p.a, b = p.b;
    fns.emplace_back([=](double t) { return left + (right - left) * (t - a) / (b - a); });
  }
  return Trajectory::sample(grid, fns);
}

int run_solve(const Globals& g, const std::string& problem_path) {
  const auto p = load_problem(problem_path);
  if (p.variant != Variant::Scalar && p.variant != Variant::Vector) {
    throw Error(ErrorKind::InvalidArgument, "solve supports scalar and vector problems only");
  }
  const auto problem = p.herglotz_problem();
  SolveOptions options = p.solve;
  if (g.tol) options.certification_tolerance = *g.tol;
  const Trajectory init = p.initial.empty() ? default_initial(p) : p.initial_trajectory();
  const auto r = extremize(problem, init, options);

  Json doc;
  doc["variant"] = to_string(p.variant);
  doc["status"] = to_string(r.status);
  doc["certified"] = r.certified;
  doc["iterations"] = r.trace.empty() ? 0 : r.trace.back().iter;
  doc["objective"] = complex_json(r.trace.empty() ? Complex{} : r.trace.back().objective);
  doc["grad_norm"] = r.trace.empty() ? 0.0 : r.trace.back().grad_norm;
  doc["grid"] = io::grid_json(r.trajectory.grid());
  doc["report"] = io::report_json(r.report);
  const std::string json = io::dump(doc) + "\n";
  std::cout << json;
  if (!g.out_dir.empty()) {
    io::write_file(g.out_dir, "report.json", json);
    std::ostringstream traj, trace;
    io::write_trajectory_csv(traj, r.trajectory);
    io::write_trace_csv(trace, r.trace);
    io::write_file(g.out_dir, "trajectory.csv", traj.str());
    io::write_file(g.out_dir, "trace.csv", trace.str());
  }
  if (r.status == SolveStatus::MaxIterationsExceeded) return kMaxIterations;
  return r.certified ? kOk : kNotCertified;
}

// ---- study ----------------------------------------------------------------

struct StudyArgs {
  std::string kind;
  std::string problem;
  std::string trajectory;
  SignalSource f;
  std::string g_expr;
  std::vector<double> ladder;
};

int run_study(const Globals& g, const StudyArgs& s) {
  std::vector<double> ladder = s.ladder;
  std::vector<double> value;
  if (s.kind == "el") {
    if (s.problem.empty()) throw Error(ErrorKind::InvalidArgument, "el study needs --problem");
    const auto base = load_problem(s.problem);
    if (ladder.empty()) ladder = base.ladder;
    require_ladder(ladder);
    ProblemFile p = base;
    if (!p.margin_nodes) {
      const std::size_t per = p.variant == Variant::HigherOrder ? 2 * p.dimension : 2;
      p.margin_nodes = per * max_nodes(ladder, p.step);
    }
    for (double h : ladder) {
      p.h = h;
      p.ladder.clear();
      value.push_back(evaluate_problem(p, s.trajectory, g.tol, g, false).sup);
    }
  } else if (s.kind == "leibniz" || s.kind == "barrow") {
    require_ladder(ladder);
    if (s.f.expr.empty() && s.f.input.empty()) throw Error(ErrorKind::InvalidArgument, "study needs --f");
    const std::size_t margin = max_nodes(ladder, s.f.step);
    const auto f = load_signal(s.f, margin);
    std::optional<SampledSignal> second;
    if (s.kind == "leibniz") {
      if (s.g_expr.empty()) throw Error(ErrorKind::InvalidArgument, "leibniz study needs --g");
      SignalSource gs = s.f;
      gs.expr = s.g_expr;
      gs.input.clear();
      second = load_signal(gs, margin);
    }
    for (double h : ladder) {
      const ScaleParams params = ScaleParams::from_h(s.f.step, h);
      if (second) {
        value.push_back(leibniz_residual(f, *second, params).restrict_margins(0, 0).sup_norm());
      } else {
        value.push_back(box_integral(f, params).defect);
      }
    }
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown study " + s.kind);
  }
  std::ostringstream csv;
  io::write_study_csv(csv, ladder, value, fitted_slope(ladder, value));
  emit(g, "study.csv", csv.str());
  return kOk;
}

// ---- holder ---------------------------------------------------------------

int run_holder(const Globals& g, const SignalSource& src) {
  if (src.expr.empty() == src.input.empty()) {
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --expr or --input");
  }
  const auto est = holder_exponent(load_signal(src, 0));
  Json doc;
  doc["alpha_hat"] = est.alpha_hat;
  doc["slope"] = est.slope;
  doc["r_squared"] = est.r_squared;
  Json points = Json::array();
  for (const auto& [x, y] : est.regression_points) points.push_back(Json::array({x, y}));
  doc["regression_points"] = points;
  emit(g, "holder.json", io::dump(doc) + "\n");
  return kOk;
}

void signal_options(CLI::App* cmd, SignalSource& src, const char* expr_flag) {
  cmd->add_option(expr_flag, src.expr, "expression in t, or weierstrass:amp,freq[,terms]");
  cmd->add_option("--input", src.input, "CSV with columns t,re[,im]");
  cmd->add_option("--a", src.a, "left end")->capture_default_str();
  cmd->add_option("--b", src.b, "right end")->capture_default_str();
  cmd->add_option("--step", src.step, "grid step")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale derivatives and Herglotz variational problems"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "certification tolerance");
  app.add_option("--out-dir", g.out_dir, "also write outputs into this directory");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware); defaults to HERGLOTZ_THREADS");

  DeriveArgs derive;
  auto* derive_cmd = app.add_subcommand("derive", "apply a scale derivative to a signal");
  derive_cmd->set_help_flag("--help", "print this help and exit");
  signal_options(derive_cmd, derive.src, "--expr");
  derive_cmd->add_option("--h", derive.h, "scale h")->capture_default_str();
  derive_cmd->add_option("--order", derive.order, "number of applications")->capture_default_str();
  derive_cmd->add_option("--mode", derive.mode, "fixed | extrapolated | delta | nabla")
      ->check(CLI::IsMember({"fixed", "extrapolated", "delta", "nabla"}))
      ->capture_default_str();
  derive_cmd->add_option("--ladder", derive.ladder, "h values for extrapolation")->delimiter(',');

  std::string problem_path, trajectory_csv;
  auto* residual_cmd = app.add_subcommand("residual", "Euler-Lagrange residual report");
  residual_cmd->add_option("problem", problem_path, "problem JSON")->required();
  residual_cmd->add_option("--trajectory", trajectory_csv, "trajectory CSV (default: initial)");

  auto* solve_cmd = app.add_subcommand("solve", "extremize z(b)");
  solve_cmd->add_option("problem", problem_path, "problem JSON")->required();

  StudyArgs study;
  auto* study_cmd = app.add_subcommand("study", "convergence study over an h ladder");
  study_cmd->add_option("kind", study.kind, "leibniz | barrow | el")
      ->required()
      ->check(CLI::IsMember({"leibniz", "barrow", "el"}));
  study_cmd->add_option("--problem", study.problem, "problem JSON (el)");
  study_cmd->add_option("--trajectory", study.trajectory, "trajectory CSV (el)");
  signal_options(study_cmd, study.f, "--f");
  study_cmd->add_option("--g", study.g_expr, "second signal (leibniz)");
  study_cmd->add_option("--ladder", study.ladder, "h values")->delimiter(',');

  SignalSource holder;
  auto* holder_cmd = app.add_subcommand("holder", "estimate the Holder exponent of a signal");
  signal_options(holder_cmd, holder, "--expr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    std::size_t threads = 0;
    if (g.threads) {
      threads = *g.threads;
    } else if (const char* env = std::getenv("HERGLOTZ_THREADS")) {
      char* end = nullptr;
      const unsigned long long n = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0') throw Error(ErrorKind::InvalidArgument, "HERGLOTZ_THREADS is not a number");
      threads = static_cast<std::size_t>(n);
    }
    set_thread_count(threads);

    if (*derive_cmd) return run_derive(g, derive);
    if (*residual_cmd) return run_residual(g, problem_path, trajectory_csv);
    if (*solve_cmd) return run_solve(g, problem_path);
    if (*study_cmd) return run_study(g, study);
    if (*holder_cmd) return run_holder(g, holder);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
