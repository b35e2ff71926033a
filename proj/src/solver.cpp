#include "herglotz/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "herglotz/errors.hpp"
#include "herglotz/ode.hpp"
#include "herglotz/parallel.hpp"

namespace herglotz {

std::string to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::Stationary: return "stationary";
    case SolveMode::Minimize: return "minimize";
    case SolveMode::Maximize: return "maximize";
  }
  return "?";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterationsExceeded: return "max_iterations_exceeded";
    case SolveStatus::LineSearchFailure: return "line_search_failure";
  }
  return "?";
}

void SolveOptions::validate() const {
  if (!(gradient_tolerance > 0.0) || !(certification_tolerance > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "solver tolerances must be positive");
  }
  if (!(step_control.shrink > 0.0 && step_control.shrink < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "shrink factor must lie in (0, 1)");
  }
  if (!(step_control.initial_step > 0.0) || !(step_control.sufficient_decrease > 0.0) ||
      !(step_control.sufficient_decrease < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "step control needs initial_step > 0 and c in (0, 1)");
  }
  if (!(knot_spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "knot_spacing must be positive");
  if (!(rank_tolerance >= 0.0 && rank_tolerance < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "rank_tolerance must lie in [0, 1)");
  }
  if (max_iterations == 0) throw Error(ErrorKind::InvalidArgument, "max_iterations must be positive");
}

std::vector<NodeRef> gradient_layout(const HerglotzProblem& problem) {
  const std::size_t cells = problem.grid(0).cells();
  std::vector<NodeRef> out;
  for (std::size_t i = 0; i < problem.dimension(); ++i) {
    for (std::size_t o = 1; o < cells; ++o) out.push_back({i, o});
    if (problem.boundary()[i].free_right()) out.push_back({i, cells});
  }
  return out;
}

namespace {

// Not-a-knot cubic spline through K + 1 equally spaced knots, as a matrix
// taking knot values to values at positions s (in knot units, 0 at the first
// knot). Outside [0, K] the end cubics continue.
Eigen::MatrixXd spline_matrix(std::size_t knots_minus_one, const std::vector<double>& s) {
  const auto k = static_cast<Eigen::Index>(knots_minus_one);
  // Second derivatives M = A^-1 R y.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(k + 1, k + 1);
  a(0, 0) = 1.0, a(0, 1) = -2.0, a(0, 2) = 1.0;
  a(k, k - 2) = 1.0, a(k, k - 1) = -2.0, a(k, k) = 1.0;
  for (Eigen::Index j = 1; j < k; ++j) {
    a(j, j - 1) = 1.0, a(j, j) = 4.0, a(j, j + 1) = 1.0;
    r(j, j - 1) = 6.0, r(j, j) = -12.0, r(j, j + 1) = 6.0;
  }
  const Eigen::MatrixXd m = a.partialPivLu().solve(r);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.size()), k + 1);
  for (std::size_t row = 0; row < s.size(); ++row) {
    const auto seg = std::clamp(static_cast<Eigen::Index>(std::floor(s[row])), Eigen::Index{0}, k - 1);
    const double u = s[row] - static_cast<double>(seg);
    const double v = 1.0 - u;
    const auto e = static_cast<Eigen::Index>(row);
    out.row(e) = ((v * v * v - v) / 6.0) * m.row(seg) + ((u * u * u - u) / 6.0) * m.row(seg + 1);
    out(e, seg) += v;
    out(e, seg + 1) += u;
  }
  return out;
}

}  // namespace

std::size_t knot_count(const HerglotzProblem& problem, double knot_spacing) {
  const std::size_t cells = problem.grid(0).cells();
  const double min_cells = knot_spacing * static_cast<double>(problem.scale().h_nodes());
  for (std::size_t k = cells; k >= 3; --k) {
    if (cells % k == 0 && static_cast<double>(cells / k) >= min_cells - 1e-9) return k;
  }
  throw Error(ErrorKind::InvalidArgument,
              "no knot count >= 3 divides the cells with the requested knot spacing");
}

namespace {

// d Re z(b) / d x_i(node k) for a unit hat at every node k of x's grid
// (margins included), other samples held. Indexed [coordinate][grid index].
std::vector<std::vector<double>> node_sensitivities(const HerglotzProblem& problem,
                                                    const Trajectory& x) {
  const auto& xg = x.grid();
  const ZSolution z = integrate_z(problem, x);
  const StagePath path = problem.path(x);
  const auto& l = problem.lagrangian();
  const std::size_t n = problem.dimension();
  const auto& pg = path.grid();

  const SampledSignal lambda = exp_neg_cumulative(partial_along(path, l, 2 * n + 1, z.extended));
  std::vector<SampledSignal> lx, p;
  for (std::size_t i = 0; i < n; ++i) {
    lx.push_back(partial_along(path, l, 1 + i, z.extended));
    p.push_back(partial_along(path, l, 1 + n + i, z.extended));
  }
  const Complex lambda_b = lambda.at_b();
  const double h = problem.scale().h();
  const double step = xg.step();
  const auto shn = static_cast<std::ptrdiff_t>(problem.scale().h_nodes());
  const auto cells = static_cast<std::ptrdiff_t>(xg.cells());
  const auto ia = static_cast<std::ptrdiff_t>(xg.index_of_a());
  const auto pa = static_cast<std::ptrdiff_t>(pg.index_of_a());

  // The quadrature RK4 applies along the path, so the formula differentiates
  // the same discrete objective right up to a and b.
  const auto weights = rk4_weights(pg.size(), static_cast<std::size_t>(pa),
                                   static_cast<std::size_t>(pa + cells), step);
  std::vector<std::vector<double>> out(n, std::vector<double>(xg.size()));
  parallel_for(n * xg.size(), [&](std::size_t e) {
    const std::size_t i = e / xg.size();
    const std::ptrdiff_t o = static_cast<std::ptrdiff_t>(e % xg.size()) - ia;
    Complex integral = 0.0;
    // box_h of the hat at o is nonzero at o - h, o, o + h only.
    for (std::ptrdiff_t q : {o - shn, o, o + shn}) {
      if (q < -pa || q + pa >= static_cast<std::ptrdiff_t>(pg.size())) continue;
      const double w = weights[static_cast<std::size_t>(pa + q)];
      if (w == 0.0) continue;
      const double eta = q == o ? 1.0 : 0.0;
      const double fwd = ((q + shn == o ? 1.0 : 0.0) - eta) / h;
      const double bwd = (eta - (q - shn == o ? 1.0 : 0.0)) / h;
      const Complex box_eta(0.5 * (fwd + bwd), 0.5 * (fwd - bwd));
      const auto k = static_cast<std::size_t>(pa + q);
      integral += w * lambda[k] * (lx[i][k] * eta + p[i][k] * box_eta);
    }
    out[i][e % xg.size()] = (integral / lambda_b).real();
  });
  return out;
}

std::vector<double> pick(const std::vector<std::vector<double>>& sens, const UniformGrid& g,
                         const std::vector<NodeRef>& layout) {
  std::vector<double> out;
  out.reserve(layout.size());
  for (const auto& [i, o] : layout) out.push_back(sens[i][g.index_of_a() + o]);
  return out;
}

}  // namespace

std::vector<double> terminal_gradient(const HerglotzProblem& problem, const Trajectory& raw) {
  const Trajectory x = problem.enforce(raw);
  return pick(node_sensitivities(problem, x), x.grid(), gradient_layout(problem));
}

namespace {

// Search space: each coordinate is a cubic spline on K + 1 knots spanning
// [a, b]; its values at every grid node (margins included) are B c. The
// unknowns are the knot values not pinned by a boundary condition.
class Pipeline {
 public:
  Pipeline(const HerglotzProblem& problem, const Trajectory& init, const SolveOptions& options)
      : problem_(problem), base_(problem.enforce(init)),
        knots_(knot_count(problem, options.knot_spacing)) {
    const auto& g = base_.grid();
    const double per_knot = static_cast<double>(g.cells() / knots_);
    std::vector<double> pos(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      pos[k] = (static_cast<double>(k) - static_cast<double>(g.index_of_a())) / per_knot;
    }
    basis_ = spline_matrix(knots_, pos);
    for (std::size_t i = 0; i < problem.dimension(); ++i) {
      const std::size_t last = problem.boundary()[i].free_right() ? knots_ : knots_ - 1;
      for (std::size_t j = 1; j <= last; ++j) layout_.push_back({i, j});
    }
    const std::size_t free_knots = knots_ - 1;
    const Eigen::MatrixXd interior = basis_.middleCols(1, static_cast<Eigen::Index>(free_knots));
    gram_ = g.step() * interior.transpose() * interior;
    const Eigen::MatrixXd with_end = basis_.rightCols(static_cast<Eigen::Index>(knots_));
    gram_free_end_ = g.step() * with_end.transpose() * with_end;
  }

  std::vector<double> pack(const Trajectory& x) const {
    const std::size_t ia = x.grid().index_of_a();
    const std::size_t per_knot = x.grid().cells() / knots_;
    std::vector<double> u(layout_.size());
    for (std::size_t e = 0; e < u.size(); ++e) {
      u[e] = x[layout_[e].coordinate][ia + layout_[e].offset * per_knot].real();
    }
    return u;
  }

  Trajectory unpack(const std::vector<double>& u) const {
    const auto& g = base_.grid();
    const std::size_t per_knot = g.cells() / knots_;
    std::vector<Eigen::VectorXd> c(problem_.dimension());
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] = Eigen::VectorXd(static_cast<Eigen::Index>(knots_ + 1));
      for (std::size_t j = 0; j <= knots_; ++j) {
        c[i][static_cast<Eigen::Index>(j)] = base_[i][g.index_of_a() + j * per_knot].real();
      }
    }
    for (std::size_t e = 0; e < u.size(); ++e) {
      c[layout_[e].coordinate][static_cast<Eigen::Index>(layout_[e].offset)] = u[e];
    }
    std::vector<SampledSignal> comps;
    for (const auto& ci : c) {
      const Eigen::VectorXd v = basis_ * ci;
      comps.emplace_back(g, std::vector<Complex>(v.begin(), v.end()), SignalKind::Real);
    }
    // Pins x(a) and fixed x(b) to the exact boundary values.
    return problem_.enforce(Trajectory(std::move(comps)));
  }

  const Trajectory& base() const { return base_; }

  Complex objective(const std::vector<double>& u) const {
    return integrate_z(problem_, unpack(u)).terminal;
  }
  /// d Re z(b) / d u: hat sensitivities at every node, pulled back through
  /// the spline.
  std::vector<double> gradient(const std::vector<double>& u) const { return pull_back(u, false); }
  /// Stationarity residual: as gradient, but only nodes at least h + 2 steps
  /// inside [a, b] (and b itself when free) contribute. Those hats see
  /// uniform quadrature weights and leave no boundary term in the summation
  /// by parts, so a zero here is a weak form of the Euler-Lagrange equation
  /// rather than of the discrete end effects.
  std::vector<double> residual(const std::vector<double>& u) const { return pull_back(u, true); }
  /// Gradient with respect to the L2 inner product on trajectories.
  Eigen::VectorXd riesz(const std::vector<double>& grad) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(grad.size()));
    Eigen::Index at = 0;
    for (std::size_t i = 0; i < problem_.dimension(); ++i) {
      const Eigen::MatrixXd& gram = problem_.boundary()[i].free_right() ? gram_free_end_ : gram_;
      const Eigen::Index len = gram.rows();
      out.segment(at, len) = gram.ldlt().solve(as_eigen(grad).segment(at, len));
      at += len;
    }
    return out;
  }

 private:
  std::vector<double> pull_back(const std::vector<double>& u, bool interior_only) const {
    const auto sens = node_sensitivities(problem_, unpack(u));
    const auto& g = base_.grid();
    const std::size_t hn = problem_.scale().h_nodes();
    // The RK4 weights are uniform from a + 2 step to b - 2 step.
    const std::size_t lo = g.index_of_a() + hn + 2;
    const std::size_t hi = g.index_of_b() - hn - 2;
    std::vector<double> out(layout_.size());
    for (std::size_t e = 0; e < out.size(); ++e) {
      const auto [i, knot] = layout_[e];
      const auto col = basis_.col(static_cast<Eigen::Index>(knot));
      const auto& row = sens[i];
      double acc = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (interior_only && (k < lo || k > hi)) continue;
        acc += col[static_cast<Eigen::Index>(k)] * row[k];
      }
      if (interior_only && problem_.boundary()[i].free_right()) {
        acc += col[static_cast<Eigen::Index>(g.index_of_b())] * row[g.index_of_b()];
      }
      out[e] = acc;
    }
    return out;
  }

  static Eigen::VectorXd as_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

  const HerglotzProblem& problem_;
  Trajectory base_;
  std::size_t knots_;
  Eigen::MatrixXd basis_;
  std::vector<NodeRef> layout_;  // offset = knot index
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd gram_free_end_;
};

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Eigen::VectorXd as_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> axpy(const std::vector<double>& u, double a, const Eigen::VectorXd& d) {
  std::vector<double> out(u);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += a * d[static_cast<Eigen::Index>(k)];
  return out;
}

Eigen::MatrixXd fd_jacobian(const Pipeline& pipe, const std::vector<double>& u,
                            const std::vector<double>& g) {
  const auto m = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd j(m, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    std::vector<double> up(u);
    const double eps = 1e-6 * std::max(1.0, std::abs(u[static_cast<std::size_t>(c)]));
    up[static_cast<std::size_t>(c)] += eps;
    const auto gp = pipe.residual(up);
    for (Eigen::Index r = 0; r < m; ++r) {
      j(r, c) = (gp[static_cast<std::size_t>(r)] - g[static_cast<std::size_t>(r)]) / eps;
    }
  }
  return j;
}

// Truncated pseudo-inverse step. Directions with singular value below
// rank_tolerance * sigma_max are left alone; `resolved` receives the part of
// rhs inside the kept range.
Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& j, const Eigen::VectorXd& rhs,
                               double rank_tolerance, Eigen::VectorXd& resolved) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cut = rank_tolerance * (s.size() > 0 ? s[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > cut) ++rank;
  const auto u = svd.matrixU().leftCols(rank);
  const Eigen::VectorXd c = u.transpose() * rhs;
  resolved = u * c;
  return svd.matrixV().leftCols(rank) * (c.array() / s.head(rank).array()).matrix();
}

SolveResult finish(const HerglotzProblem& problem, const Pipeline& pipe,
                   const std::vector<double>& u, std::vector<TraceRow> trace, SolveStatus status,
                   const SolveOptions& options) {
  Trajectory x = pipe.unpack(u);
  const ZSolution z = integrate_z(problem, x);
  ELReport report = el_residual(problem, x, z, options.certification_tolerance);
  const bool certified = status == SolveStatus::Converged && report.certified;
  return {std::move(x), std::move(report), std::move(trace), status, certified};
}

SolveResult stationary(const HerglotzProblem& problem, const Pipeline& pipe,
                       const SolveOptions& options) {
  std::vector<double> u = pipe.pack(pipe.base());
  std::vector<double> g = pipe.residual(u);
  std::vector<TraceRow> trace{{0, pipe.objective(u), norm(g), 0.0}};
  Eigen::MatrixXd jac = fd_jacobian(pipe, u, g);
  std::size_t updates = 0;
  bool fresh = true;
  const auto& sc = options.step_control;

  for (std::size_t iter = 1;; ++iter) {
    const Eigen::VectorXd ge = as_eigen(g);
    Eigen::VectorXd resolved;
    const Eigen::VectorXd d = -min_norm_solve(jac, ge, options.rank_tolerance, resolved);
    if (resolved.norm() <= options.gradient_tolerance) {
      if (fresh) return finish(problem, pipe, u, std::move(trace), SolveStatus::Converged, options);
      jac = fd_jacobian(pipe, u, g);
      fresh = true;
      updates = 0;
      --iter;
      continue;
    }
    if (iter > options.max_iterations) break;
    const double phi = 0.5 * ge.squaredNorm();
    const double slope = resolved.squaredNorm();
    double alpha = std::min(1.0, sc.initial_step);
    bool accepted = false;
    std::vector<double> un, gn;
    for (std::size_t bt = 0; bt <= sc.max_backtracks; ++bt) {
      un = axpy(u, alpha, d);
      gn = pipe.residual(un);
      if (0.5 * as_eigen(gn).squaredNorm() <= phi - sc.sufficient_decrease * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= sc.shrink;
    }
    if (!accepted) {
      if (fresh) {
        return finish(problem, pipe, u, std::move(trace), SolveStatus::LineSearchFailure, options);
      }
      // Secant model went stale: rebuild and retry this iteration.
      jac = fd_jacobian(pipe, u, g);
      fresh = true;
      updates = 0;
      --iter;
      continue;
    }
    const Eigen::VectorXd s = alpha * d;
    const Eigen::VectorXd y = as_eigen(gn) - ge;
    u = std::move(un);
    g = std::move(gn);
    trace.push_back({iter, pipe.objective(u), norm(g), alpha});
    const double ss = s.squaredNorm();
    if (++updates >= options.restart_every || ss == 0.0) {
      jac = fd_jacobian(pipe, u, g);
      updates = 0;
      fresh = true;
    } else {
      jac += (y - jac * s) * s.transpose() / ss;  // Broyden
      fresh = false;
    }
  }
  return finish(problem, pipe, u, std::move(trace), SolveStatus::MaxIterationsExceeded, options);
}

SolveResult descend(const HerglotzProblem& problem, const Pipeline& pipe,
                    const SolveOptions& options) {
  const double sign = options.mode == SolveMode::Maximize ? -1.0 : 1.0;
  const auto& sc = options.step_control;
  std::vector<double> u = pipe.pack(pipe.base());
  std::vector<double> g = pipe.gradient(u);
  Complex obj = pipe.objective(u);
  std::vector<TraceRow> trace{{0, obj, norm(g), 0.0}};
  double alpha = sc.initial_step;

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    if (norm(g) <= options.gradient_tolerance) {
      return finish(problem, pipe, u, std::move(trace), SolveStatus::Converged, options);
    }
    // Gradient with respect to the L2 inner product on trajectories.
    Eigen::VectorXd d = -sign * pipe.riesz(g);
    const double slope = sign * as_eigen(g).dot(d);
    bool accepted = false;
    std::vector<double> un;
    Complex on;
    for (std::size_t bt = 0; bt <= sc.max_backtracks; ++bt) {
      un = axpy(u, alpha, d);
      on = pipe.objective(un);
      if (sign * on.real() <= sign * obj.real() + sc.sufficient_decrease * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= sc.shrink;
    }
    if (!accepted) {
      return finish(problem, pipe, u, std::move(trace), SolveStatus::LineSearchFailure, options);
    }
    u = std::move(un);
    obj = on;
    g = pipe.gradient(u);
    trace.push_back({iter, obj, norm(g), alpha});
    alpha = std::min(alpha * 2.0, sc.initial_step * 1e6);
  }
  const auto status = norm(g) <= options.gradient_tolerance ? SolveStatus::Converged
                                                            : SolveStatus::MaxIterationsExceeded;
  return finish(problem, pipe, u, std::move(trace), status, options);
}

}  // namespace

SolveResult extremize(const HerglotzProblem& problem, const Trajectory& init,
                      const SolveOptions& options) {
  options.validate();
  const Pipeline pipe(problem, init, options);
  if (options.mode == SolveMode::Stationary) return stationary(problem, pipe, options);
  return descend(problem, pipe, options);
}

}  // namespace herglotz
