#include "herglotz/higher_order.hpp"

#include <cmath>
#include <string>

#include "herglotz/errors.hpp"
#include "herglotz/scale_ops.hpp"

namespace herglotz {

HigherOrderProblem::HigherOrderProblem(double a, double b, Complex z_a,
                                       std::vector<Boundary> boundary, Lagrangian lagrangian,
                                       ScaleParams scale)
    : a_(a), b_(b), z_a_(z_a), boundary_(std::move(boundary)),
      lagrangian_(std::move(lagrangian)), scale_(std::move(scale)) {
  if (!(a_ < b_)) throw Error(ErrorKind::InvalidArgument, "interval needs a < b");
  if (boundary_.empty()) throw Error(ErrorKind::InvalidArgument, "order must be at least 1");
  for (const auto& bc : boundary_) {
    if (!std::isfinite(bc.left) || (bc.right && !std::isfinite(*bc.right))) {
      throw Error(ErrorKind::InvalidArgument, "boundary values must be finite");
    }
  }
  if (lagrangian_.slots() != higher_order_slots(boundary_.size())) {
    throw Error(ErrorKind::InvalidArgument,
                "Lagrangian arguments do not match order " + std::to_string(boundary_.size()));
  }
  (void)grid(0);
}

UniformGrid HigherOrderProblem::grid(std::size_t margin_nodes) const {
  return UniformGrid(a_, b_, scale_.step(), margin_nodes);
}

Trajectory HigherOrderProblem::enforce(const Trajectory& x) const {
  if (x.dimension() != 1) throw Error(ErrorKind::GridMismatch, "higher-order trajectories are scalar");
  if (!x.grid().compatible(grid(0))) {
    throw Error(ErrorKind::GridMismatch, "trajectory grid does not match the problem interval/step");
  }
  const auto& g = x.grid();
  std::vector<Complex> v(x[0].values().begin(), x[0].values().end());
  v[g.index_of_a()] = boundary_[0].left;
  if (boundary_[0].right) v[g.index_of_b()] = *boundary_[0].right;
  return Trajectory({SampledSignal(g, std::move(v), SignalKind::Real)});
}

StagePath HigherOrderProblem::path(const Trajectory& raw) const {
  const Trajectory x = enforce(raw);
  const std::size_t n = order();
  const std::size_t need = n * scale_.h_nodes();
  if (x.grid().margin_lo() < need || x.grid().margin_hi() < need) {
    throw Error(ErrorKind::InsufficientMargin,
                "box^" + std::to_string(n) + " x on [a, b] needs " + std::to_string(need) +
                    " margin nodes, trajectory has " + std::to_string(x.grid().margin_nodes()));
  }
  const std::size_t lo = x.grid().margin_lo() - need;
  const std::size_t hi = x.grid().margin_hi() - need;
  std::vector<SampledSignal> channels{x[0].restrict_margins(lo, hi)};
  SampledSignal d = x[0];
  for (std::size_t k = 1; k <= n; ++k) {
    d = box_h_derivative(d, scale_);
    channels.push_back(d.restrict_margins(lo, hi));
  }
  UniformGrid g = channels.front().grid();
  return StagePath(std::move(g), std::move(channels));
}

std::vector<BoundaryDefect> boundary_defects(const HigherOrderProblem& problem,
                                             const Trajectory& x) {
  const StagePath path = problem.path(x);
  std::vector<BoundaryDefect> out;
  for (std::size_t i = 0; i < problem.order(); ++i) {
    const auto& c = path.channel(i);
    const auto& bc = problem.boundary()[i];
    out.push_back({i, std::abs(c.at_a() - bc.left),
                   bc.right ? std::abs(c.at_b() - *bc.right) : 0.0});
  }
  return out;
}

ZSolution integrate_z_ho(const HigherOrderProblem& problem, const Trajectory& x) {
  const StagePath path = problem.path(x);
  SampledSignal ext = integrate_along(path, problem.lagrangian(), problem.z_a());
  SampledSignal z = ext.restrict_margins(0, 0);
  double im = 0.0;
  for (const auto& v : z.values()) im = std::max(im, std::abs(v.imag()));
  const Complex terminal = z.at_b();
  return {std::move(z), terminal, im, std::move(ext)};
}

namespace {

struct Weighted {
  SampledSignal lambda;
  std::vector<SampledSignal> lp;  // lp[k] = lambda * dL/d(box^k x), k = 0..n (k = 0 is dL/dx)
};

Weighted weighted_partials(const HigherOrderProblem& problem, const StagePath& path,
                           const ZSolution& z) {
  const auto& l = problem.lagrangian();
  const std::size_t n = problem.order();
  const SampledSignal lambda =
      exp_neg_cumulative(partial_along(path, l, n + 2, z.extended));
  Weighted w{lambda, {}};
  for (std::size_t k = 0; k <= n; ++k) {
    w.lp.push_back(lambda * partial_along(path, l, k + 1, z.extended));
  }
  return w;
}

}  // namespace

ELReport el_residual_ho(const HigherOrderProblem& problem, const Trajectory& x,
                        const ZSolution& z, double tolerance) {
  const StagePath path = problem.path(x);
  const std::size_t n = problem.order();
  const auto& scale = problem.scale();
  const std::size_t need = n * scale.h_nodes();
  if (path.grid().margin_lo() < need || path.grid().margin_hi() < need) {
    throw Error(ErrorKind::InsufficientMargin,
                "order-" + std::to_string(n) + " residual needs trajectory margins of at least " +
                    std::to_string(2 * need) + " nodes (2 n h_nodes)");
  }
  const Weighted w = weighted_partials(problem, path, z);
  const auto& g = path.grid();
  const std::size_t cells = g.cells();
  std::vector<Complex> r(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) r[k] = w.lp[0][g.index_of_a() + k];
  for (std::size_t i = 1; i <= n; ++i) {
    const SampledSignal term = higher_order_box(w.lp[i], i, scale);
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    const std::size_t off = term.grid().index_of_a();
    for (std::size_t k = 0; k <= cells; ++k) r[k] += sign * term[off + k];
  }
  SampledSignal res(g.with_margins(0, 0), std::move(r), SignalKind::Complex);

  ELReport report{.residual = {},
                  .sup_norms = {res.sup_norm()},
                  .lambda = w.lambda.restrict_margins(0, 0),
                  .transversality = {},
                  .barrow_defect = {},
                  .h = scale.h(),
                  .step = scale.step(),
                  .im_z_max = z.im_diagnostic};
  report.residual.push_back(std::move(res));
  bool any_free = false;
  for (const auto& bc : problem.boundary()) any_free = any_free || bc.free_right();
  if (any_free) report.transversality = transversality_ho(problem, x, z);
  report.certify(tolerance);
  return report;
}

std::vector<TransversalityEntry> transversality_ho(const HigherOrderProblem& problem,
                                                   const Trajectory& x, const ZSolution& z) {
  const std::size_t n = problem.order();
  bool any_free = false;
  for (const auto& bc : problem.boundary()) any_free = any_free || bc.free_right();
  if (!any_free) throw Error(ErrorKind::NoFreeBoundary, "every box^i x(b) is fixed");

  const StagePath path = problem.path(x);
  const Weighted w = weighted_partials(problem, path, z);
  const auto& scale = problem.scale();
  std::vector<TransversalityEntry> out;
  for (std::size_t i = 1; i <= n; ++i) {
    if (!problem.boundary()[i - 1].free_right()) continue;
    Complex sum = 0.0;
    for (std::size_t k = i; k <= n; ++k) {
      const SampledSignal term = higher_order_box(w.lp[k], k - i, scale);
      const double sign = (k - i) % 2 == 0 ? 1.0 : -1.0;
      sum += sign * term.at_b();
    }
    out.push_back({i, sum});
  }
  return out;
}

}  // namespace herglotz
