#include "herglotz/herglotz.hpp"

#include <cmath>
#include <string>

#include "herglotz/errors.hpp"
#include "herglotz/scale_ops.hpp"

namespace herglotz {

Trajectory::Trajectory(std::vector<SampledSignal> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorKind::InvalidArgument, "trajectory has no components");
  for (const auto& c : components_) {
    if (!c.is_real()) throw Error(ErrorKind::InvalidArgument, "trajectory components must be real");
    if (!(c.grid() == components_.front().grid())) {
      throw Error(ErrorKind::GridMismatch, "trajectory components must share one grid");
    }
  }
}

Trajectory Trajectory::sample(const UniformGrid& grid,
                              const std::vector<std::function<double(double)>>& fns) {
  std::vector<SampledSignal> c;
  for (const auto& f : fns) c.push_back(SampledSignal::sample(grid, f));
  return Trajectory(std::move(c));
}

HerglotzProblem::HerglotzProblem(double a, double b, Complex z_a, std::vector<Boundary> boundary,
                                 Lagrangian lagrangian, ScaleParams scale)
    : a_(a), b_(b), z_a_(z_a), boundary_(std::move(boundary)),
      lagrangian_(std::move(lagrangian)), scale_(std::move(scale)) {
  if (!(a_ < b_)) throw Error(ErrorKind::InvalidArgument, "interval needs a < b");
  if (boundary_.empty()) throw Error(ErrorKind::InvalidArgument, "dimension must be at least 1");
  for (const auto& bc : boundary_) {
    if (!std::isfinite(bc.left) || (bc.right && !std::isfinite(*bc.right))) {
      throw Error(ErrorKind::InvalidArgument, "boundary values must be finite");
    }
  }
  if (lagrangian_.slots() != first_order_slots(boundary_.size())) {
    throw Error(ErrorKind::InvalidArgument,
                "Lagrangian arguments do not match dimension " + std::to_string(boundary_.size()));
  }
  (void)grid(0);  // validates that the step divides b - a
}

bool HerglotzProblem::has_free_boundary() const {
  for (const auto& bc : boundary_) {
    if (bc.free_right()) return true;
  }
  return false;
}

UniformGrid HerglotzProblem::grid(std::size_t margin_nodes) const {
  return UniformGrid(a_, b_, scale_.step(), margin_nodes);
}

Trajectory HerglotzProblem::enforce(const Trajectory& x) const {
  if (x.dimension() != dimension()) {
    throw Error(ErrorKind::GridMismatch, "trajectory has " + std::to_string(x.dimension()) +
                                             " components, problem has " +
                                             std::to_string(dimension()));
  }
  const auto& g = x.grid();
  if (!g.compatible(grid(0))) {
    throw Error(ErrorKind::GridMismatch, "trajectory grid does not match the problem interval/step");
  }
  std::vector<SampledSignal> out;
  for (std::size_t i = 0; i < dimension(); ++i) {
    std::vector<Complex> v(x[i].values().begin(), x[i].values().end());
    v[g.index_of_a()] = boundary_[i].left;
    if (boundary_[i].right) v[g.index_of_b()] = *boundary_[i].right;
    out.emplace_back(g, std::move(v), SignalKind::Real);
  }
  return Trajectory(std::move(out));
}

StagePath HerglotzProblem::path(const Trajectory& raw) const {
  const Trajectory x = enforce(raw);
  const std::size_t hn = scale_.h_nodes();
  if (x.grid().margin_lo() < hn || x.grid().margin_hi() < hn) {
    throw Error(ErrorKind::InsufficientMargin,
                "box x on [a, b] needs " + std::to_string(hn) + " margin nodes, trajectory has " +
                    std::to_string(x.grid().margin_nodes()));
  }
  std::vector<SampledSignal> channels(dimension() * 2, x[0]);
  for (std::size_t i = 0; i < dimension(); ++i) {
    channels[dimension() + i] = box_h_derivative(x[i], scale_);
  }
  UniformGrid g = channels[dimension()].grid();
  for (std::size_t i = 0; i < dimension(); ++i) {
    channels[i] = x[i].restrict_margins(g.margin_lo(), g.margin_hi());
  }
  return StagePath(std::move(g), std::move(channels));
}

void ELReport::certify(double tol) {
  tolerance = tol;
  certified = true;
  for (double s : sup_norms) certified = certified && s <= tol;
  for (const auto& t : transversality) certified = certified && std::abs(t.value) <= tol;
}

ZSolution integrate_z(const HerglotzProblem& problem, const Trajectory& x) {
  const StagePath path = problem.path(x);
  SampledSignal ext = integrate_along(path, problem.lagrangian(), problem.z_a());
  SampledSignal z = ext.restrict_margins(0, 0);
  double im = 0.0;
  for (const auto& v : z.values()) im = std::max(im, std::abs(v.imag()));
  const Complex terminal = z.at_b();
  return {std::move(z), terminal, im, std::move(ext)};
}

SampledSignal lambda_weight(const HerglotzProblem& problem, const Trajectory& x,
                            const ZSolution& z) {
  const StagePath path = problem.path(x);
  const auto& l = problem.lagrangian();
  return exp_neg_cumulative(partial_along(path, l, l.slots().size() - 1, z.extended));
}

namespace {

void require_residual_margin(const StagePath& path, std::size_t hn, const char* what) {
  if (path.grid().margin_lo() < hn || path.grid().margin_hi() < hn) {
    throw Error(ErrorKind::InsufficientMargin,
                std::string(what) + " needs trajectory margins of at least " +
                    std::to_string(2 * hn) + " nodes (2 h_nodes)");
  }
}

}  // namespace

ELReport el_residual(const HerglotzProblem& problem, const Trajectory& x, const ZSolution& z,
                     double tolerance) {
  const StagePath path = problem.path(x);
  const auto& scale = problem.scale();
  require_residual_margin(path, scale.h_nodes(), "first-order residual");
  const auto& l = problem.lagrangian();
  const std::size_t n = problem.dimension();
  const std::size_t z_slot = 2 * n + 1;

  const SampledSignal dz = partial_along(path, l, z_slot, z.extended);
  const SampledSignal lambda = exp_neg_cumulative(dz);
  const auto& g = path.grid();

  ELReport report{.residual = {},
                  .sup_norms = {},
                  .lambda = lambda.restrict_margins(0, 0),
                  .transversality = {},
                  .barrow_defect = {},
                  .h = scale.h(),
                  .step = scale.step(),
                  .im_z_max = z.im_diagnostic};
  const bool barrow = g.cells() % scale.h_nodes() == 0;
  for (std::size_t i = 0; i < n; ++i) {
    const SampledSignal p = partial_along(path, l, 1 + n + i, z.extended);
    const SampledSignal dx = partial_along(path, l, 1 + i, z.extended);
    const SampledSignal bp = box_h_derivative(p, scale);
    const std::size_t off_bp = bp.grid().index_of_a();
    const std::size_t off = g.index_of_a();
    std::vector<Complex> r(g.cells() + 1);
    for (std::size_t k = 0; k < r.size(); ++k) {
      r[k] = bp[off_bp + k] - dx[off + k] - dz[off + k] * p[off + k];
    }
    SampledSignal res(g.with_margins(0, 0), std::move(r), SignalKind::Complex);
    report.sup_norms.push_back(res.sup_norm());
    report.residual.push_back(std::move(res));
    if (barrow) report.barrow_defect.push_back(box_integral(lambda * p, scale).defect);
    if (problem.boundary()[i].free_right()) report.transversality.push_back({i + 1, p.at_b()});
  }
  report.certify(tolerance);
  return report;
}

std::vector<TransversalityEntry> transversality_residual(const HerglotzProblem& problem,
                                                         const Trajectory& x,
                                                         const ZSolution& z) {
  if (!problem.has_free_boundary()) {
    throw Error(ErrorKind::NoFreeBoundary, "every coordinate has a fixed right end");
  }
  const StagePath path = problem.path(x);
  const auto& l = problem.lagrangian();
  const std::size_t n = problem.dimension();
  std::vector<Complex> buf(path.slot_count());
  const std::size_t kb = path.grid().index_of_b();
  path.args(kb, false, z.extended[kb], buf);
  std::vector<TransversalityEntry> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (problem.boundary()[i].free_right()) out.push_back({i + 1, l.partial(1 + n + i, buf)});
  }
  return out;
}

double classical_reduction_check(const HerglotzProblem& problem, const Trajectory& x) {
  const auto& l = problem.lagrangian();
  if (!l.partial_is_zero(l.slots().size() - 1)) {
    throw Error(ErrorKind::NotZFree, "dL/dz is not identically zero");
  }
  const ZSolution z = integrate_z(problem, x);
  const StagePath path = problem.path(x);
  const SampledSignal lv = value_along(path, l, z.extended);
  const auto& g = path.grid();
  Complex integral = 0.5 * (lv[g.index_of_a()] + lv[g.index_of_b()]);
  for (std::size_t k = g.index_of_a() + 1; k < g.index_of_b(); ++k) integral += lv[k];
  integral *= g.step();
  return std::abs(z.terminal - (integral + problem.z_a()));
}

}  // namespace herglotz
