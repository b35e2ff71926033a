#include "herglotz/fields.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "herglotz/errors.hpp"
#include "herglotz/ode.hpp"
#include "herglotz/parallel.hpp"
#include "herglotz/scale_ops.hpp"

namespace herglotz {

FieldProblem::FieldProblem(double a, double b, std::vector<std::pair<double, double>> space,
                           Complex z_a, Lagrangian lagrangian, ScaleParams scale)
    : a_(a), b_(b), space_(std::move(space)), z_a_(z_a), lagrangian_(std::move(lagrangian)),
      scale_(std::move(scale)) {
  if (!(a_ < b_)) throw Error(ErrorKind::InvalidArgument, "time interval needs a < b");
  if (space_.empty() || space_.size() > 2) {
    throw Error(ErrorKind::InvalidArgument, "fields support one or two space axes");
  }
  for (const auto& [lo, hi] : space_) {
    if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "space intervals need a_i < b_i");
  }
  if (lagrangian_.slots() != field_slots(space_.size())) {
    throw Error(ErrorKind::InvalidArgument, "Lagrangian arguments do not match " +
                                                std::to_string(space_.size()) + " space axes");
  }
  (void)axes(0);
}

std::vector<UniformGrid> FieldProblem::axes(std::size_t margin_nodes) const {
  std::vector<UniformGrid> out{UniformGrid(a_, b_, scale_.step(), margin_nodes)};
  for (const auto& [lo, hi] : space_) out.emplace_back(lo, hi, scale_.step(), margin_nodes);
  return out;
}

void FieldReport::certify(double tol) {
  tolerance = tol;
  certified = sup_norm <= tol;
}

namespace {

// u, box_t u and box_si u restricted to the region where all of them exist.
struct FieldPath {
  std::vector<UniformGrid> axes;
  std::vector<FieldSamples> channels;  // u, ut, ux1..uxn
  std::vector<std::size_t> points;     // flat index (time index 0) of each node of Omega
  std::vector<double> weights;         // tensor trapezoid weights, including steps
  std::size_t slots = 0;               // t, s1..sn, u, ut, ux..., z

  std::size_t nt() const { return axes[0].size(); }
  std::size_t time_stride() const { return channels[0].stride(0); }
};

FieldPath build_path(const FieldProblem& problem, const FieldSamples& u) {
  const std::size_t hn = problem.scale().h_nodes();
  const std::size_t rank = 1 + problem.space_dims();
  if (u.rank() != rank) {
    throw Error(ErrorKind::GridMismatch, "field has " + std::to_string(u.rank()) +
                                             " axes, problem needs " + std::to_string(rank));
  }
  const auto want = problem.axes(0);
  std::vector<std::size_t> lo(rank), hi(rank);
  for (std::size_t d = 0; d < rank; ++d) {
    const auto& g = u.axes()[d];
    if (!g.compatible(want[d])) {
      throw Error(ErrorKind::GridMismatch, "field axis " + std::to_string(d) +
                                               " does not match the problem grid");
    }
    if (g.margin_lo() < hn || g.margin_hi() < hn) {
      throw Error(ErrorKind::InsufficientMargin,
                  "partial box derivatives need " + std::to_string(hn) +
                      " margin nodes on every axis");
    }
    lo[d] = g.margin_lo() - hn;
    hi[d] = g.margin_hi() - hn;
  }
  FieldPath path;
  path.channels.push_back(u.restrict_margins(lo, hi));
  for (std::size_t d = 0; d < rank; ++d) {
    path.channels.push_back(partial_box(u, d, problem.scale()).restrict_margins(lo, hi));
  }
  path.axes = path.channels[0].axes();
  path.slots = 1 + problem.space_dims() + path.channels.size() + 1;

  // Nodes of Omega with tensor trapezoid weights.
  std::vector<std::size_t> idx(rank, 0);
  std::vector<std::size_t> count(rank, 1);
  for (std::size_t d = 1; d < rank; ++d) count[d] = path.axes[d].cells() + 1;
  std::size_t total = 1;
  for (std::size_t d = 1; d < rank; ++d) total *= count[d];
  std::vector<std::size_t> off(rank, 0);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rest = p;
    double w = 1.0;
    for (std::size_t d = rank; d-- > 1;) {
      off[d] = rest % count[d];
      rest /= count[d];
      const bool end = off[d] == 0 || off[d] + 1 == count[d];
      w *= (end ? 0.5 : 1.0) * path.axes[d].step();
      idx[d] = path.axes[d].index_of_a() + off[d];
    }
    idx[0] = 0;
    path.points.push_back(path.channels[0].flat_index(idx));
    path.weights.push_back(w);
  }
  return path;
}

// Lagrangian arguments (z slot left empty) at every node of Omega for one
// time node or half node.
std::vector<Complex> slice_args(const FieldProblem& problem, const FieldPath& path,
                                std::size_t k, bool mid) {
  const std::size_t n = problem.space_dims();
  const std::size_t nt = path.nt();
  const std::size_t stride = path.time_stride();
  std::vector<Complex> out(path.points.size() * path.slots);
  const double t = path.axes[0].node(k) + (mid ? 0.5 * path.axes[0].step() : 0.0);
  const std::size_t s = std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, nt >= 4 ? nt - 4 : 0);
  std::vector<std::size_t> idx(1 + n);
  for (std::size_t p = 0; p < path.points.size(); ++p) {
    Complex* a = &out[p * path.slots];
    a[0] = t;
    path.channels[0].unflatten(path.points[p], idx);
    for (std::size_t d = 1; d <= n; ++d) a[d] = path.axes[d].node(idx[d]);
    for (std::size_t c = 0; c < path.channels.size(); ++c) {
      const auto& ch = path.channels[c];
      if (!mid) {
        a[1 + n + c] = ch[path.points[p] + k * stride];
      } else if (nt < 4) {
        a[1 + n + c] = 0.5 * (ch[path.points[p] + k * stride] + ch[path.points[p] + (k + 1) * stride]);
      } else {
        Complex four[4];
        for (std::size_t j = 0; j < 4; ++j) four[j] = ch[path.points[p] + (s + j) * stride];
        a[1 + n + c] = midpoint_value(four, k - s);
      }
    }
  }
  return out;
}

// int_Omega of the value (slot = npos) or of one partial, at z.
Complex space_integral(const Lagrangian& l, const FieldPath& path, std::vector<Complex>& args,
                       Complex z, std::size_t slot) {
  Complex sum = 0.0;
  for (std::size_t p = 0; p < path.points.size(); ++p) {
    std::span<Complex> a(&args[p * path.slots], path.slots);
    a[path.slots - 1] = z;
    sum += path.weights[p] * (slot == static_cast<std::size_t>(-1) ? l.value(a) : l.partial(slot, a));
  }
  return sum;
}

std::vector<Complex> omega_dz(const FieldProblem& problem, const FieldPath& path,
                              const SampledSignal& zext) {
  const auto& l = problem.lagrangian();
  const std::size_t z_slot = path.slots - 1;
  std::vector<Complex> out(path.nt(), 0.0);
  if (l.partial_is_zero(z_slot)) return out;
  parallel_for(path.nt(), [&](std::size_t k) {
    auto args = slice_args(problem, path, k, false);
    out[k] = space_integral(l, path, args, zext[k], z_slot);
  });
  return out;
}

}  // namespace

ZSolution integrate_z_field(const FieldProblem& problem, const FieldSamples& u) {
  const FieldPath path = build_path(problem, u);
  const auto& l = problem.lagrangian();
  std::map<std::pair<std::size_t, bool>, std::vector<Complex>> cache;
  auto rhs = [&](std::size_t k, bool mid, Complex z) {
    auto key = std::make_pair(k, mid);
    auto it = cache.find(key);
    if (it == cache.end()) {
      if (cache.size() > 8) cache.clear();
      it = cache.emplace(key, slice_args(problem, path, k, mid)).first;
    }
    return space_integral(l, path, it->second, z, static_cast<std::size_t>(-1));
  };
  const UniformGrid& tg = path.axes[0];
  SampledSignal ext(tg, rk4_march(tg.size(), tg.index_of_a(), problem.z_a(), tg.step(), rhs),
                    SignalKind::Complex);
  SampledSignal z = ext.restrict_margins(0, 0);
  double im = 0.0;
  for (const auto& v : z.values()) im = std::max(im, std::abs(v.imag()));
  const Complex terminal = z.at_b();
  return {std::move(z), terminal, im, std::move(ext)};
}

SampledSignal lambda_field(const FieldProblem& problem, const FieldSamples& u,
                           const ZSolution& z) {
  const FieldPath path = build_path(problem, u);
  return exp_neg_cumulative(
      SampledSignal(path.axes[0], omega_dz(problem, path, z.extended), SignalKind::Complex));
}

FieldReport el_residual_field(const FieldProblem& problem, const FieldSamples& u,
                              const ZSolution& z, double tolerance) {
  const FieldPath path = build_path(problem, u);
  const std::size_t hn = problem.scale().h_nodes();
  const std::size_t n = problem.space_dims();
  const std::size_t rank = 1 + n;
  for (const auto& g : path.axes) {
    if (g.margin_lo() < hn || g.margin_hi() < hn) {
      throw Error(ErrorKind::InsufficientMargin,
                  "field residual needs margins of at least " + std::to_string(2 * hn) +
                      " nodes (2 h_nodes) on every axis");
    }
  }
  const auto& l = problem.lagrangian();
  const std::vector<Complex> dz = omega_dz(problem, path, z.extended);

  // Partials at every node of the path region: [0] dL/du, [1] dL/dut, [2..] dL/dux_i.
  const FieldSamples& base = path.channels[0];
  const std::size_t total = base.size();
  const std::size_t stride = path.time_stride();
  std::vector<std::vector<Complex>> part(rank + 1, std::vector<Complex>(total));
  parallel_for(path.nt(), [&](std::size_t k) {
    std::vector<Complex> a(path.slots);
    std::vector<std::size_t> idx(rank);
    for (std::size_t f = k * stride; f < (k + 1) * stride; ++f) {
      base.unflatten(f, idx);
      a[0] = path.axes[0].node(idx[0]);
      for (std::size_t d = 1; d <= n; ++d) a[d] = path.axes[d].node(idx[d]);
      for (std::size_t c = 0; c < path.channels.size(); ++c) a[1 + n + c] = path.channels[c][f];
      a[path.slots - 1] = z.extended[k];
      for (std::size_t c = 0; c <= rank; ++c) {
        const std::size_t slot = 1 + n + c;
        part[c][f] = l.partial_is_zero(slot) ? Complex(0.0) : l.partial(slot, a);
      }
    }
  });
  std::vector<FieldSamples> boxes;
  for (std::size_t d = 0; d < rank; ++d) {
    boxes.push_back(partial_box(FieldSamples(path.axes, part[1 + d]), d, problem.scale()));
  }

  std::vector<UniformGrid> out_axes;
  for (const auto& g : path.axes) out_axes.push_back(g.with_margins(0, 0));
  std::size_t out_total = 1;
  for (const auto& g : out_axes) out_total *= g.size();
  std::vector<Complex> r(out_total);
  std::vector<std::size_t> off(rank), idx(rank);
  FieldSamples shape(out_axes, std::vector<Complex>(out_total));
  for (std::size_t f = 0; f < out_total; ++f) {
    shape.unflatten(f, off);
    for (std::size_t d = 0; d < rank; ++d) idx[d] = path.axes[d].index_of_a() + off[d];
    const std::size_t src = base.flat_index(idx);
    Complex v = part[0][src] + part[1][src] * dz[idx[0]];
    for (std::size_t d = 0; d < rank; ++d) {
      for (std::size_t e = 0; e < rank; ++e) idx[e] = boxes[d].axes()[e].index_of_a() + off[e];
      v -= boxes[d][boxes[d].flat_index(idx)];
    }
    r[f] = v;
  }
  FieldSamples residual(out_axes, std::move(r));
  double sup = 0.0;
  for (const auto& v : residual.values()) sup = std::max(sup, std::abs(v));

  const SampledSignal lambda =
      exp_neg_cumulative(SampledSignal(path.axes[0], dz, SignalKind::Complex));
  FieldReport report{.residual = std::move(residual),
                     .sup_norm = sup,
                     .lambda = lambda.restrict_margins(0, 0),
                     .h = problem.scale().h(),
                     .step = problem.scale().step(),
                     .im_z_max = z.im_diagnostic};
  report.certify(tolerance);
  return report;
}

}  // namespace herglotz
