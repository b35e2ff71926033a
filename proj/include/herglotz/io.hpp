#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "herglotz/fields.hpp"
#include "herglotz/herglotz.hpp"
#include "herglotz/solver.hpp"

namespace herglotz::io {

using Json = nlohmann::ordered_json;

/// %.17g, so every double round-trips.
std::string format_double(double v);

/// Compact JSON with doubles at 17 significant digits and keys in insertion
/// order. Non-finite numbers are written as null.
std::string dump(const Json& j, int indent = 2);

/// Header `t,re,im`, one row per node (margins included).
void write_signal_csv(std::ostream& out, const SampledSignal& f);

/// Header `t,x1,..,xn`, real parts only.
void write_trajectory_csv(std::ostream& out, const Trajectory& x);

/// Reads `t,c1,..` rows (header required). The first column must step
/// uniformly by `step`; rows before a and after b become margins. Throws
/// IoError / GridMismatch.
Trajectory read_trajectory_csv(std::istream& in, double a, double b, double step);

/// Reads `t,re[,im]` rows into a signal on the grid they span around [a, b].
SampledSignal read_signal_csv(std::istream& in, double a, double b, double step);

/// {a, b, step, margin_nodes}; margin_lo / margin_hi are added when the grid
/// is asymmetric.
Json grid_json(const UniformGrid& g);

Json report_json(const ELReport& r);
Json report_json(const FieldReport& r);

/// `iter,objective_re,objective_im,grad_norm,step`
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

/// `h,value,slope`, the fitted slope repeated on every row.
void write_study_csv(std::ostream& out, const std::vector<double>& h,
                     const std::vector<double>& value, double slope);

/// Time slices of a field, one CSV per time node: header `s1[,s2],re,im`.
/// Returns the file names written, in time order.
std::vector<std::string> write_field_snapshots(const std::string& dir, const std::string& stem,
                                               const FieldSamples& u);

/// Writes `text` to dir/name, creating dir. Throws IoError.
void write_file(const std::string& dir, const std::string& name, const std::string& text);

}  // namespace herglotz::io
