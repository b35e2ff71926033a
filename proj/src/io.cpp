#include "herglotz/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "herglotz/errors.hpp"

namespace herglotz::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void dump_string(std::string& out, const std::string& s) {
  out += Json(s).dump();
}

void dump_value(std::string& out, const Json& j, int indent, int depth) {
  const auto pad = [&](int d) {
    if (indent > 0) {
      out += '\n';
      out.append(static_cast<std::size_t>(indent * d), ' ');
    }
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        dump_string(out, key);
        out += indent > 0 ? ": " : ":";
        dump_value(out, value, indent, depth + 1);
      }
      pad(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        dump_value(out, value, indent, depth + 1);
      }
      pad(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::vector<std::vector<double>> read_rows(std::istream& in, std::size_t min_columns,
                                           std::size_t& columns) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::IoError, "empty CSV");
  columns = 1 + static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  if (columns < min_columns) {
    throw Error(ErrorKind::IoError, "CSV header needs at least " + std::to_string(min_columns) +
                                        " columns: " + line);
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": not a number: " + cell);
      }
    }
    if (row.size() != columns) {
      throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": expected " +
                                          std::to_string(columns) + " fields");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Grid spanned by the t column around [a, b].
UniformGrid grid_from_times(const std::vector<std::vector<double>>& rows, double a, double b,
                            double step) {
  if (rows.size() < 2) throw Error(ErrorKind::IoError, "CSV has fewer than two rows");
  const double lo = (a - rows.front()[0]) / step;
  const double hi = (rows.back()[0] - b) / step;
  if (lo < -1e-6 || hi < -1e-6 || std::abs(lo - std::round(lo)) > 1e-6 ||
      std::abs(hi - std::round(hi)) > 1e-6) {
    throw Error(ErrorKind::GridMismatch, "CSV times do not cover [a, b] on the step grid");
  }
  UniformGrid g(a, b, step, static_cast<std::size_t>(std::lround(lo)),
                static_cast<std::size_t>(std::lround(hi)));
  if (g.size() != rows.size()) throw Error(ErrorKind::GridMismatch, "CSV row count does not match the grid");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (std::abs(rows[k][0] - g.node(k)) > 1e-9 * std::max(1.0, std::abs(g.node(k)))) {
      throw Error(ErrorKind::GridMismatch, "CSV time " + format_double(rows[k][0]) +
                                               " is off the uniform grid");
    }
  }
  return g;
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  dump_value(out, j, indent, 0);
  return out;
}

void write_signal_csv(std::ostream& out, const SampledSignal& f) {
  out << "t,re,im\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    out << format_double(f.grid().node(k)) << ',' << format_double(f[k].real()) << ','
        << format_double(f[k].imag()) << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& x) {
  out << 't';
  for (std::size_t i = 0; i < x.dimension(); ++i) out << ",x" << i + 1;
  out << '\n';
  for (std::size_t k = 0; k < x.grid().size(); ++k) {
    out << format_double(x.grid().node(k));
    for (std::size_t i = 0; i < x.dimension(); ++i) out << ',' << format_double(x[i][k].real());
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in, double a, double b, double step) {
  std::size_t columns = 0;
  const auto rows = read_rows(in, 2, columns);
  const UniformGrid g = grid_from_times(rows, a, b, step);
  std::vector<SampledSignal> comps;
  for (std::size_t c = 1; c < columns; ++c) {
    std::vector<Complex> v(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) v[k] = rows[k][c];
    comps.emplace_back(g, std::move(v), SignalKind::Real);
  }
  return Trajectory(std::move(comps));
}

SampledSignal read_signal_csv(std::istream& in, double a, double b, double step) {
  std::size_t columns = 0;
  const auto rows = read_rows(in, 2, columns);
  if (columns > 3) throw Error(ErrorKind::IoError, "signal CSV has at most columns t,re,im");
  const UniformGrid g = grid_from_times(rows, a, b, step);
  std::vector<Complex> v(rows.size());
  bool real = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    v[k] = Complex(rows[k][1], columns == 3 ? rows[k][2] : 0.0);
    real = real && v[k].imag() == 0.0;
  }
  return SampledSignal(g, std::move(v), real ? SignalKind::Real : SignalKind::Complex);
}

Json grid_json(const UniformGrid& g) {
  Json j;
  j["a"] = g.a();
  j["b"] = g.b();
  j["step"] = g.step();
  j["margin_nodes"] = g.margin_nodes();
  if (!g.symmetric()) {
    j["margin_lo"] = g.margin_lo();
    j["margin_hi"] = g.margin_hi();
  }
  return j;
}

Json report_json(const ELReport& r) {
  Json j;
  j["sup_norms"] = r.sup_norms;
  Json trans = Json::array();
  for (const auto& e : r.transversality) {
    trans.push_back(Json{{"index", e.index}, {"value", complex_json(e.value)}});
  }
  j["transversality"] = trans;
  j["certified"] = r.certified;
  j["tolerance"] = r.tolerance;
  j["h"] = r.h;
  j["step"] = r.step;
  j["im_z_max"] = r.im_z_max;
  j["barrow_defect"] = r.barrow_defect;
  return j;
}

Json report_json(const FieldReport& r) {
  Json j;
  j["sup_norms"] = Json::array({r.sup_norm});
  j["transversality"] = Json::array();
  j["certified"] = r.certified;
  j["tolerance"] = r.tolerance;
  j["h"] = r.h;
  j["step"] = r.step;
  j["im_z_max"] = r.im_z_max;
  return j;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iter,objective_re,objective_im,grad_norm,step\n";
  for (const auto& row : trace) {
    out << row.iter << ',' << format_double(row.objective.real()) << ','
        << format_double(row.objective.imag()) << ',' << format_double(row.grad_norm) << ','
        << format_double(row.step) << '\n';
  }
}

void write_study_csv(std::ostream& out, const std::vector<double>& h,
                     const std::vector<double>& value, double slope) {
  out << "h,value,slope\n";
  for (std::size_t k = 0; k < h.size(); ++k) {
    out << format_double(h[k]) << ',' << format_double(value[k]) << ',' << format_double(slope)
        << '\n';
  }
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

std::vector<std::string> write_field_snapshots(const std::string& dir, const std::string& stem,
                                               const FieldSamples& u) {
  const auto& axes = u.axes();
  const std::size_t slice = u.size() / axes[0].size();
  std::vector<std::string> names;
  std::vector<std::size_t> index(axes.size());
  for (std::size_t k = 0; k < axes[0].size(); ++k) {
    std::ostringstream out;
    for (std::size_t d = 1; d < axes.size(); ++d) out << 's' << d << ',';
    out << "re,im\n";
    for (std::size_t s = 0; s < slice; ++s) {
      const std::size_t flat = k * slice + s;
      u.unflatten(flat, index);
      for (std::size_t d = 1; d < axes.size(); ++d) out << format_double(axes[d].node(index[d])) << ',';
      out << format_double(u[flat].real()) << ',' << format_double(u[flat].imag()) << '\n';
    }
    char name[64];
    std::snprintf(name, sizeof name, "%s_%05zu.csv", stem.c_str(), k);
    write_file(dir, name, out.str());
    names.emplace_back(name);
  }
  return names;
}

}  // namespace herglotz::io
