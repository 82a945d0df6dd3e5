#include "zoh/cli/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "zoh/errors.hpp"

namespace zoh::cli {

namespace {

void append_names(std::vector<std::string>& cols, const char* stem, int n) {
  for (int i = 1; i <= n; ++i) cols.push_back(stem + std::to_string(i));
}

std::vector<std::string> header_columns(int m, int l) {
  std::vector<std::string> cols{"t"};
  append_names(cols, "y", m);
  append_names(cols, "ydot", m);
  append_names(cols, "eta", l);
  append_names(cols, "e", m);
  cols.push_back("norm_e1");
  cols.push_back("norm_e2");
  append_names(cols, "u", m);
  cols.push_back("is_sample");
  append_names(cols, "E", m);
  return cols;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int count_prefix(const std::vector<std::string>& cols, const std::string& stem) {
  int n = 0;
  for (const auto& c : cols) {
    if (c.size() > stem.size() && c.compare(0, stem.size(), stem) == 0 &&
        std::isdigit(static_cast<unsigned char>(c[stem.size()]))) {
      ++n;
    }
  }
  return n;
}

double parse_cell(const std::string& s, std::size_t line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("trace line " + std::to_string(line) + ": cannot parse '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_header(int m, int l) {
  const auto cols = header_columns(m, l);
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  return out;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << trace_header(trace.output_dim, trace.internal_dim) << '\n';
  std::string line;
  auto put = [&](double v) {
    line += ',';
    line += format_double(v);
  };
  for (const auto& r : trace.rows) {
    line = format_double(r.t);
    for (const auto* v : {&r.y, &r.ydot, &r.eta, &r.e}) {
      for (Eigen::Index i = 0; i < v->size(); ++i) put((*v)[i]);
    }
    put(r.norm_e1);
    put(r.norm_e2);
    for (Eigen::Index i = 0; i < r.u.size(); ++i) put(r.u[i]);
    line += r.is_sample ? ",1" : ",0";
    for (int i = 0; i < trace.output_dim; ++i) {
      line += ',';
      if (r.is_sample && r.E.size() == trace.output_dim) line += format_double(r.E[i]);
    }
    os << line << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw ConfigError("output.trace: cannot write '" + path.string() + "'");
  write_trace_csv(out, trace);
}

Trace read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("trace: empty file");
  const auto cols = split(line);
  const int m = count_prefix(cols, "ydot");
  const int l = count_prefix(cols, "eta");
  if (m == 0 || cols != header_columns(m, l)) {
    throw ConfigError("trace line 1: header does not match the trace schema");
  }
  Trace trace;
  trace.output_dim = m;
  trace.internal_dim = l;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != cols.size()) {
      throw ConfigError("trace line " + std::to_string(lineno) + ": expected " +
                        std::to_string(cols.size()) + " fields");
    }
    std::size_t c = 0;
    auto next = [&] { return parse_cell(cells[c++], lineno); };
    auto vec = [&](int n) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v[i] = next();
      return v;
    };
    TraceRow r;
    r.t = next();
    r.y = vec(m);
    r.ydot = vec(m);
    r.eta = vec(l);
    r.e = vec(m);
    r.norm_e1 = next();
    r.norm_e2 = next();
    r.u = vec(m);
    const std::string& flag = cells[c++];
    if (flag != "0" && flag != "1") {
      throw ConfigError("trace line " + std::to_string(lineno) + ": is_sample must be 0 or 1");
    }
    r.is_sample = flag == "1";
    if (r.is_sample) {
      const bool blank = std::all_of(cells.begin() + static_cast<long>(c), cells.end(),
                                     [](const std::string& x) { return x.empty(); });
      if (!blank) r.E = vec(m);
      SampleRecord s;
      s.t = r.t;
      s.signal = r.E;
      s.row = trace.rows.size();
      trace.samples.push_back(s);
    }
    trace.rows.push_back(std::move(r));
  }
  if (!trace.rows.empty()) trace.horizon = trace.rows.back().t;
  return trace;
}

Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("trace: cannot open '" + path.string() + "'");
  return read_trace_csv(in);
}

void write_table_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("output: cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

}  // namespace zoh::cli
