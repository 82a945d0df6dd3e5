#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "zoh/sim.hpp"

namespace zoh::cli {

/// Header row for the given dimensions:
/// t,y1..ym,ydot1..ydotm,eta1..etal,e1..em,norm_e1,norm_e2,u1..um,is_sample,E1..Em
std::string trace_header(int m, int l);

/// Writes every row with 17 significant digits. E is left empty on
/// non-sample rows; a NaN norm_e2 is written as "nan".
void write_trace_csv(std::ostream& os, const Trace& trace);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);

/// Reads a trace back. Dimensions come from the header; tau, horizon and
/// variant are not part of the file and must be filled in by the caller.
/// Throws ConfigError on malformed input, naming the line.
Trace read_trace_csv(std::istream& is);
Trace read_trace_csv(const std::filesystem::path& path);

/// Generic numeric table with a header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table_csv(const std::filesystem::path& path, const Table& table);

std::string format_double(double v);

}  // namespace zoh::cli
