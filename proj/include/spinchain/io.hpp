#pragma once

#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "spinchain/trace.hpp"

namespace spinchain::io {

/// Columnar table. `meta` is written as '#'-prefixed comment lines.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[column][row]
  std::vector<std::string> meta;

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
  /// Column by name; throws ParseError when absent.
  const std::vector<double>& column(const std::string& name) const;
};

/// Numbers use the shortest representation that parses back exactly.
void write_csv(std::ostream& os, const Table& t);
void write_csv(const std::filesystem::path& path, const Table& t);
/// Throws ParseError naming the offending line.
Table read_csv(std::istream& is);
Table read_csv(const std::filesystem::path& path);

Table to_table(const SignalTrace& trace);
Table to_table(const Spectrum& spectrum);
/// First column as x, the named (or second) column as y.
SignalTrace trace_from_table(const Table& t, const std::string& y_column = "");

/// Pretty-printed JSON with "schema_version": 1 added at the top level.
void write_json(const std::filesystem::path& path, nlohmann::json j);
nlohmann::json read_json(const std::filesystem::path& path);

/// "30us", "1.5e-5", "2 ms", "0.3 s" -> seconds. Throws ConfigError.
double parse_time(const std::string& s);
/// "start:stop:step" with optional unit suffixes on each field.
std::vector<double> parse_grid(const std::string& s);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace spinchain::io
