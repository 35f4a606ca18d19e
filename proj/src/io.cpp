#include "spinchain/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spinchain/errors.hpp"

namespace spinchain::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  if (s == "nan" || s == "NaN") {
    v = std::nan("");
    return true;
  }
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

const std::vector<double>& Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return data[i];
  throw ParseError("no column named '" + name + "'", 0);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const Table& t) {
  for (const auto& m : t.meta) {
    std::istringstream lines(m);
    std::string line;
    while (std::getline(lines, line)) os << "# " << line << '\n';
  }
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& col : t.data)
    if (col.size() != t.rows()) throw DimensionError("table columns differ in length");
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.data.size(); ++c) os << (c ? "," : "") << format_number(t.data[c][r]);
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Table& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  write_csv(os, t);
}

Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto content = trim(line);
    if (content.empty()) continue;
    if (content[0] == '#') {
      t.meta.push_back(trim(content.substr(1)));
      continue;
    }
    const auto fields = split(content, ',');
    if (!have_header) {
      double probe;
      for (const auto& f : fields) {
        if (f.empty()) throw ParseError("empty column name in header", lineno);
        if (parse_double(f, probe)) throw ParseError("expected a header row, found numbers", lineno);
      }
      t.columns = fields;
      t.data.assign(fields.size(), {});
      have_header = true;
      continue;
    }
    if (fields.size() != t.columns.size())
      throw ParseError("expected " + std::to_string(t.columns.size()) + " fields, found " + std::to_string(fields.size()),
                       lineno);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v;
      if (!parse_double(fields[c], v)) throw ParseError("cannot parse '" + fields[c] + "' as a number", lineno);
      t.data[c].push_back(v);
    }
  }
  if (!have_header) throw ParseError("no header row", lineno);
  return t;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  return read_csv(is);
}

Table to_table(const SignalTrace& trace) {
  Table t;
  t.columns = {"t_s", "signal"};
  t.data = {trace.times, trace.values};
  if (trace.is_complex()) {
    t.columns.push_back("signal_imag");
    t.data.push_back(trace.imag);
  }
  if (!trace.meta.empty()) t.meta.push_back(trace.meta.dump());
  return t;
}

Table to_table(const Spectrum& spectrum) {
  Table t;
  t.columns = {"freq_hz", "amplitude"};
  t.data = {spectrum.freq_hz, spectrum.amplitude};
  if (!spectrum.meta.empty()) t.meta.push_back(spectrum.meta.dump());
  return t;
}

SignalTrace trace_from_table(const Table& t, const std::string& y_column) {
  if (t.columns.size() < 2) throw ParseError("need at least two columns", 0);
  SignalTrace tr;
  tr.times = t.data[0];
  tr.values = y_column.empty() ? t.data[1] : t.column(y_column);
  return tr;
}

void write_json(const std::filesystem::path& path, nlohmann::json j) {
  nlohmann::json out{{"schema_version", 1}};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "schema_version") out[it.key()] = it.value();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << out.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(is, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

double parse_time(const std::string& raw) {
  const auto s = trim(raw);
  std::size_t split_at = s.size();
  while (split_at > 0 && std::isalpha(static_cast<unsigned char>(s[split_at - 1]))) --split_at;
  // keep an exponent like "1e" attached to the number
  const auto number = trim(s.substr(0, split_at));
  std::string unit = s.substr(split_at);
  for (auto& c : unit) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  double v;
  if (!parse_double(number, v) || !std::isfinite(v)) throw ConfigError("cannot parse time '" + raw + "'");
  if (unit.empty() || unit == "s") return v;
  if (unit == "ms") return v * 1e-3;
  if (unit == "us") return v * 1e-6;
  if (unit == "ns") return v * 1e-9;
  throw ConfigError("unknown time unit '" + unit + "' in '" + raw + "' (use s, ms, us or ns)");
}

std::vector<double> parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw ConfigError("grid must be start:stop:step, got '" + s + "'");
  const double start = parse_time(parts[0]), stop = parse_time(parts[1]), step = parse_time(parts[2]);
  if (!(step > 0.0)) throw ConfigError("grid step must be positive");
  if (stop < start) throw ConfigError("grid stop is below start");
  return make_grid(start, stop, step);
}

}  // namespace spinchain::io
