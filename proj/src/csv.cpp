#include "gazeode/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gazeode/errors.hpp"

namespace gazeode::csv {

namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

Table read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open " + path.string());
  }
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header) {
      table.header = split(line);
      have_header = true;
      continue;
    }
    table.rows.push_back(split(line));
    table.lines.push_back(line_no);
  }
  if (in.bad()) {
    throw Error(ErrorKind::Io, "read failure on " + path.string());
  }
  return table;
}

RowReader::RowReader(const std::filesystem::path& path, const Table& table, std::size_t row)
    : path_(path), fields_(table.rows[row]), line_(table.lines[row]) {
  if (fields_.size() != table.header.size()) {
    fail("expected " + std::to_string(table.header.size()) + " fields, got " +
         std::to_string(fields_.size()));
  }
}

double RowReader::real(std::size_t col) const {
  const auto v = parse_double(fields_[col]);
  if (!v) fail("non-numeric field '" + fields_[col] + "'");
  return *v;
}

std::optional<double> RowReader::optional_real(std::size_t col) const {
  if (fields_[col].empty()) return std::nullopt;
  return real(col);
}

int RowReader::integer(std::size_t col) const {
  const auto v = parse_int(fields_[col]);
  if (!v) fail("non-integer field '" + fields_[col] + "'");
  return static_cast<int>(*v);
}

int RowReader::binary(std::size_t col) const {
  const int v = integer(col);
  if (v != 0 && v != 1) {
    fail("goodness must be 0 or 1, got " + std::to_string(v), ErrorKind::InvalidGoodness);
  }
  return v;
}

void RowReader::fail(const std::string& msg, ErrorKind kind) const {
  throw Error(kind, path_.string() + ":" + std::to_string(line_) + ": " + msg);
}

void expect_header(const Table& table, const std::vector<std::string>& expected,
                   const std::filesystem::path& path) {
  if (table.header != expected) {
    throw Error(ErrorKind::MalformedRow,
                path.string() + ": expected header '" + join(expected) + "', got '" +
                    join(table.header) + "'");
  }
}

std::optional<double> parse_double(std::string_view field) {
  if (field.empty()) return std::nullopt;
  // from_chars rejects a leading '+', which we never write
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<long long> parse_int(std::string_view field) {
  if (field.empty()) return std::nullopt;
  long long value = 0;
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    throw Error(ErrorKind::NonFinite, "cannot format value");
  }
  std::string out(buf, ptr);
  if (out == "-0") out = "0";
  return out;
}

std::string format_double(double value, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
  std::string out(buf);
  if (out == "-0") out = "0";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::Io, "cannot write " + path.string());
  }
  out << content;
  out.flush();
  if (!out) {
    throw Error(ErrorKind::Io, "write failure on " + path.string());
  }
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

}  // namespace gazeode::csv
