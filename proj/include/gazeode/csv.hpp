#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gazeode/errors.hpp"

namespace gazeode::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based line number of each row in the source file, for diagnostics
  std::vector<std::size_t> lines;
};

/// Reads a comma-separated file. Blank lines are skipped, a trailing '\r' is
/// stripped. A zero-byte file yields an empty header. Throws Io on open failure.
Table read(const std::filesystem::path& path);

/// Typed access to one row of a Table with file:line diagnostics.
class RowReader {
 public:
  RowReader(const std::filesystem::path& path, const Table& table, std::size_t row);

  double real(std::size_t col) const;
  std::optional<double> optional_real(std::size_t col) const;  // empty field -> nullopt
  int integer(std::size_t col) const;
  int binary(std::size_t col) const;  // 0 or 1, else InvalidGoodness

  [[noreturn]] void fail(const std::string& msg,
                         ErrorKind kind = ErrorKind::MalformedRow) const;

 private:
  const std::filesystem::path& path_;
  const std::vector<std::string>& fields_;
  std::size_t line_;
};

/// Throws MalformedRow unless `table.header` equals `expected` exactly.
void expect_header(const Table& table, const std::vector<std::string>& expected,
                   const std::filesystem::path& path);

/// Strict parse: the whole field must be a finite double.
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
/// printf-style %.<digits>g.
std::string format_double(double value, int significant_digits);

/// Writes the file in one piece; throws Io on failure.
void write_text(const std::filesystem::path& path, const std::string& content);

std::string join(const std::vector<std::string>& fields);

}  // namespace gazeode::csv
