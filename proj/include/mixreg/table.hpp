#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mixreg {

/// Shortest decimal that round-trips to the same double. Locale independent.
/// Non-finite values print as nan, inf, -inf.
std::string format_double(double value);

/// Empty cell, number, integer count, boolean, or text.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

/// Header row plus data rows, rendered as RFC 4180 CSV with LF line endings.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  /// Row width must match the header.
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  std::string to_csv() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

std::string csv_escape(std::string_view field);
std::string format_cell(const Cell& cell);

}  // namespace mixreg
