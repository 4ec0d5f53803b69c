#include "mixreg/table.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "mixreg/error.hpp"

namespace mixreg {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) fail(ErrorCode::io, "cannot format double");
  return std::string(buf, end);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return csv_escape(v); }
  };
  return std::visit(Visitor{}, cell);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) {
    fail(ErrorCode::size, "table row has " + std::to_string(row.size()) + " cells, header has " +
                              std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(header_[i]);
  }
  out.push_back('\n');
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += format_cell(row[i]);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace mixreg
