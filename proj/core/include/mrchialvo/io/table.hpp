#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace mrchialvo::io {

/// Shortest text that reads back to the identical double (17 significant
/// digits).
std::string format_double(double v);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Column {
  std::string name;
  std::string meaning;  ///< unit or short semantics, goes to the schema line
};

/// Rectangular table written as CSV: one `#` schema line, a header row, then
/// data rows. Label cells must not contain commas or newlines.
class DataTable {
 public:
  DataTable() = default;
  explicit DataTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

  const std::vector<Column>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<Cell>& row(std::size_t i) const { return rows_[i]; }

  /// Throws InvalidArgument if the row width differs from the column count.
  void add_row(std::vector<Cell> row);

  void write(std::ostream& os) const;
  void write(const std::string& path) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct ParsedTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads a CSV written by DataTable. Throws InvalidArgument on ragged rows or
/// a missing header.
ParsedTable read_table(const std::string& path);

}  // namespace mrchialvo::io
