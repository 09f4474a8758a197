#include "mrchialvo/io/table.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mrchialvo/types.hpp"

namespace mrchialvo::io {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void DataTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw InvalidArgument("table row width does not match the header");
  rows_.push_back(std::move(row));
}

void DataTable::write(std::ostream& os) const {
  os << "# schema:";
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    os << (c ? "; " : " ") << columns_[c].name;
    if (!columns_[c].meaning.empty()) os << " [" << columns_[c].meaning << "]";
  }
  os << '\n';
  for (std::size_t c = 0; c < columns_.size(); ++c) os << (c ? "," : "") << columns_[c].name;
  os << '\n';
  for (const auto& r : rows_) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) os << ',';
      std::visit(
          [&os](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              os << format_double(v);
            } else {
              os << v;
            }
          },
          r[c]);
    }
    os << '\n';
  }
}

void DataTable::write(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open " + path + " for writing");
  write(os);
  if (!os) throw InvalidArgument("write failed: " + path);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

ParsedTable read_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open " + path);
  ParsedTable t;
  std::string line;
  if (!std::getline(is, line) || line.empty() || line[0] != '#') {
    throw InvalidArgument(path + ": missing schema line");
  }
  t.schema = line;
  if (!std::getline(is, line)) throw InvalidArgument(path + ": missing header");
  t.header = split(line);
  while (std::getline(is, line)) {
    auto r = split(line);
    if (r.size() != t.header.size()) throw InvalidArgument(path + ": ragged row");
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace mrchialvo::io
