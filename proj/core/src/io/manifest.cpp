#include "mrchialvo/io/manifest.hpp"

#include <fstream>
#include <sstream>

#include "mrchialvo/io/table.hpp"
#include "mrchialvo/types.hpp"

namespace mrchialvo::io {

void Manifest::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void Manifest::set(std::string key, double value) { set(std::move(key), format_double(value)); }

std::string Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return {};
}

bool Manifest::contains(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.first == key) return true;
  }
  return false;
}

std::vector<std::pair<std::string, std::string>> Manifest::section(const std::string& prefix) const {
  std::vector<std::pair<std::string, std::string>> out;
  const std::string p = prefix + ".";
  for (const auto& [k, v] : entries_) {
    if (k.rfind(p, 0) == 0) out.emplace_back(k.substr(p.size()), v);
  }
  return out;
}

std::string Manifest::str() const {
  std::string s;
  for (const auto& [k, v] : entries_) s += k + " = " + v + "\n";
  return s;
}

void Manifest::write(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open " + path + " for writing");
  os << str();
}

Manifest Manifest::parse(const std::string& text) {
  Manifest m;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw InvalidArgument("malformed manifest line: " + line);
    m.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return m;
}

Manifest Manifest::read(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

}  // namespace mrchialvo::io
