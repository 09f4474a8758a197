#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mrchialvo::io {

/// Plain-text run record: one `key = value` per line, nested keys joined by
/// dots, in insertion order.
class Manifest {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value);

  /// Value for key, or empty string.
  std::string get(const std::string& key) const;
  bool contains(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  /// Entries whose key starts with prefix + "."; the prefix is stripped.
  std::vector<std::pair<std::string, std::string>> section(const std::string& prefix) const;

  std::string str() const;
  void write(const std::string& path) const;
  static Manifest read(const std::string& path);
  static Manifest parse(const std::string& text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace mrchialvo::io
