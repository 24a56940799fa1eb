#pragma once

#include "ltrb/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ltrb {

/// Line-oriented `section.key = value` text with `#` comments. Typed lookups
/// report the offending line on parse failure and name the key when a
/// required entry is missing.
class Config {
public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  Point2 get_point(const std::string& key) const;
  Point2 get_point(const std::string& key, const Point2& fallback) const;
  std::vector<int> get_int_list(const std::string& key) const;

private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry& require(const std::string& key) const;
  std::map<std::string, Entry> entries_;
};

} // namespace ltrb
