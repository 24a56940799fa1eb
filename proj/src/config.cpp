#include "ltrb/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ltrb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected `key = value`, got: " + line, line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (value.empty()) throw ConfigError("empty value for key " + key, line_no);
    cfg.entries_[key] = Entry{value, line_no};
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_string(text.str());
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

const Config::Entry& Config::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string Config::get_string(const std::string& key) const { return require(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  const auto& e = require(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": expected a number, got `" + e.value + "`", e.line);
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  const auto& e = require(key);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || ptr != e.value.data() + e.value.size())
    throw ConfigError("key " + key + ": expected an integer, got `" + e.value + "`", e.line);
  return v;
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& e = require(key);
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError("key " + key + ": expected a boolean, got `" + e.value + "`", e.line);
}

Point2 Config::get_point(const std::string& key) const {
  const auto& e = require(key);
  std::istringstream in(e.value);
  double x, y;
  std::string extra;
  if (!(in >> x >> y) || (in >> extra))
    throw ConfigError("key " + key + ": expected two numbers, got `" + e.value + "`", e.line);
  return Point2(x, y);
}

Point2 Config::get_point(const std::string& key, const Point2& fallback) const {
  return has(key) ? get_point(key) : fallback;
}

std::vector<int> Config::get_int_list(const std::string& key) const {
  const auto& e = require(key);
  std::string spaced = e.value;
  for (auto& ch : spaced)
    if (ch == ',') ch = ' ';
  std::istringstream in(spaced);
  std::vector<int> out;
  int v;
  while (in >> v) out.push_back(v);
  if (!in.eof() || out.empty())
    throw ConfigError("key " + key + ": expected an integer list, got `" + e.value + "`",
                      e.line);
  return out;
}

} // namespace ltrb
