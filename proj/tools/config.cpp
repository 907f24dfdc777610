#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "levyspde/error.hpp"

namespace levyspde::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::config_invalid, msg); }

double to_number(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (const std::exception&) {
  }
  invalid("key '" + key + "' expects a number, got '" + v + "'");
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') invalid(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) invalid(where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) invalid(where + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (c.values_.count(key)) invalid(where + ": duplicate key '" + key + "'");
    c.values_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::string Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) invalid("missing required key '" + key + "' in " + origin_);
  used_.insert(key);
  return it->second;
}

std::string Config::text(const std::string& key) const { return raw(key); }

std::string Config::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

double Config::number(const std::string& key) const { return to_number(key, raw(key)); }

double Config::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long Config::integer(const std::string& key) const {
  const std::string v = raw(key);
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    invalid("key '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

long long Config::integer(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t Config::unsigned_integer(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string v = raw(key);
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    invalid("key '" + key + "' expects an unsigned integer, got '" + v + "'");
  }
  return out;
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = raw(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  invalid("key '" + key + "' expects true or false, got '" + v + "'");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(raw(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_number(key, trim(item)));
  if (out.empty()) invalid("key '" + key + "' expects a comma-separated list of numbers");
  return out;
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) const {
  return has(key) ? numbers(key) : fallback;
}

void Config::reject_unused() const {
  std::string unknown;
  for (const auto& [k, v] : values_) {
    if (!used_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
  }
  if (!unknown.empty()) invalid("unknown keys in " + origin_ + ": " + unknown);
}

}  // namespace levyspde::cli
