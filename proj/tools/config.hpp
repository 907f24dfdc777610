#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace levyspde::cli {

/// Flat key = value document. `[section]` prefixes the keys that follow with
/// "section."; '#' starts a comment.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer(const std::string& key, long long fallback) const;
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  /// Comma-separated numbers.
  std::vector<double> numbers(const std::string& key) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;

  /// Throws config-invalid naming every key that was never read.
  void reject_unused() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::string raw(const std::string& key) const;

  std::string origin_;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

}  // namespace levyspde::cli
