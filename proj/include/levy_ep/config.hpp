#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace levy_ep {

/// Flat `key = value` configuration with dotted keys. Lines starting with '#'
/// are comments. Keys keep their first-seen order so that echoing a config
/// reproduces it. Lookup failures throw UsageError naming the key.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  void erase(const std::string& key);

  const std::string& str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer(const std::string& key, long long fallback) const;
  std::uint64_t u64(const std::string& key) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  /// Keys under `prefix.` with the prefix removed.
  std::vector<std::pair<std::string, std::string>> section(const std::string& prefix) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::string to_text() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

double parse_number(const std::string& text, const std::string& field);
long long parse_integer(const std::string& text, const std::string& field);
std::uint64_t parse_u64(const std::string& text, const std::string& field);

}  // namespace levy_ep
