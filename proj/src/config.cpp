#include "levy_ep/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "levy_ep/errors.hpp"

namespace levy_ep {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

double parse_number(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw UsageError("config field '" + field + "': expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    // Accept exact integral values written as 1e5.
    const double d = parse_number(text, field);
    if (d != std::floor(d) || std::abs(d) > 9e15) {
      throw UsageError("config field '" + field + "': expected an integer, got '" + text + "'");
    }
    return static_cast<long long>(d);
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw UsageError("config field '" + field + "': expected an unsigned 64-bit integer, got '" +
                     text + "'");
  }
  return v;
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!valid_key(key)) {
      throw UsageError("config line " + std::to_string(lineno) + ": invalid key '" + key + "'");
    }
    if (cfg.has(key)) throw UsageError("config field '" + key + "': given twice");
    cfg.entries_.emplace_back(key, value);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw UsageError("invalid config key '" + key + "'");
  for (auto& e : entries_) {
    if (e.first == key) {
      e.second = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void Config::erase(const std::string& key) {
  std::erase_if(entries_, [&](const auto& e) { return e.first == key; });
}

const std::string& Config::str(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.first == key) return e.second;
  }
  throw UsageError("config field '" + key + "': missing");
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

double Config::number(const std::string& key) const { return parse_number(str(key), key); }

double Config::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long Config::integer(const std::string& key) const { return parse_integer(str(key), key); }

long long Config::integer(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t Config::u64(const std::string& key) const { return parse_u64(str(key), key); }

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = str(key);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw UsageError("config field '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(str(key))) out.push_back(parse_number(item, key));
  if (out.empty()) throw UsageError("config field '" + key + "': empty list");
  return out;
}

std::vector<int> Config::integers(const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : split_list(str(key))) {
    const long long v = parse_integer(item, key);
    if (v < -2147483647LL || v > 2147483647LL) {
      throw UsageError("config field '" + key + "': value out of range");
    }
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw UsageError("config field '" + key + "': empty list");
  return out;
}

std::vector<std::string> Config::words(const std::string& key) const {
  auto out = split_list(str(key));
  if (out.empty()) throw UsageError("config field '" + key + "': empty list");
  return out;
}

std::vector<std::pair<std::string, std::string>> Config::section(const std::string& prefix) const {
  std::vector<std::pair<std::string, std::string>> out;
  const std::string p = prefix + ".";
  for (const auto& e : entries_) {
    if (e.first.rfind(p, 0) == 0) out.emplace_back(e.first.substr(p.size()), e.second);
  }
  return out;
}

std::string Config::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace levy_ep
