#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace levy_ep {

/// Locale-independent rendering with 17 significant digits, so every double
/// round-trips.
std::string format_number(double v);
std::string format_number(long long v);

/// Header plus rows, rendered with '\n' line ends and no quoting (cells never
/// contain commas).
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& add(const std::string& cell);
  CsvTable& add(double v);
  CsvTable& add(int v);
  CsvTable& add(long long v);
  CsvTable& add(std::size_t v);
  CsvTable& add(bool v);

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace levy_ep
