#include "levy_ep/csv.hpp"

#include <charconv>
#include <cmath>

#include "levy_ep/errors.hpp"

namespace levy_ep {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_number(long long v) { return std::to_string(v); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  if (!rows_.empty() && rows_.back().size() != header_.size()) {
    throw Error("csv: previous row has the wrong number of cells");
  }
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::add(const std::string& cell) {
  if (rows_.empty()) throw Error("csv: add before row");
  if (cell.find_first_of(",\n") != std::string::npos) throw Error("csv: cell contains a separator");
  rows_.back().push_back(cell);
  return *this;
}

CsvTable& CsvTable::add(double v) { return add(format_number(v)); }
CsvTable& CsvTable::add(int v) { return add(format_number(static_cast<long long>(v))); }
CsvTable& CsvTable::add(long long v) { return add(format_number(v)); }
CsvTable& CsvTable::add(std::size_t v) { return add(std::to_string(v)); }
CsvTable& CsvTable::add(bool v) { return add(std::string(v ? "1" : "0")); }

std::string CsvTable::str() const {
  std::string out;
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) {
    if (r.size() != header_.size()) throw Error("csv: row has the wrong number of cells");
    line(r);
  }
  return out;
}

}  // namespace levy_ep
