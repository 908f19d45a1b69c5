// Locale-independent CSV output: shortest round-trip decimal text.
#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "boussinesq/common.hpp"

namespace boussinesq::detail {

inline std::string format_real(Real value) {
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, res.ptr);
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_line(header);
  }

  void row(std::initializer_list<Real> values) { row(std::vector<Real>(values)); }

  void row(const std::vector<Real>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (Real v : values) cells.push_back(format_real(v));
    write_line(cells);
  }

  void text_row(const std::vector<std::string>& cells) { write_line(cells); }

 private:
  void write_line(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace boussinesq::detail
