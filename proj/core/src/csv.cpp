#include "bandgap/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bandgap::csv {

std::string cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string cell(std::size_t v) { return std::to_string(v); }

Writer::Writer(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Writer::comment(const std::string& text) { comments_.push_back(text); }

void Writer::row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("csv::Writer: cell count does not match columns");
  rows_.push_back(std::move(cells));
}

std::string Writer::str() const {
  std::string out;
  for (const auto& c : comments_) {
    out += "# ";
    out += c;
    out += '\n';
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += r[i];
    }
    out += '\n';
  }
  return out;
}

void Writer::write_file(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("csv::Writer: cannot open " + path);
  f << str();
}

}  // namespace bandgap::csv
