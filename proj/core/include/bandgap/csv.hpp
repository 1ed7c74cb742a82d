// Deterministic CSV emission: fixed column order, fixed formatting, comment
// header carrying the config hash.
#pragma once

#include <string>
#include <vector>

namespace bandgap::csv {

// Round-trip-exact, locale-independent rendering of a double.
std::string cell(double v);
std::string cell(std::size_t v);

class Writer {
 public:
  explicit Writer(std::vector<std::string> columns);

  void comment(const std::string& text);             // emitted as "# text"
  void row(std::vector<std::string> cells);

  std::string str() const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace bandgap::csv
