#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bohmflux {

// Tabular output with full round-trip precision (17 significant digits),
// written atomically (temp file + rename).
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);
  void add_row(const std::vector<double>& row);
  void write(const std::string& path) const;
  std::string to_string() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

void write_text_atomic(const std::string& path, const std::string& content);

std::string format_full(double v);  // %.17g

std::uint64_t fnv1a_hash(const std::string& s);

}  // namespace bohmflux
