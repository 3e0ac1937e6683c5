#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace torsion {

// Doubles print with %.17g so that emitted CSV re-parses bit-for-bit.
std::string format_double(double value);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  using Cell = std::variant<double, long, std::string>;
  void add_row(std::vector<Cell> cells);

  std::string to_string() const;

  // Writes atomically (temp file + rename).
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace torsion
