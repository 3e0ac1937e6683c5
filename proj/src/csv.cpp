#include "torsion/csv.hpp"

#include <cstdio>
#include <fstream>

#include "torsion/errors.hpp"

namespace torsion {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void CsvWriter::add_row(std::vector<Cell> cells) {
  if (cells.size() != columns_.size())
    fail(ErrorCode::DomainError, "csv row width mismatch");
  rows_.push_back(std::move(cells));
}

std::string CsvWriter::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const double* d = std::get_if<double>(&row[i]))
        out += format_double(*d);
      else if (const long* l = std::get_if<long>(&row[i]))
        out += std::to_string(*l);
      else
        out += std::get<std::string>(row[i]);
    }
    out += '\n';
  }
  return out;
}

void CsvWriter::write(const std::filesystem::path& path) const {
  write_text_atomic(path, to_string());
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::ConfigError, "cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace torsion
