#include "fcm/io/csv.hpp"

#include <cstdio>

namespace fcm::io {

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : out_(path), columns_(columns.size()), path_(path) {
  if (!out_) throw IoError("cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ",";
    out_ << columns[i];
  }
  out_ << "\n";
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw IoError("csv row width mismatch in '" + path_ + "'");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ",";
    out_ << format(values[i]);
  }
  out_ << "\n";
  if (!out_) throw IoError("write failure on '" + path_ + "'");
}

}  // namespace fcm::io
