#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "fcm/types.hpp"

namespace fcm::io {

//! Comma-separated output with a header row, '.' decimal separator, and
//! full-precision deterministic number formatting.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);

  static std::string format(double v);

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::string path_;
};

}  // namespace fcm::io
