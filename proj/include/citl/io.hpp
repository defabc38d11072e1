#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace citl {

using Json = nlohmann::json;

/// Minimal CSV writer with a fixed header; values are printed with enough
/// digits to be bit-stable across identical runs.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  static std::string num(double v);

 private:
  struct Impl;
  Impl* impl_;
};

void write_json(const Json& j, const std::string& path);
void ensure_dir(const std::string& path);

}  // namespace citl
