#include "citl/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace citl {

struct CsvWriter::Impl {
  std::ofstream os;
};

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : impl_(new Impl) {
  impl_->os.open(path);
  if (!impl_->os) throw std::runtime_error("CsvWriter: cannot open " + path);
  for (size_t i = 0; i < columns.size(); ++i)
    impl_->os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i)
    impl_->os << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_json: cannot open " + path);
  os << j.dump(2) << "\n";
}

void ensure_dir(const std::string& path) {
  if (path.empty()) return;
  std::filesystem::create_directories(path);
}

}  // namespace citl
