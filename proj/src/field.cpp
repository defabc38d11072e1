#include "citl/field.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace citl {

void SpaceTimeField::fill(
    int c, const std::function<double(double, const std::array<double, 3>&)>& f) {
  const long nsp = grid_.spatial_points();
  for (int k = 0; k < grid_.nt; ++k) {
    const double t = grid_.time(k);
    auto s = slice(c, k);
    for (long i = 0; i < nsp; ++i) {
      auto ix = grid_.unflat(i);
      std::array<double, 3> x{0, 0, 0};
      for (int a = 0; a < grid_.d; ++a) x[a] = double(ix[a]) / grid_.nx;
      s(i) = f(t, x);
    }
  }
}

void SpaceTimeField::fill_spatial(
    int c, const std::function<double(const std::array<double, 3>&)>& g) {
  const long nsp = grid_.spatial_points();
  Vec one_slice(nsp);
  for (long i = 0; i < nsp; ++i) {
    auto ix = grid_.unflat(i);
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < grid_.d; ++a) x[a] = double(ix[a]) / grid_.nx;
    one_slice(i) = g(x);
  }
  for (int k = 0; k < grid_.nt; ++k) slice(c, k) = one_slice;
}

namespace {
void write_u32(std::ofstream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}
uint32_t read_u32(std::ifstream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
}  // namespace

void dump_field(const SpaceTimeField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("dump_field: cannot open " + path);
  const Grid& g = f.grid();
  os.write("CITL", 4);
  write_u32(os, 1u);
  write_u32(os, uint32_t(g.d));
  write_u32(os, uint32_t(g.nx));
  write_u32(os, uint32_t(g.nt));
  write_u32(os, uint32_t(f.rank()));
  const long nsp = g.spatial_points();
  std::vector<double> row(f.rank());
  for (int k = 0; k < g.nt; ++k)
    for (long i = 0; i < nsp; ++i) {
      for (int c = 0; c < f.rank(); ++c) row[c] = f.at(c, k, i);
      os.write(reinterpret_cast<const char*>(row.data()),
               std::streamsize(8 * row.size()));
    }
  if (!os) throw std::runtime_error("dump_field: write failed for " + path);
}

SpaceTimeField load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, "CITL", 4) != 0)
    throw std::runtime_error("load_field: bad magic in " + path);
  uint32_t version = read_u32(is);
  if (version != 1u) throw std::runtime_error("load_field: unknown version");
  int d = int(read_u32(is));
  int nx = int(read_u32(is));
  int nt = int(read_u32(is));
  int rank = int(read_u32(is));
  Grid g(d, nx, nt);
  SpaceTimeField f(g, rank);
  const long nsp = g.spatial_points();
  std::vector<double> row(rank);
  for (int k = 0; k < nt; ++k)
    for (long i = 0; i < nsp; ++i) {
      is.read(reinterpret_cast<char*>(row.data()), std::streamsize(8 * row.size()));
      for (int c = 0; c < rank; ++c) f.at(c, k, i) = row[c];
    }
  if (!is) throw std::runtime_error("load_field: truncated file " + path);
  return f;
}

}  // namespace citl
