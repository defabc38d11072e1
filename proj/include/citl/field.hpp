#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "citl/grid.hpp"

namespace citl {

using Vec = Eigen::ArrayXd;
using CVec = Eigen::ArrayXcd;
using VecMap = Eigen::Map<Vec>;
using ConstVecMap = Eigen::Map<const Vec>;

/// Time-sampled periodic field on [0,1] x T^d. rank 1 (scalar) or d (vector).
/// Storage is one contiguous array per component, time-major then spatial
/// row-major; all operations treat inputs as immutable values.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(const Grid& g, int rank) : grid_(g), rank_(rank) {
    comps_.resize(rank);
    for (auto& c : comps_) c = Vec::Zero(long(g.nt) * g.spatial_points());
  }

  static SpaceTimeField scalar(const Grid& g) { return SpaceTimeField(g, 1); }
  static SpaceTimeField vector(const Grid& g) { return SpaceTimeField(g, g.d); }

  const Grid& grid() const { return grid_; }
  int rank() const { return rank_; }
  bool is_scalar() const { return rank_ == 1; }

  Vec& comp(int c) { return comps_[c]; }
  const Vec& comp(int c) const { return comps_[c]; }

  VecMap slice(int c, int k) {
    long n = grid_.spatial_points();
    return VecMap(comps_[c].data() + long(k) * n, n);
  }
  ConstVecMap slice(int c, int k) const {
    long n = grid_.spatial_points();
    return ConstVecMap(comps_[c].data() + long(k) * n, n);
  }

  double& at(int c, int k, long sp) {
    return comps_[c](long(k) * grid_.spatial_points() + sp);
  }
  double at(int c, int k, long sp) const {
    return comps_[c](long(k) * grid_.spatial_points() + sp);
  }

  /// Fill from f(t, x) (x has d entries); component c.
  void fill(int c, const std::function<double(double, const std::array<double, 3>&)>& f);

  /// Fill a time-independent component from g(x).
  void fill_spatial(int c, const std::function<double(const std::array<double, 3>&)>& g);

  bool all_finite() const {
    for (const auto& c : comps_)
      if (!c.allFinite()) return false;
    return true;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& c : comps_) m = std::max(m, c.abs().maxCoeff());
    return m;
  }

  SpaceTimeField& operator+=(const SpaceTimeField& o) {
    for (int c = 0; c < rank_; ++c) comps_[c] += o.comps_[c];
    return *this;
  }
  SpaceTimeField& operator-=(const SpaceTimeField& o) {
    for (int c = 0; c < rank_; ++c) comps_[c] -= o.comps_[c];
    return *this;
  }
  SpaceTimeField& operator*=(double a) {
    for (auto& c : comps_) c *= a;
    return *this;
  }

  void setZero() {
    for (auto& c : comps_) c.setZero();
  }
  void release() { comps_.clear(); comps_.shrink_to_fit(); rank_ = 0; }

 private:
  Grid grid_;
  int rank_ = 0;
  std::vector<Vec> comps_;
};

/// Binary grid dump: little-endian header {magic "CITL", version u32, d, nx,
/// nt, rank}, then float64 samples in (t, x1..xd, component) order.
void dump_field(const SpaceTimeField& f, const std::string& path);
SpaceTimeField load_field(const std::string& path);

}  // namespace citl
