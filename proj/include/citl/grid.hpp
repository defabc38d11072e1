#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace citl {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Uniform sampling of [0,1] x T^d: nx spatial modes per axis (points j/nx,
/// no duplicated endpoint), nt time samples including both endpoints.
struct Grid {
  int d = 2;
  int nx = 64;
  int nt = 64;

  Grid() = default;
  Grid(int d_, int nx_, int nt_) : d(d_), nx(nx_), nt(nt_) { validate(); }

  void validate() const {
    if (d != 2 && d != 3) throw std::invalid_argument("Grid: d must be 2 or 3");
    if (nx < 8 || nx % 2 != 0)
      throw std::invalid_argument("Grid: nx must be even and >= 8");
    if (nt < 8) throw std::invalid_argument("Grid: nt must be >= 8");
  }

  long spatial_points() const {
    long n = 1;
    for (int a = 0; a < d; ++a) n *= nx;
    return n;
  }
  double dx() const { return 1.0 / nx; }
  double dt() const { return 1.0 / (nt - 1); }
  double time(int k) const { return double(k) / (nt - 1); }

  /// Row-major spatial index: x1 slowest, xd fastest.
  long flat(const std::array<int, 3>& ix) const {
    long idx = 0;
    for (int a = 0; a < d; ++a) idx = idx * nx + ix[a];
    return idx;
  }
  std::array<int, 3> unflat(long idx) const {
    std::array<int, 3> ix{0, 0, 0};
    for (int a = d - 1; a >= 0; --a) {
      ix[a] = int(idx % nx);
      idx /= nx;
    }
    return ix;
  }

  /// Signed wavenumber for FFT bin j along one axis.
  int wavenumber(int j) const { return (j <= nx / 2) ? j : j - nx; }

  bool operator==(const Grid& o) const {
    return d == o.d && nx == o.nx && nt == o.nt;
  }
};

/// Effective-frequency guards: constructions with spatial frequency sig*mu
/// must satisfy sig*mu <= nx/8, temporal frequency lam*kap <= nt/8.
/// Aliasing silently destroys the identities being verified, so violations
/// are hard errors.
inline void check_spatial_guard(const Grid& g, double sigma_mu,
                                const std::string& what) {
  if (sigma_mu > g.nx / 8.0 + 1e-9)
    throw std::runtime_error("Nyquist guard (spatial): " + what +
                             " needs sigma*mu <= nx/8 = " +
                             std::to_string(g.nx / 8) + ", got " +
                             std::to_string(sigma_mu));
}
inline void check_temporal_guard(const Grid& g, double lambda_kappa,
                                 const std::string& what) {
  if (lambda_kappa > g.nt / 8.0 + 1e-9)
    throw std::runtime_error("Nyquist guard (temporal): " + what +
                             " needs lambda*kappa <= nt/8 = " +
                             std::to_string(g.nt / 8) + ", got " +
                             std::to_string(lambda_kappa));
}

}  // namespace citl
