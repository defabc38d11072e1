#include "citl/profiles.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace citl {

namespace {

inline double ramp_kernel(double y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  return std::exp(-1.0 / (y * (1.0 - y)));
}
inline double ramp_kernel_deriv(double y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  double denom = y * (1.0 - y);
  return ramp_kernel(y) * (1.0 - 2.0 * y) / (denom * denom);
}

struct StepTable {
  int n = 8192;
  std::vector<double> cum;  // cumulative integral of ramp_kernel at i/n
  double total = 0;

  StepTable() {
    cum.resize(n + 1, 0.0);
    double h = 1.0 / n;
    // GL5 per subinterval
    static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double ws[5] = {0.2369268850561891, 0.4786286704993665,
                                 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};
    for (int i = 0; i < n; ++i) {
      double a = i * h, mid = a + h / 2, half = h / 2;
      double acc = 0;
      for (int q = 0; q < 5; ++q) acc += ws[q] * ramp_kernel(mid + half * xs[q]);
      cum[i + 1] = cum[i] + acc * half;
    }
    total = cum[n];
  }
};

const StepTable& step_table() {
  static StepTable t;
  return t;
}

}  // namespace

double Smoothstep::value(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const StepTable& t = step_table();
  double u = y * t.n;
  int i = int(u);
  if (i >= t.n) i = t.n - 1;
  double s = u - i;
  double h = 1.0 / t.n;
  // cubic Hermite on [i/n, (i+1)/n] with exact endpoint derivatives
  double v0 = t.cum[i], v1 = t.cum[i + 1];
  double d0 = ramp_kernel(double(i) / t.n) * h;
  double d1 = ramp_kernel(double(i + 1) / t.n) * h;
  double s2 = s * s, s3 = s2 * s;
  double val = (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * d0 +
               (-2 * s3 + 3 * s2) * v1 + (s3 - s2) * d1;
  return val / t.total;
}

double Smoothstep::deriv(double y) { return ramp_kernel(y) / step_table().total; }

double PlateauBump::value(double z) const {
  double t = std::abs(z) / half;
  if (t >= 1.0) return 0.0;
  if (t <= 1.0 - ramp_frac) return 1.0;
  return Smoothstep::value((1.0 - t) / ramp_frac);
}

double PlateauBump::derivative(double z) const {
  double t = std::abs(z) / half;
  if (t >= 1.0 || t <= 1.0 - ramp_frac) return 0.0;
  double d = -Smoothstep::deriv((1.0 - t) / ramp_frac) / (ramp_frac * half);
  return z >= 0 ? d : -d;
}

double PlateauBump::integral() const {
  auto self = *this;
  return quad_gl5([self](double z) { return self.value(z); }, -half, half, 512);
}

ZeroMeanProfile ZeroMeanProfile::make(double sup_half, double inner_frac,
                                      double ramp_frac) {
  ZeroMeanProfile p;
  p.outer_ = PlateauBump{sup_half, ramp_frac};
  p.inner_ = PlateauBump{sup_half * inner_frac, ramp_frac};
  p.coeff_ = p.inner_.integral() / p.outer_.integral();
  auto val = [&p](double z) { return p.inner_.value(z) - p.coeff_ * p.outer_.value(z); };
  p.l1_ = quad_gl5([&](double z) { return std::abs(val(z)); }, -0.5, 0.5, 4096);
  p.l2sq_ = quad_gl5([&](double z) { double v = val(z); return v * v; }, -0.5, 0.5, 4096);
  double m = 0;
  for (int i = 0; i <= 20000; ++i) {
    double z = -0.5 + i / 20000.0;
    m = std::max(m, std::abs(val(z)));
  }
  p.sup_ = m;
  return p;
}

double ZeroMeanProfile::value(double z) const {
  z -= std::round(z);  // wrap to [-1/2, 1/2]
  return value_raw(z);
}

double ZeroMeanProfile::derivative(double z) const {
  z -= std::round(z);
  return derivative_raw(z);
}

double ZeroMeanProfile::value_raw(double z) const {
  return inner_.value(z) - coeff_ * outer_.value(z);
}

double ZeroMeanProfile::derivative_raw(double z) const {
  return inner_.derivative(z) - coeff_ * outer_.derivative(z);
}

double quad_gl5(const std::function<double(double)>& f, double a, double b, int n) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  double h = (b - a) / n, acc = 0;
  for (int i = 0; i < n; ++i) {
    double mid = a + (i + 0.5) * h, half = h / 2;
    for (int q = 0; q < 5; ++q) acc += ws[q] * f(mid + half * xs[q]);
  }
  return acc * (b - a) / (2.0 * n);
}

}  // namespace citl
