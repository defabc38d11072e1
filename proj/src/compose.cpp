#include "citl/compose.hpp"

#include <cmath>

#include "citl/norms.hpp"
#include "citl/spectral_ops.hpp"

namespace citl {

SpaceTimeField compose_with_map(const SpatialInterpolant& g, int sigma,
                                const Grid& coarse,
                                const std::optional<SpaceTimeField>& phi_disp,
                                double effective_mu) {
  check_spatial_guard(coarse, double(sigma) * effective_mu, "compose_with_map");
  SpaceTimeField out = SpaceTimeField::scalar(coarse);
  for (int k = 0; k < coarse.nt; ++k) {
    MapSlice m;
    if (phi_disp)
      for (int a = 0; a < coarse.d; ++a) m.disp[a] = phi_disp->slice(a, k).data();
    compose_slice(g, sigma, coarse, m, out.slice(0, k).data());
  }
  return out;
}

RiemannLebesgueFit measure_riemann_lebesgue(const Vec& a, const Grid& coarse,
                                            const SpatialInterpolant& g,
                                            const MapSlice& phi,
                                            const std::vector<int>& sigmas) {
  if (sigmas.size() < 4)
    throw std::invalid_argument("measure_riemann_lebesgue: need >= 4 sigmas");
  RiemannLebesgueFit fit;
  Vec composed(coarse.spatial_points());
  for (int s : sigmas) {
    compose_slice(g, double(s), coarse, phi, composed.data());
    fit.sigmas.push_back(double(s));
    fit.values.push_back(std::abs((a * composed).mean()));
  }
  bool all_floor = true;
  for (double v : fit.values)
    if (v > 1e-14) all_floor = false;
  if (all_floor) {
    fit.below_floor = true;
    return fit;
  }
  std::vector<double> vs = fit.values;
  for (auto& v : vs) v = std::max(v, 1e-300);
  fit.slope = fit_loglog(fit.sigmas, vs).slope;
  return fit;
}

ImprovedHolderSample measure_improved_holder(const Vec& a, const Grid& coarse,
                                             const SpatialInterpolant& f,
                                             double f_lr_norm, int sigma,
                                             double r, const MapSlice& phi) {
  ImprovedHolderSample out;
  const long nsp = coarse.spatial_points();
  Vec composed(nsp);
  compose_slice(f, double(sigma), coarse, phi, composed.data());
  out.lhs = lp_norm_slice((a * composed).abs(), r);
  out.term_plain = lp_norm_slice(a.abs(), r) * f_lr_norm;

  // ||a||_{C^1} and ||grad Phi||_{C^0} on this slice
  SliceFFT fft(coarse);
  Vec der(nsp);
  double a_c1 = a.abs().maxCoeff();
  Vec g2 = Vec::Zero(nsp);
  for (int ax = 0; ax < coarse.d; ++ax) {
    slice_derivative(fft, a.data(), der.data(), ax, 1);
    g2 += der.square();
  }
  a_c1 = std::max(a_c1, std::sqrt(g2.maxCoeff()));
  double grad2;
  if (phi.identity()) {
    grad2 = double(coarse.d);  // |Id|_F^2
  } else {
    Vec fro = Vec::Zero(nsp);
    for (int ca = 0; ca < coarse.d; ++ca) {
      Vec dvec = ConstVecMap(phi.disp[ca], nsp);
      for (int ax = 0; ax < coarse.d; ++ax) {
        slice_derivative(fft, dvec.data(), der.data(), ax, 1);
        if (ax == ca) der += 1.0;  // grad Phi = Id + grad disp
        fro += der.square();
      }
    }
    grad2 = fro.maxCoeff();
  }
  double grad_c0 = std::sqrt(grad2);
  out.term_decay = std::pow(double(sigma), -1.0 / r) * a_c1 *
                   std::pow(grad_c0, coarse.d - 1) * f_lr_norm;
  return out;
}

}  // namespace citl
