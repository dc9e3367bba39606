#pragma once

// Gaussian kernel correlation between one signal and every cyclic shift of
// another, evaluated through the DFT so the kernel matrix is never formed.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>

#include "rcf/errors.hpp"
#include "rcf/feature_map.hpp"
#include "rcf/spectral.hpp"

namespace rcf {

template <typename Scalar>
struct KernelCorrelation {
  Grid<Scalar> k;
  Spectrum<Scalar> k_hat;
};

/// k[u,v] = exp(-max(0, |a|^2 + |b|^2 - 2 corr(a,b)[u,v]) / (sigma^2 N)),
/// with corr(a,b)[d] = sum_x a[x] b[x + d] and N the total element count.
///
/// Equivalently k[d] = kappa(roll(a, d), b), where roll moves content by +d.
template <typename Scalar>
KernelCorrelation<Scalar> gaussian_correlation(const FeatureMap<Scalar>& a, const FeatureMap<Scalar>& b,
                                               Scalar sigma) {
  a.validate();
  b.validate();
  if (!a.same_shape(b)) throw InvalidInput("gaussian_correlation: feature maps differ in shape");
  if (!(sigma > 0)) throw InvalidInput("gaussian_correlation: sigma must be positive");

  Spectrum<Scalar> cross = Spectrum<Scalar>::Zero(a.rows(), a.cols());
  for (std::size_t c = 0; c < a.channels.size(); ++c)
    cross += dft2(a.channels[c]).conjugate() * dft2(b.channels[c]);
  const Grid<Scalar> corr = idft2(cross);

  const Scalar norms = a.squared_norm() + b.squared_norm();
  const Scalar scale = sigma * sigma * static_cast<Scalar>(a.num_elements());
  KernelCorrelation<Scalar> out;
  out.k = ((norms - 2 * corr).max(Scalar(0)) / -scale).exp();
  out.k_hat = dft2(out.k);
  return out;
}

}  // namespace rcf
