#pragma once

// Dense 2D transforms and the spatial templates (window, labels) every
// frequency-domain step is built on.
//
// Convention: the forward transform is unnormalized, the inverse carries the
// 1/(h*w) factor. Grids are row-major; index (u, v) is (row, column).

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "rcf/errors.hpp"

namespace rcf {

template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Spectrum = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using RealGrid = Grid<double>;
using ComplexSpectrum = Spectrum<double>;

namespace detail {

template <typename Scalar>
void transform_rows_and_cols(Spectrum<Scalar>& s, bool inverse) {
  using Complex = std::complex<Scalar>;
  Eigen::FFT<Scalar> fft;  // per call: plan caches are not shared between threads
  fft.SetFlag(Eigen::FFT<Scalar>::Unscaled);
  const Eigen::Index h = s.rows();
  const Eigen::Index w = s.cols();

  std::vector<Complex> in(static_cast<std::size_t>(std::max(h, w)));
  std::vector<Complex> out(in.size());
  // Length-1 transforms are the identity (and kissfft does not accept them).
  for (Eigen::Index r = 0; w > 1 && r < h; ++r) {
    for (Eigen::Index c = 0; c < w; ++c) in[c] = s(r, c);
    if (inverse)
      fft.inv(out.data(), in.data(), w);
    else
      fft.fwd(out.data(), in.data(), w);
    for (Eigen::Index c = 0; c < w; ++c) s(r, c) = out[c];
  }
  for (Eigen::Index c = 0; h > 1 && c < w; ++c) {
    for (Eigen::Index r = 0; r < h; ++r) in[r] = s(r, c);
    if (inverse)
      fft.inv(out.data(), in.data(), h);
    else
      fft.fwd(out.data(), in.data(), h);
    for (Eigen::Index r = 0; r < h; ++r) s(r, c) = out[r];
  }
}

template <typename Derived>
void require_nonempty(const Eigen::ArrayBase<Derived>& g, const char* what) {
  if (g.rows() == 0 || g.cols() == 0) throw InvalidInput(std::string(what) + ": zero dimension");
}

}  // namespace detail

/// Unnormalized 2D DFT of a real grid.
template <typename Derived>
Spectrum<typename Derived::Scalar> dft2(const Eigen::ArrayBase<Derived>& g) {
  using Scalar = typename Derived::Scalar;
  detail::require_nonempty(g, "dft2");
  if (!g.allFinite()) throw InvalidInput("dft2: non-finite input");
  Spectrum<Scalar> s = g.derived().template cast<std::complex<Scalar>>();
  detail::transform_rows_and_cols(s, false);
  return s;
}

/// Inverse 2D DFT (1/(h*w) normalization) of the spectrum of a real grid.
///
/// The imaginary residue must stay below 1e-6 of the largest real magnitude
/// (plus a roundoff floor proportional to the input size); anything larger
/// means the spectrum was not conjugate-symmetric.
template <typename Derived>
Grid<typename Derived::Scalar::value_type> idft2(const Eigen::ArrayBase<Derived>& spec) {
  using Scalar = typename Derived::Scalar::value_type;
  detail::require_nonempty(spec, "idft2");
  Spectrum<Scalar> s = spec.derived();
  detail::transform_rows_and_cols(s, true);
  const Scalar n = static_cast<Scalar>(s.size());
  s /= n;

  Grid<Scalar> re = s.real();
  const Scalar real_max = re.abs().maxCoeff();
  const Scalar imag_max = s.imag().abs().maxCoeff();
  const Scalar floor = std::numeric_limits<Scalar>::epsilon() * 64 * spec.abs().maxCoeff() / std::sqrt(n);
  if (!(imag_max <= Scalar(1e-6) * real_max + floor)) {
    throw NumericConsistency("idft2: imaginary residue " + std::to_string(double(imag_max)) +
                             " exceeds tolerance; spectrum is not conjugate-symmetric");
  }
  return re;
}

/// Separable Hann taper, zero on all four borders and 1 at the exact center.
template <typename Scalar = double>
Grid<Scalar> cosine_window(Eigen::Index h, Eigen::Index w) {
  if (h < 2 || w < 2) throw InvalidInput("cosine_window: both dimensions must be >= 2");
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> wr(h), wc(w);
  for (Eigen::Index u = 0; u < h; ++u) wr(u) = Scalar(0.5) * (1 - std::cos(two_pi * u / Scalar(h - 1)));
  for (Eigen::Index v = 0; v < w; ++v) wc(v) = Scalar(0.5) * (1 - std::cos(two_pi * v / Scalar(w - 1)));
  return (wr.matrix() * wc.matrix().transpose()).array();
}

/// Gaussian regression target with its peak at shift (0, 0), using wrapped
/// distances so that negative shifts live at the far end of each axis.
template <typename Scalar = double>
Grid<Scalar> gaussian_labels(Eigen::Index h, Eigen::Index w, Scalar sigma_y) {
  if (h < 1 || w < 1) throw InvalidInput("gaussian_labels: zero dimension");
  if (!(sigma_y > 0)) throw InvalidInput("gaussian_labels: sigma_y must be positive");
  Grid<Scalar> y(h, w);
  const Scalar denom = 2 * sigma_y * sigma_y;
  for (Eigen::Index u = 0; u < h; ++u) {
    const Scalar du = static_cast<Scalar>(std::min(u, h - u));
    for (Eigen::Index v = 0; v < w; ++v) {
      const Scalar dv = static_cast<Scalar>(std::min(v, w - v));
      y(u, v) = std::exp(-(du * du + dv * dv) / denom);
    }
  }
  return y;
}

/// Default label bandwidth for a feature grid of the given size.
inline double default_label_sigma(Eigen::Index h, Eigen::Index w) {
  return std::sqrt(static_cast<double>(h * w)) / 16.0;
}

}  // namespace rcf
