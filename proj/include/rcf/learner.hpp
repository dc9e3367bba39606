#pragma once

// Alternating minimization of
//
//   sum_i (f(x_i) + e_i - y_i)^2 + lambda ||w||^2 + tau * loss(e)
//
// over the dual filter alpha (closed form in the Fourier domain) and the
// error map e (closed-form proximal step per loss). The primal w is never
// formed: ||w||^2 = alpha^T K alpha is evaluated through the spectrum of k1.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <optional>
#include <sstream>
#include <vector>

#include "rcf/errors.hpp"
#include "rcf/feature_map.hpp"
#include "rcf/kernel.hpp"
#include "rcf/robust_loss.hpp"
#include "rcf/spectral.hpp"

namespace rcf {

struct LearnerParams {
  double lambda = 1e-4;
  double tau = 1e-4;
  LossKind loss = LossKind::L1;
  int max_iters = 100;
  double rel_tol = 1e-3;

  void validate() const {
    if (!(lambda > 0)) throw InvalidInput("LearnerParams: lambda must be positive");
    if (!(tau > 0)) throw InvalidInput("LearnerParams: tau must be positive");
    if (max_iters < 1) throw InvalidInput("LearnerParams: max_iters must be >= 1");
    if (!(rel_tol > 0)) throw InvalidInput("LearnerParams: rel_tol must be positive");
  }
};

template <typename Scalar>
struct TrainResult {
  Spectrum<Scalar> alpha_hat;
  Grid<Scalar> error;
  int iterations = 0;
  bool converged = false;
  std::vector<Scalar> objective_trace;
};

/// alpha_hat = (y_hat - e_hat) / (k1_hat + lambda), element-wise.
template <typename Scalar>
Spectrum<Scalar> solve_alpha(const Spectrum<Scalar>& y_hat, const Spectrum<Scalar>& e_hat,
                             const Spectrum<Scalar>& k1_hat, Scalar lambda) {
  if (y_hat.rows() != e_hat.rows() || y_hat.cols() != e_hat.cols() || y_hat.rows() != k1_hat.rows() ||
      y_hat.cols() != k1_hat.cols())
    throw InvalidInput("solve_alpha: spectra differ in shape");
  Spectrum<Scalar> denom = k1_hat + std::complex<Scalar>(lambda, 0);
  for (Eigen::Index u = 0; u < denom.rows(); ++u) {
    for (Eigen::Index v = 0; v < denom.cols(); ++v) {
      if (!(std::abs(denom(u, v)) > std::numeric_limits<Scalar>::min())) {
        std::ostringstream msg;
        msg << "solve_alpha: vanishing denominator at bin (" << u << ", " << v << ")";
        throw Singularity(msg.str());
      }
    }
  }
  return (y_hat - e_hat) / denom;
}

/// Full objective at (alpha_hat, e), given the spectrum of the training
/// sample's kernel auto-correlation.
template <typename Scalar>
Scalar objective(const Spectrum<Scalar>& k1_hat, const Grid<Scalar>& y, const Spectrum<Scalar>& alpha_hat,
                 const Grid<Scalar>& e, const LearnerParams& params) {
  const Grid<Scalar> f = idft2(Spectrum<Scalar>(alpha_hat * k1_hat));
  const Scalar data = (f + e - y).square().sum();

  const std::complex<Scalar> quad = (k1_hat * alpha_hat.abs2().template cast<std::complex<Scalar>>()).sum();
  const Scalar floor = std::numeric_limits<Scalar>::epsilon() * 64 * (k1_hat.abs() * alpha_hat.abs2()).sum();
  if (std::abs(quad.imag()) > Scalar(1e-6) * std::abs(quad.real()) + floor)
    throw NumericConsistency("objective: regularizer has a non-negligible imaginary part");
  const Scalar reg = Scalar(params.lambda) * quad.real() / static_cast<Scalar>(y.size());

  const Scalar tau = static_cast<Scalar>(params.tau);
  return data + reg + tau * loss_value(params.loss, e, tau);
}

template <typename Scalar>
Scalar objective(const FeatureMap<Scalar>& x, const Grid<Scalar>& y, const Spectrum<Scalar>& alpha_hat,
                 const Grid<Scalar>& e, const LearnerParams& params, Scalar kernel_sigma) {
  return objective(gaussian_correlation(x, x, kernel_sigma).k_hat, y, alpha_hat, e, params);
}

/// Alternate the dual solve and the error update until the error map stops
/// moving (relative change below rel_tol) or max_iters is reached. The L2
/// loss keeps e at zero and stops after one pass.
template <typename Scalar>
TrainResult<Scalar> train(const Spectrum<Scalar>& k1_hat, const Grid<Scalar>& y, const LearnerParams& params,
                          const std::optional<Grid<Scalar>>& initial_error = std::nullopt) {
  params.validate();
  if (k1_hat.rows() != y.rows() || k1_hat.cols() != y.cols())
    throw InvalidInput("train: label map and kernel spectrum differ in shape");

  const Spectrum<Scalar> y_hat = dft2(y);
  const Scalar lambda = static_cast<Scalar>(params.lambda);
  const Scalar tau = static_cast<Scalar>(params.tau);

  TrainResult<Scalar> r;
  r.error = initial_error ? *initial_error : Grid<Scalar>(Grid<Scalar>::Zero(y.rows(), y.cols()));
  if (r.error.rows() != y.rows() || r.error.cols() != y.cols())
    throw InvalidInput("train: initial error map differs in shape");
  if (params.loss == LossKind::L2) r.error.setZero();

  for (int it = 1; it <= params.max_iters; ++it) {
    r.alpha_hat = solve_alpha(y_hat, dft2(r.error), k1_hat, lambda);
    r.iterations = it;

    bool converged = true;
    if (params.loss != LossKind::L2) {
      const Grid<Scalar> q = idft2(Spectrum<Scalar>(y_hat - r.alpha_hat * k1_hat));
      Grid<Scalar> next = update_e(params.loss, q, tau);
      const Scalar change = (next - r.error).matrix().norm();
      const Scalar base = std::max(Scalar(1), r.error.matrix().norm());
      converged = change / base < static_cast<Scalar>(params.rel_tol);
      r.error = std::move(next);
    }

    const Scalar j = objective(k1_hat, y, r.alpha_hat, r.error, params);
    r.objective_trace.push_back(j);
    if (!std::isfinite(j)) {
      throw NumericDivergence("train: non-finite objective at iteration " + std::to_string(it),
                              std::vector<double>(r.objective_trace.begin(), r.objective_trace.end()));
    }
    if (converged) {
      r.converged = true;
      break;
    }
  }
  return r;
}

template <typename Scalar>
TrainResult<Scalar> train(const FeatureMap<Scalar>& x, const Grid<Scalar>& y, const LearnerParams& params,
                          Scalar kernel_sigma) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw InvalidInput("train: feature grid and label map differ in shape");
  return train(gaussian_correlation(x, x, kernel_sigma).k_hat, y, params);
}

}  // namespace rcf
