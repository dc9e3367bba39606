#pragma once

// Closed-form minimizers of  ||e - q||^2 + tau * loss(e)  for the supported
// losses. q is the residual y - f of the current filter; e absorbs the part of
// it the loss allows to go unexplained.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rcf/errors.hpp"
#include "rcf/spectral.hpp"

namespace rcf {

enum class LossKind { L2, L1, L1L2, L21 };

inline std::string_view to_string(LossKind k) {
  switch (k) {
    case LossKind::L2: return "l2";
    case LossKind::L1: return "l1";
    case LossKind::L1L2: return "l1l2";
    case LossKind::L21: return "l21";
  }
  return "?";
}

inline std::optional<LossKind> parse_loss(std::string_view s) {
  if (s == "l2") return LossKind::L2;
  if (s == "l1") return LossKind::L1;
  if (s == "l1l2") return LossKind::L1L2;
  if (s == "l21") return LossKind::L21;
  return std::nullopt;
}

/// Soft threshold: sign(x) * max(0, |x| - epsilon).
template <typename Scalar>
Scalar shrink(Scalar epsilon, Scalar x) {
  const Scalar m = std::max(Scalar(0), std::abs(x) - epsilon);
  return x < 0 ? -m : m;
}

template <typename Derived>
auto update_e_l1(const Eigen::ArrayBase<Derived>& q, typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  const Scalar eps = tau / 2;
  return Grid<Scalar>(q.unaryExpr([eps](Scalar x) { return shrink(eps, x); }));
}

/// Elastic net with equal weights: loss(e) = (|e| + e^2) / 2.
template <typename Derived>
auto update_e_l1l2(const Eigen::ArrayBase<Derived>& q, typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  const Scalar eps = tau / (4 + 2 * tau);
  const Scalar gain = 2 / (2 + tau);
  return Grid<Scalar>(q.unaryExpr([eps, gain](Scalar x) { return shrink(eps, gain * x); }));
}

/// Column-wise group shrinkage with threshold 1/tau, followed by zeroing row j
/// for every zeroed column j (rows beyond the grid height are ignored).
template <typename Derived>
auto update_e_l21(const Eigen::ArrayBase<Derived>& q, typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  Grid<Scalar> e = q;
  std::vector<Eigen::Index> zeroed;
  for (Eigen::Index j = 0; j < e.cols(); ++j) {
    const Scalar norm = e.col(j).matrix().norm();
    if (norm > 1 / tau) {
      e.col(j) *= 1 - 1 / (tau * norm);
    } else {
      e.col(j).setZero();
      zeroed.push_back(j);
    }
  }
  for (Eigen::Index j : zeroed) {
    if (j < e.rows()) e.row(j).setZero();
  }
  return e;
}

template <typename Derived>
auto update_e(LossKind kind, const Eigen::ArrayBase<Derived>& q, typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  if (!(tau > 0)) throw InvalidInput("update_e: tau must be positive");
  switch (kind) {
    case LossKind::L2: return Grid<Scalar>(Grid<Scalar>::Zero(q.rows(), q.cols()));
    case LossKind::L1: return update_e_l1(q, tau);
    case LossKind::L1L2: return update_e_l1l2(q, tau);
    case LossKind::L21: return update_e_l21(q, tau);
  }
  throw InvalidInput("update_e: unknown loss");
}

/// loss(e) summed over the grid, in the weighting each update above minimizes
/// against: tau * loss_value is the penalty added to ||e - q||^2.
template <typename Derived>
typename Derived::Scalar loss_value(LossKind kind, const Eigen::ArrayBase<Derived>& e,
                                    typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  switch (kind) {
    case LossKind::L2: return Scalar(0);
    case LossKind::L1: return e.abs().sum();
    case LossKind::L1L2: return Scalar(0.5) * (e.abs().sum() + e.square().sum());
    case LossKind::L21: {
      // The group step's threshold 1/tau makes its penalty (2/tau) * sum_j ||e_j||.
      Scalar s = 0;
      for (Eigen::Index j = 0; j < e.cols(); ++j) s += e.col(j).matrix().norm();
      return (2 / tau) * s;
    }
  }
  throw InvalidInput("loss_value: unknown loss");
}

}  // namespace rcf
