#pragma once

// Slow, direct reference computations used to check the fast paths. Nothing
// in here is called by the tracker itself.

#include <Eigen/Core>

#include <functional>

#include "rcf/feature_map.hpp"
#include "rcf/spectral.hpp"

namespace rcf::verify {

/// O((hw)^2) DFT by direct summation.
ComplexSpectrum naive_dft2(const RealGrid& g);

/// O((hw)^2) inverse DFT, 1/(hw) normalized, complex output.
ComplexSpectrum naive_idft2(const ComplexSpectrum& s);

/// Circular shift moving content by (du, dv): out[u+du, v+dv] = g[u, v].
RealGrid roll(const RealGrid& g, Eigen::Index du, Eigen::Index dv);

FeatureMap<double> roll(const FeatureMap<double>& a, Eigen::Index du, Eigen::Index dv);

/// k[u,v] = exp(-||roll(a,u,v) - b||^2 / (sigma^2 N)) by explicit shifting.
RealGrid explicit_gaussian_correlation(const FeatureMap<double>& a, const FeatureMap<double>& b, double sigma);

inline constexpr Eigen::Index kMaxOracleGrid = 16;

/// Kernel matrix over all cyclic shifts of `a`, K[i][j] = kappa(shift_i a, shift_j a)
/// with shift index i = u * w + v. Refuses grids larger than 16x16.
Eigen::MatrixXd build_explicit_kernel_matrix(const FeatureMap<double>& a, double sigma);

/// Solve (K + lambda I) alpha = y - e densely; result reshaped to the grid.
RealGrid dense_ridge_solve(const Eigen::MatrixXd& k, const RealGrid& y, const RealGrid& e, double lambda);

/// Ridge objective ||K alpha + e - y||^2 + lambda alpha^T K alpha, densely.
double dense_ridge_objective(const Eigen::MatrixXd& k, const RealGrid& alpha, const RealGrid& y, const RealGrid& e,
                             double lambda);

/// Minimum of f over {lo, lo + step, ..., hi} (0 and hi are always included).
double grid_search_min(const std::function<double(double)>& f, double lo, double hi, double step);

}  // namespace rcf::verify
