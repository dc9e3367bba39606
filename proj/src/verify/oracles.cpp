#include "rcf/verify/oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rcf/errors.hpp"

namespace rcf::verify {

namespace {

ComplexSpectrum naive_transform(const ComplexSpectrum& in, double sign) {
  const Eigen::Index h = in.rows(), w = in.cols();
  ComplexSpectrum out = ComplexSpectrum::Zero(h, w);
  for (Eigen::Index a = 0; a < h; ++a) {
    for (Eigen::Index b = 0; b < w; ++b) {
      std::complex<double> acc = 0;
      for (Eigen::Index u = 0; u < h; ++u) {
        for (Eigen::Index v = 0; v < w; ++v) {
          const double phase = sign * 2 * std::numbers::pi *
                               (static_cast<double>((a * u) % h) / h + static_cast<double>((b * v) % w) / w);
          acc += in(u, v) * std::polar(1.0, phase);
        }
      }
      out(a, b) = acc;
    }
  }
  return out;
}

Eigen::Index wrap(Eigen::Index i, Eigen::Index n) { return ((i % n) + n) % n; }

}  // namespace

ComplexSpectrum naive_dft2(const RealGrid& g) { return naive_transform(g.cast<std::complex<double>>(), -1); }

ComplexSpectrum naive_idft2(const ComplexSpectrum& s) {
  return naive_transform(s, +1) / static_cast<double>(s.size());
}

RealGrid roll(const RealGrid& g, Eigen::Index du, Eigen::Index dv) {
  RealGrid out(g.rows(), g.cols());
  for (Eigen::Index u = 0; u < g.rows(); ++u)
    for (Eigen::Index v = 0; v < g.cols(); ++v) out(wrap(u + du, g.rows()), wrap(v + dv, g.cols())) = g(u, v);
  return out;
}

FeatureMap<double> roll(const FeatureMap<double>& a, Eigen::Index du, Eigen::Index dv) {
  FeatureMap<double> out = a;
  for (auto& c : out.channels) c = roll(c, du, dv);
  return out;
}

namespace {

double squared_distance(const FeatureMap<double>& a, const FeatureMap<double>& b) {
  double d = 0;
  for (std::size_t c = 0; c < a.channels.size(); ++c) d += (a.channels[c] - b.channels[c]).square().sum();
  return d;
}

}  // namespace

RealGrid explicit_gaussian_correlation(const FeatureMap<double>& a, const FeatureMap<double>& b, double sigma) {
  const double scale = sigma * sigma * static_cast<double>(a.num_elements());
  RealGrid k(a.rows(), a.cols());
  for (Eigen::Index u = 0; u < a.rows(); ++u)
    for (Eigen::Index v = 0; v < a.cols(); ++v) k(u, v) = std::exp(-squared_distance(roll(a, u, v), b) / scale);
  return k;
}

Eigen::MatrixXd build_explicit_kernel_matrix(const FeatureMap<double>& a, double sigma) {
  if (a.rows() > kMaxOracleGrid || a.cols() > kMaxOracleGrid)
    throw InvalidInput("build_explicit_kernel_matrix: grid above the 16x16 oracle bound");
  const Eigen::Index h = a.rows(), w = a.cols(), n = h * w;
  const double scale = sigma * sigma * static_cast<double>(a.num_elements());
  std::vector<FeatureMap<double>> shifts;
  shifts.reserve(n);
  for (Eigen::Index u = 0; u < h; ++u)
    for (Eigen::Index v = 0; v < w; ++v) shifts.push_back(roll(a, u, v));
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = std::exp(-squared_distance(shifts[i], shifts[j]) / scale);
  return k;
}

namespace {

Eigen::VectorXd flatten(const RealGrid& g) { return Eigen::Map<const Eigen::VectorXd>(g.data(), g.size()); }

}  // namespace

RealGrid dense_ridge_solve(const Eigen::MatrixXd& k, const RealGrid& y, const RealGrid& e, double lambda) {
  const Eigen::MatrixXd a = k + lambda * Eigen::MatrixXd::Identity(k.rows(), k.cols());
  const Eigen::VectorXd alpha = a.fullPivLu().solve(flatten(y) - flatten(e));
  return Eigen::Map<const RealGrid>(alpha.data(), y.rows(), y.cols());
}

double dense_ridge_objective(const Eigen::MatrixXd& k, const RealGrid& alpha, const RealGrid& y, const RealGrid& e,
                             double lambda) {
  const Eigen::VectorXd a = flatten(alpha);
  const Eigen::VectorXd f = k * a;
  return (f + flatten(e) - flatten(y)).squaredNorm() + lambda * a.dot(k * a);
}

double grid_search_min(const std::function<double(double)>& f, double lo, double hi, double step) {
  double best = std::min(f(hi), lo <= 0 && hi >= 0 ? f(0.0) : f(lo));
  const auto n = static_cast<long long>(std::floor((hi - lo) / step));
  for (long long i = 0; i <= n; ++i) best = std::min(best, f(lo + static_cast<double>(i) * step));
  return best;
}

}  // namespace rcf::verify
