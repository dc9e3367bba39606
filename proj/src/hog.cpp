// Felzenszwalb-style cell HOG. Each pixel votes its gradient magnitude into
// one of 18 signed orientation bins, spread bilinearly over the four nearest
// cells. Every cell histogram is normalized against the energy of the four
// 2x2 cell blocks that contain it and truncated at kHogTruncation; the 4x18
// normalized values are then averaged down to 31 channels so each channel
// keeps the truncation bound.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rcf/errors.hpp"
#include "rcf/features.hpp"

namespace rcf {
namespace {

constexpr int kSignedBins = 18;
constexpr int kUnsignedBins = 9;
constexpr double kNormEps = 1e-4;

struct Gradient {
  RealGrid magnitude;
  Eigen::ArrayXXi bin;
};

Gradient compute_gradient(const Frame& patch) {
  const int h = patch.height;
  const int w = patch.width;
  Gradient g{RealGrid::Zero(h, w), Eigen::ArrayXXi::Zero(h, w)};
  const double bin_width = std::numbers::pi / kUnsignedBins;

  for (int r = 0; r < h; ++r) {
    const int r0 = std::max(r - 1, 0);
    const int r1 = std::min(r + 1, h - 1);
    for (int c = 0; c < w; ++c) {
      const int c0 = std::max(c - 1, 0);
      const int c1 = std::min(c + 1, w - 1);
      double best = -1, gx = 0, gy = 0;
      // Color: keep the channel with the strongest gradient.
      for (int ch = 0; ch < patch.channels; ++ch) {
        const double dx = double(patch.at(r, c1, ch)) - double(patch.at(r, c0, ch));
        const double dy = double(patch.at(r1, c, ch)) - double(patch.at(r0, c, ch));
        const double m = dx * dx + dy * dy;
        if (m > best) {
          best = m;
          gx = dx;
          gy = dy;
        }
      }
      double theta = std::atan2(gy, gx);
      if (theta < 0) theta += 2 * std::numbers::pi;
      g.magnitude(r, c) = std::sqrt(best) / 255.0;
      g.bin(r, c) = static_cast<int>(std::floor(theta / bin_width + 0.5)) % kSignedBins;
    }
  }
  return g;
}

}  // namespace

FeatureMap<double> compute_hog(const Frame& patch, int cell_size) {
  patch.validate();
  if (cell_size < 1) throw InvalidInput("compute_hog: cell size must be positive");
  if (patch.height < cell_size || patch.width < cell_size)
    throw InvalidInput("compute_hog: patch " + std::to_string(patch.height) + "x" + std::to_string(patch.width) +
                       " is smaller than one " + std::to_string(cell_size) + "-pixel cell");

  const int gh = patch.height / cell_size;
  const int gw = patch.width / cell_size;
  const Gradient grad = compute_gradient(patch);

  std::vector<RealGrid> hist(kSignedBins, RealGrid::Zero(gh, gw));
  for (int r = 0; r < patch.height; ++r) {
    const double yp = (r + 0.5) / cell_size - 0.5;
    const int iy = static_cast<int>(std::floor(yp));
    const double fy = yp - iy;
    for (int c = 0; c < patch.width; ++c) {
      const double m = grad.magnitude(r, c);
      if (m == 0) continue;
      const double xp = (c + 0.5) / cell_size - 0.5;
      const int ix = static_cast<int>(std::floor(xp));
      const double fx = xp - ix;
      RealGrid& hb = hist[grad.bin(r, c)];
      const std::array<std::pair<int, double>, 2> ys{{{iy, 1 - fy}, {iy + 1, fy}}};
      const std::array<std::pair<int, double>, 2> xs{{{ix, 1 - fx}, {ix + 1, fx}}};
      for (const auto& [cy, wy] : ys) {
        if (cy < 0 || cy >= gh) continue;
        for (const auto& [cx, wx] : xs) {
          if (cx < 0 || cx >= gw) continue;
          hb(cy, cx) += m * wy * wx;
        }
      }
    }
  }

  RealGrid energy = RealGrid::Zero(gh, gw);
  for (int o = 0; o < kUnsignedBins; ++o) energy += (hist[o] + hist[o + kUnsignedBins]).square();

  auto clamped_energy = [&](int y, int x) {
    return energy(std::clamp(y, 0, gh - 1), std::clamp(x, 0, gw - 1));
  };

  std::vector<RealGrid> out(kHogChannels, RealGrid::Zero(gh, gw));
  for (int y = 0; y < gh; ++y) {
    for (int x = 0; x < gw; ++x) {
      std::array<double, 4> norm{};
      int k = 0;
      for (int dy : {-1, 0}) {
        for (int dx : {-1, 0}) {
          const double block = clamped_energy(y + dy, x + dx) + clamped_energy(y + dy + 1, x + dx) +
                               clamped_energy(y + dy, x + dx + 1) + clamped_energy(y + dy + 1, x + dx + 1);
          norm[k++] = 1.0 / std::sqrt(block + kNormEps);
        }
      }

      for (int o = 0; o < kSignedBins; ++o) {
        const double v = hist[o](y, x);
        double sensitive = 0;
        for (std::size_t i = 0; i < norm.size(); ++i) {
          const double t = std::min(v * norm[i], kHogTruncation);
          sensitive += t;
          out[kSignedBins + kUnsignedBins + i](y, x) += t / kSignedBins;
        }
        out[o](y, x) = sensitive / 4;
      }
      for (int o = 0; o < kUnsignedBins; ++o) {
        const double v = hist[o](y, x) + hist[o + kUnsignedBins](y, x);
        double insensitive = 0;
        for (double n : norm) insensitive += std::min(v * n, kHogTruncation);
        out[kSignedBins + o](y, x) = insensitive / 4;
      }
    }
  }
  return FeatureMap<double>(std::move(out), cell_size);
}

}  // namespace rcf
