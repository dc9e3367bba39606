#pragma once

#include <cstdint>
#include <string_view>
#include <optional>
#include <utility>
#include <vector>

#include "rcf/feature_map.hpp"
#include "rcf/spectral.hpp"

namespace rcf {

/// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
struct Frame {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  Frame() = default;
  Frame(int h, int w, int ch, std::uint8_t fill = 0);

  std::uint8_t& at(int r, int c, int ch = 0) {
    return pixels[(static_cast<std::size_t>(r) * width + c) * channels + ch];
  }
  std::uint8_t at(int r, int c, int ch = 0) const {
    return pixels[(static_cast<std::size_t>(r) * width + c) * channels + ch];
  }
  std::size_t pixel_count() const { return static_cast<std::size_t>(height) * width; }

  void validate() const;
  bool operator==(const Frame&) const = default;
};

/// Luma in [0, 255] per pixel (identity for single-channel frames).
RealGrid to_gray(const Frame& f);

/// Axis-aligned box in 0-indexed pixel coordinates (top-left corner + size).
struct BoundingBox {
  double x = 0;
  double y = 0;
  double w = 1;
  double h = 1;

  double center_x() const { return x + w / 2; }
  double center_y() const { return y + h / 2; }
  BoundingBox translated(double dx, double dy) const { return {x + dx, y + dy, w, h}; }
  bool operator==(const BoundingBox&) const = default;
};

enum class FeatureKind { Grayscale, Hog };

std::string_view to_string(FeatureKind k);
std::optional<FeatureKind> parse_feature_kind(std::string_view s);

inline constexpr int kHogChannels = 31;
inline constexpr double kHogTruncation = 0.2;

/// Patch of size (round(padding*h), round(padding*w)) centered on the box;
/// pixels outside the frame replicate the nearest edge pixel. A center lying
/// outside the frame is clamped onto it first.
Frame extract_patch(const Frame& frame, const BoundingBox& box, double padding);

/// Size of the patch extract_patch would produce.
std::pair<int, int> patch_size(const BoundingBox& box, double padding);

/// Grayscale: one channel, intensities in [0,1] minus their mean, one pixel
/// per cell (cell_size is ignored). Hog: 31-channel cell histograms on a
/// floor(H/cell) x floor(W/cell) grid.
FeatureMap<double> compute_features(const Frame& patch, FeatureKind kind, int cell_size);

/// 18 contrast-sensitive + 9 contrast-insensitive orientation channels and
/// 4 gradient-energy channels, each bounded by kHogTruncation.
FeatureMap<double> compute_hog(const Frame& patch, int cell_size);

FeatureMap<double> apply_window(const FeatureMap<double>& fm, const RealGrid& win);

/// Grid size compute_features yields for a patch of the given size.
std::pair<int, int> feature_grid_size(int patch_h, int patch_w, FeatureKind kind, int cell_size);

}  // namespace rcf
