#include "rcf/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcf/errors.hpp"

namespace rcf {

Frame::Frame(int h, int w, int ch, std::uint8_t fill)
    : height(h), width(w), channels(ch), pixels(static_cast<std::size_t>(h) * w * ch, fill) {
  validate();
}

void Frame::validate() const {
  if (height < 1 || width < 1) throw InvalidInput("Frame: dimensions must be >= 1");
  if (channels != 1 && channels != 3) throw InvalidInput("Frame: expected 1 or 3 channels");
  if (pixels.size() != static_cast<std::size_t>(height) * width * channels)
    throw InvalidInput("Frame: pixel count does not match dimensions");
}

RealGrid to_gray(const Frame& f) {
  f.validate();
  RealGrid g(f.height, f.width);
  for (int r = 0; r < f.height; ++r) {
    for (int c = 0; c < f.width; ++c) {
      if (f.channels == 1) {
        g(r, c) = f.at(r, c);
      } else {
        g(r, c) = 0.299 * f.at(r, c, 0) + 0.587 * f.at(r, c, 1) + 0.114 * f.at(r, c, 2);
      }
    }
  }
  return g;
}

std::string_view to_string(FeatureKind k) { return k == FeatureKind::Hog ? "hog" : "gray"; }

std::optional<FeatureKind> parse_feature_kind(std::string_view s) {
  if (s == "hog") return FeatureKind::Hog;
  if (s == "gray" || s == "grayscale") return FeatureKind::Grayscale;
  return std::nullopt;
}

std::pair<int, int> patch_size(const BoundingBox& box, double padding) {
  if (!(padding >= 1)) throw InvalidInput("extract_patch: padding must be >= 1");
  if (!(box.w >= 1) || !(box.h >= 1)) throw InvalidInput("extract_patch: degenerate box");
  return {static_cast<int>(std::lround(padding * box.h)), static_cast<int>(std::lround(padding * box.w))};
}

Frame extract_patch(const Frame& frame, const BoundingBox& box, double padding) {
  frame.validate();
  const auto [ph, pw] = patch_size(box, padding);
  const double cx = std::clamp(box.center_x(), 0.0, static_cast<double>(frame.width));
  const double cy = std::clamp(box.center_y(), 0.0, static_cast<double>(frame.height));
  const int x0 = static_cast<int>(std::floor(cx - pw / 2.0));
  const int y0 = static_cast<int>(std::floor(cy - ph / 2.0));

  Frame out(ph, pw, frame.channels);
  for (int r = 0; r < ph; ++r) {
    const int sr = std::clamp(y0 + r, 0, frame.height - 1);
    for (int c = 0; c < pw; ++c) {
      const int sc = std::clamp(x0 + c, 0, frame.width - 1);
      for (int ch = 0; ch < frame.channels; ++ch) out.at(r, c, ch) = frame.at(sr, sc, ch);
    }
  }
  return out;
}

std::pair<int, int> feature_grid_size(int patch_h, int patch_w, FeatureKind kind, int cell_size) {
  if (kind == FeatureKind::Grayscale) return {patch_h, patch_w};
  if (cell_size < 1) throw InvalidInput("compute_features: cell size must be positive");
  return {patch_h / cell_size, patch_w / cell_size};
}

FeatureMap<double> compute_features(const Frame& patch, FeatureKind kind, int cell_size) {
  patch.validate();
  if (kind == FeatureKind::Hog) return compute_hog(patch, cell_size);

  RealGrid g = to_gray(patch) / 255.0;
  g -= g.mean();
  return FeatureMap<double>({std::move(g)}, 1);
}

FeatureMap<double> apply_window(const FeatureMap<double>& fm, const RealGrid& win) {
  fm.validate();
  if (win.rows() != fm.rows() || win.cols() != fm.cols())
    throw InvalidInput("apply_window: window is " + std::to_string(win.rows()) + "x" + std::to_string(win.cols()) +
                       ", feature grid is " + std::to_string(fm.rows()) + "x" + std::to_string(fm.cols()));
  FeatureMap<double> out = fm;
  for (auto& c : out.channels) c *= win;
  return out;
}

}  // namespace rcf
