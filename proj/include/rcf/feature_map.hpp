#pragma once

#include <Eigen/Core>

#include <vector>

#include "rcf/errors.hpp"
#include "rcf/spectral.hpp"

namespace rcf {

/// Multi-channel feature grid of one padded patch. All channels share the
/// same grid size; `cell_size` is the number of pixels covered by one cell.
template <typename Scalar>
struct FeatureMap {
  std::vector<Grid<Scalar>> channels;
  int cell_size = 1;

  FeatureMap() = default;
  FeatureMap(std::vector<Grid<Scalar>> ch, int cell) : channels(std::move(ch)), cell_size(cell) {
    validate();
  }

  Eigen::Index rows() const { return channels.empty() ? 0 : channels.front().rows(); }
  Eigen::Index cols() const { return channels.empty() ? 0 : channels.front().cols(); }
  Eigen::Index num_channels() const { return static_cast<Eigen::Index>(channels.size()); }
  Eigen::Index num_elements() const { return rows() * cols() * num_channels(); }

  Scalar squared_norm() const {
    Scalar s = 0;
    for (const auto& c : channels) s += c.square().sum();
    return s;
  }

  void validate() const {
    if (channels.empty()) throw InvalidInput("FeatureMap: no channels");
    for (const auto& c : channels) {
      if (c.rows() != rows() || c.cols() != cols())
        throw InvalidInput("FeatureMap: channels disagree on grid size");
    }
    if (rows() == 0 || cols() == 0) throw InvalidInput("FeatureMap: empty grid");
    if (cell_size < 1) throw InvalidInput("FeatureMap: cell size must be positive");
  }

  bool same_shape(const FeatureMap& o) const {
    return rows() == o.rows() && cols() == o.cols() && num_channels() == o.num_channels();
  }
};

/// Convex blend (1 - t) * a + t * b, channel-wise.
template <typename Scalar>
FeatureMap<Scalar> blend(const FeatureMap<Scalar>& a, const FeatureMap<Scalar>& b, Scalar t) {
  if (!a.same_shape(b)) throw InvalidInput("blend: feature maps differ in shape");
  FeatureMap<Scalar> out = a;
  for (std::size_t c = 0; c < out.channels.size(); ++c)
    out.channels[c] = (1 - t) * a.channels[c] + t * b.channels[c];
  return out;
}

}  // namespace rcf
