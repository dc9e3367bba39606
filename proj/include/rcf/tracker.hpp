#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rcf/feature_map.hpp"
#include "rcf/features.hpp"
#include "rcf/learner.hpp"
#include "rcf/spectral.hpp"

namespace rcf {

struct TrackerParams {
  LearnerParams learner;
  double padding = 1.5;
  double interp_factor = 0.02;
  FeatureKind features = FeatureKind::Hog;
  int cell_size = 4;
  double kernel_sigma = 0.5;
  /// Label bandwidth in feature cells; <= 0 selects sqrt(gridH * gridW) / 16.
  double label_sigma = 0;
  /// Start each frame's alternation from the previous frame's error map.
  bool warm_start = false;

  void validate() const;
};

struct TrackerState {
  FeatureMap<double> model_template;
  ComplexSpectrum model_filter;
  BoundingBox box;
  TrackerParams params;

  RealGrid window;
  RealGrid labels;
  /// Diagnostics of the most recent training call.
  RealGrid last_error;
  std::vector<double> last_objective_trace;
  int last_iterations = 0;

  int cell_size() const { return model_template.cell_size; }
};

struct Detection {
  BoundingBox box;
  double peak = 0;
  RealGrid response;
  /// Displacement in feature cells (row, column) after the wrap rule.
  int shift_rows = 0;
  int shift_cols = 0;
};

TrackerState init(const Frame& frame, const BoundingBox& box, const TrackerParams& params);

/// Windowed features of the padded patch centered on `box`, shaped like the model.
FeatureMap<double> sample_features(const TrackerState& state, const Frame& frame, const BoundingBox& box);

/// Response of the model filter to the candidate features `z`.
Detection detect_features(const TrackerState& state, const FeatureMap<double>& z);

Detection detect(const TrackerState& state, const Frame& frame);

/// Retrain at state.box on `frame` and blend the result into the model.
TrackerState update(const TrackerState& state, const Frame& frame);

/// Largest spatial magnitude of the model filter, max |idft2(alpha_hat)|.
double filter_peak(const TrackerState& state);

struct FrameRecord {
  BoundingBox box;
  double response_peak = 0;
  double filter_peak = 0;
  int train_iterations = 0;
};

using FrameSource = std::function<Frame(std::size_t index)>;

/// Called after each frame with the frame index and the updated state.
using FrameObserver = std::function<void(std::size_t index, const TrackerState&)>;

/// Initialize on frame 0, then detect + update on every later frame. The
/// first record carries the initial box and the self-response peak.
std::vector<FrameRecord> track_sequence(std::size_t frame_count, const FrameSource& frames,
                                        const BoundingBox& init_box, const TrackerParams& params,
                                        const FrameObserver& observer = {});

std::vector<FrameRecord> track_sequence(const std::vector<Frame>& frames, const BoundingBox& init_box,
                                        const TrackerParams& params);

}  // namespace rcf
