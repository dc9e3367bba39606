#include "rcf/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcf/errors.hpp"
#include "rcf/kernel.hpp"

namespace rcf {

void TrackerParams::validate() const {
  learner.validate();
  if (!(padding >= 1)) throw InvalidInput("TrackerParams: padding must be >= 1");
  if (!(interp_factor >= 0 && interp_factor <= 1)) throw InvalidInput("TrackerParams: interp_factor must be in [0,1]");
  if (cell_size < 1) throw InvalidInput("TrackerParams: cell_size must be positive");
  if (!(kernel_sigma > 0)) throw InvalidInput("TrackerParams: kernel_sigma must be positive");
}

namespace {

struct Trained {
  FeatureMap<double> features;
  TrainResult<double> result;
};

Trained train_at(const TrackerState& s, const Frame& frame, const std::optional<RealGrid>& warm) {
  FeatureMap<double> x = sample_features(s, frame, s.box);
  const auto k1 = gaussian_correlation(x, x, s.params.kernel_sigma);
  auto result = train(k1.k_hat, s.labels, s.params.learner, warm);
  return {std::move(x), std::move(result)};
}

void check_box_overlaps_frame(const Frame& frame, const BoundingBox& box) {
  const double x0 = std::max(box.x, 0.0);
  const double y0 = std::max(box.y, 0.0);
  const double x1 = std::min(box.x + box.w, static_cast<double>(frame.width));
  const double y1 = std::min(box.y + box.h, static_cast<double>(frame.height));
  if (!(x1 > x0 && y1 > y0)) throw InvalidInput("tracker init: box has zero area inside the frame");
}

}  // namespace

FeatureMap<double> sample_features(const TrackerState& state, const Frame& frame, const BoundingBox& box) {
  const Frame patch = extract_patch(frame, box, state.params.padding);
  return apply_window(compute_features(patch, state.params.features, state.params.cell_size), state.window);
}

TrackerState init(const Frame& frame, const BoundingBox& box, const TrackerParams& params) {
  params.validate();
  frame.validate();
  check_box_overlaps_frame(frame, box);

  const auto [ph, pw] = patch_size(box, params.padding);
  const auto [gh, gw] = feature_grid_size(ph, pw, params.features, params.cell_size);
  if (gh < 2 || gw < 2) throw InvalidInput("tracker init: feature grid smaller than 2x2");

  TrackerState s;
  s.box = box;
  s.params = params;
  s.window = cosine_window<double>(gh, gw);
  const double sigma_y = params.label_sigma > 0 ? params.label_sigma : default_label_sigma(gh, gw);
  s.labels = gaussian_labels<double>(gh, gw, sigma_y);

  Trained t = train_at(s, frame, std::nullopt);
  s.model_template = std::move(t.features);
  s.model_filter = std::move(t.result.alpha_hat);
  s.last_error = std::move(t.result.error);
  s.last_objective_trace.assign(t.result.objective_trace.begin(), t.result.objective_trace.end());
  s.last_iterations = t.result.iterations;
  return s;
}

Detection detect_features(const TrackerState& state, const FeatureMap<double>& z) {
  const auto kz = gaussian_correlation(state.model_template, z, state.params.kernel_sigma);
  Detection d;
  d.response = idft2(ComplexSpectrum(kz.k_hat * state.model_filter));

  Eigen::Index pu = 0, pv = 0;
  d.peak = d.response.maxCoeff(&pu, &pv);
  const Eigen::Index h = d.response.rows();
  const Eigen::Index w = d.response.cols();
  d.shift_rows = static_cast<int>(pu > h / 2 ? pu - h : pu);
  d.shift_cols = static_cast<int>(pv > w / 2 ? pv - w : pv);

  const double cell = state.cell_size();
  d.box = state.box.translated(d.shift_cols * cell, d.shift_rows * cell);
  return d;
}

Detection detect(const TrackerState& state, const Frame& frame) {
  Detection d = detect_features(state, sample_features(state, frame, state.box));
  // Keep the box center on the frame.
  const double cx = std::clamp(d.box.center_x(), 0.0, static_cast<double>(frame.width));
  const double cy = std::clamp(d.box.center_y(), 0.0, static_cast<double>(frame.height));
  d.box = d.box.translated(cx - d.box.center_x(), cy - d.box.center_y());
  return d;
}

TrackerState update(const TrackerState& state, const Frame& frame) {
  std::optional<RealGrid> warm;
  if (state.params.warm_start && state.last_error.size() == state.labels.size()) warm = state.last_error;
  Trained t = train_at(state, frame, warm);

  const double a = state.params.interp_factor;
  TrackerState next = state;
  next.model_template = blend(state.model_template, t.features, a);
  next.model_filter = (1 - a) * state.model_filter + a * t.result.alpha_hat;
  next.last_error = std::move(t.result.error);
  next.last_objective_trace.assign(t.result.objective_trace.begin(), t.result.objective_trace.end());
  next.last_iterations = t.result.iterations;
  return next;
}

double filter_peak(const TrackerState& state) { return idft2(state.model_filter).abs().maxCoeff(); }

std::vector<FrameRecord> track_sequence(std::size_t frame_count, const FrameSource& frames,
                                        const BoundingBox& init_box, const TrackerParams& params,
                                        const FrameObserver& observer) {
  if (frame_count == 0) throw InvalidInput("track_sequence: no frames");
  auto load = [&](std::size_t i) {
    try {
      return frames(i);
    } catch (const std::exception& e) {
      throw IngestionError("frame " + std::to_string(i + 1) + ": " + e.what());
    }
  };

  std::vector<FrameRecord> records;
  records.reserve(frame_count);

  const Frame first = load(0);
  TrackerState state = init(first, init_box, params);
  records.push_back({state.box, detect(state, first).peak, filter_peak(state), state.last_iterations});
  if (observer) observer(0, state);

  for (std::size_t i = 1; i < frame_count; ++i) {
    const Frame frame = load(i);
    const Detection d = detect(state, frame);
    state.box = d.box;
    state = update(state, frame);
    records.push_back({state.box, d.peak, filter_peak(state), state.last_iterations});
    if (observer) observer(i, state);
  }
  return records;
}

std::vector<FrameRecord> track_sequence(const std::vector<Frame>& frames, const BoundingBox& init_box,
                                        const TrackerParams& params) {
  return track_sequence(
      frames.size(), [&](std::size_t i) { return frames[i]; }, init_box, params);
}

}  // namespace rcf
