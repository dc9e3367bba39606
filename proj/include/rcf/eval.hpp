#pragma once

// Benchmark-style evaluation around the tracker: ground-truth ingestion,
// center-error / overlap metrics and their threshold curves, the filter-peak
// sensitivity statistic, impulse-noise corruption, and report emission.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcf/features.hpp"
#include "rcf/tracker.hpp"

namespace rcf {

struct SequenceSpec {
  std::string name;
  std::vector<std::filesystem::path> frame_paths;
  std::vector<BoundingBox> ground_truth;
  /// In-memory frames; when non-empty they are used instead of frame_paths.
  std::vector<Frame> frames;

  std::size_t frame_count() const { return frames.empty() ? frame_paths.size() : frames.size(); }
  Frame frame(std::size_t i) const;
  void validate() const;
};

/// Parse one box per line: x, y, w, h separated by commas and/or whitespace,
/// 1-indexed. Returned boxes are 0-indexed.
std::vector<BoundingBox> parse_ground_truth(const std::string& text, const std::string& source = "<text>");
std::vector<BoundingBox> read_ground_truth(const std::filesystem::path& path);

SequenceSpec load_sequence(const std::filesystem::path& dir, const std::filesystem::path& gt_path);

double cle(const BoundingBox& a, const BoundingBox& b);
double overlap_ratio(const BoundingBox& a, const BoundingBox& b);

struct Curve {
  std::vector<double> thresholds;
  std::vector<double> values;
  bool operator==(const Curve&) const = default;
};

/// Fraction of frames with CLE strictly below each threshold 0, 1, ..., 50 px.
Curve precision_curve(const std::vector<double>& cles);
/// Fraction of frames with OR strictly above each threshold 0, 0.02, ..., 1.
Curve success_curve(const std::vector<double>& ors);
/// Mean of the curve values over its threshold grid.
double auc(const Curve& curve);

/// Value of the curve at an exact grid threshold.
double curve_at(const Curve& curve, double threshold);

enum class SensitivityNormalization {
  /// p'_i = p_i / sum_j p_j^2.
  SumOfSquares,
  /// Center first, then divide by the squared norm of the centered series.
  CenteredSumOfSquares,
};

/// s = sum_i (p'_i - mean(p'))^2 over the normalized peak series.
double sensitivity(const std::vector<double>& peaks,
                   SensitivityNormalization mode = SensitivityNormalization::SumOfSquares);

/// Salt-and-pepper noise on round(fraction * pixel count) distinct pixels.
/// Deterministic in (seed, frame_index).
Frame corrupt_pixels(const Frame& frame, double fraction, std::uint64_t seed, std::uint64_t frame_index = 0);

struct EvalOptions {
  double noise_fraction = 0;
  std::uint64_t seed = 0;
  SensitivityNormalization sensitivity_mode = SensitivityNormalization::SumOfSquares;
  /// When set, per-frame objective traces and error maps are written here.
  std::optional<std::filesystem::path> dump_dir;
};

struct EvalReport {
  std::string sequence;
  std::string loss;
  double noise_fraction = 0;
  std::uint64_t seed = 0;

  std::vector<BoundingBox> boxes;
  std::vector<double> cle;
  std::vector<double> overlap;
  Curve precision;
  Curve success;
  double auc = 0;
  double precision_at_20 = 0;
  double success_at_05 = 0;

  std::vector<double> filter_peaks;
  std::vector<double> response_peaks;
  std::optional<double> sensitivity_filter;
  std::optional<double> sensitivity_response;
  std::vector<int> train_iterations;
  double fps = 0;

  bool operator==(const EvalReport&) const = default;
};

EvalReport run_eval(const SequenceSpec& spec, const TrackerParams& params, const EvalOptions& options = {});

/// Fill every derived field (curves, AUC, headline values, sensitivities)
/// from the per-frame series already present in the report.
void compute_metrics(EvalReport& report, const std::vector<BoundingBox>& ground_truth,
                     SensitivityNormalization mode);

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

/// "<sequence>.<loss>.<noise>" with noise printed to two decimals.
std::string report_stem(const std::string& sequence, const std::string& loss, double noise);

/// Writes <stem>.json, <stem>.precision.csv and <stem>.success.csv.
void write_report(const std::filesystem::path& dir, const EvalReport& report);

void write_curve_csv(const std::filesystem::path& path, const Curve& curve);

void write_grid_csv(const std::filesystem::path& path, const RealGrid& grid);

}  // namespace rcf
