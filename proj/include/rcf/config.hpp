#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "rcf/eval.hpp"
#include "rcf/tracker.hpp"

namespace rcf {

/// Flat key-value run configuration. Layering: defaults, then a config file,
/// then command-line overrides; each layer is a JSON object applied with
/// `apply`. Unknown keys are rejected.
struct RunConfig {
  TrackerParams tracker;
  SensitivityNormalization sensitivity_mode = SensitivityNormalization::SumOfSquares;
  std::uint64_t seed = 0;
  std::string output_dir = "results";

  /// Applies the keys present in `layer`. When no layer has set tau, it
  /// tracks lambda.
  void apply(const nlohmann::json& layer);

  nlohmann::json to_json() const;

  static RunConfig from_file(const std::string& path);

 private:
  bool tau_set_ = false;
};

}  // namespace rcf
