#pragma once

#include <cstdint>

#include "rcf/eval.hpp"
#include "rcf/features.hpp"

namespace rcf::verify {

/// Smooth random texture in [lo, hi], deterministic in `seed`.
Frame make_texture(int height, int width, std::uint64_t seed, int lo = 0, int hi = 255);

struct TranslationScene {
  int scene_size = 128;
  int target_size = 64;
  int frames = 30;
  double start_x = 2;
  double start_y = 32;
  double velocity_x = 2;
  double velocity_y = 0;
  std::uint64_t seed = 7;
  std::string name = "synthetic";
};

/// A textured square pasted at integer positions over a low-contrast
/// background. Ground truth is the pasted square in every frame.
SequenceSpec make_translation_sequence(const TranslationScene& scene);

/// Same scene with zero velocity.
SequenceSpec make_static_sequence(int frames = 10, std::uint64_t seed = 7);

}  // namespace rcf::verify
