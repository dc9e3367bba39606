#include "rcf/verify/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rcf::verify {

Frame make_texture(int height, int width, std::uint64_t seed, int lo, int hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  RealGrid g(height, width);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = uni(rng);

  // Two passes of a 3x3 box blur give blob-like structure at a few pixels.
  for (int pass = 0; pass < 2; ++pass) {
    RealGrid b = RealGrid::Zero(height, width);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        double s = 0;
        int n = 0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr, cc = c + dc;
            if (rr < 0 || rr >= height || cc < 0 || cc >= width) continue;
            s += g(rr, cc);
            ++n;
          }
        }
        b(r, c) = s / n;
      }
    }
    g = b;
  }

  const double mn = g.minCoeff(), mx = g.maxCoeff();
  Frame f(height, width, 1);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double t = mx > mn ? (g(r, c) - mn) / (mx - mn) : 0.5;
      f.at(r, c) = static_cast<std::uint8_t>(std::lround(lo + t * (hi - lo)));
    }
  }
  return f;
}

SequenceSpec make_translation_sequence(const TranslationScene& s) {
  const Frame background = make_texture(s.scene_size, s.scene_size, s.seed + 1000, 96, 160);
  const Frame target = make_texture(s.target_size, s.target_size, s.seed, 0, 255);

  SequenceSpec spec;
  spec.name = s.name;
  for (int i = 0; i < s.frames; ++i) {
    const int x0 = static_cast<int>(std::lround(s.start_x + i * s.velocity_x));
    const int y0 = static_cast<int>(std::lround(s.start_y + i * s.velocity_y));
    Frame f = background;
    for (int r = 0; r < s.target_size; ++r) {
      for (int c = 0; c < s.target_size; ++c) {
        const int rr = y0 + r, cc = x0 + c;
        if (rr < 0 || rr >= f.height || cc < 0 || cc >= f.width) continue;
        f.at(rr, cc) = target.at(r, c);
      }
    }
    spec.frames.push_back(std::move(f));
    spec.ground_truth.push_back({static_cast<double>(x0), static_cast<double>(y0), static_cast<double>(s.target_size),
                                 static_cast<double>(s.target_size)});
  }
  return spec;
}

SequenceSpec make_static_sequence(int frames, std::uint64_t seed) {
  TranslationScene s;
  s.frames = frames;
  s.velocity_x = 0;
  s.velocity_y = 0;
  s.start_x = 32;
  s.seed = seed;
  s.name = "static";
  return make_translation_sequence(s);
}

}  // namespace rcf::verify
