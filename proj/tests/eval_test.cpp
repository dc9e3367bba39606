#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "rcf/errors.hpp"
#include "rcf/eval.hpp"
#include "rcf/image_io.hpp"
#include "rcf/verify/selftest.hpp"
#include "rcf/verify/synthetic.hpp"
#include "test_support.hpp"

using namespace rcf;
using rcf::testing::Rng;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

fs::path make_sequence_dir(const std::string& name, int frames) {
  const fs::path dir = rcf::testing::scratch_dir(name);
  for (int i = 0; i < frames; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d.png", i + 1);
    write_frame(dir / buf, Frame(20, 30, 1, static_cast<std::uint8_t>(10 * i)));
  }
  return dir;
}

// Count-based curve oracles written independently of the implementation.
double fraction_below(const std::vector<double>& v, double t) {
  return static_cast<double>(std::count_if(v.begin(), v.end(), [t](double x) { return x < t; })) / v.size();
}
double fraction_above(const std::vector<double>& v, double t) {
  return static_cast<double>(std::count_if(v.begin(), v.end(), [t](double x) { return x > t; })) / v.size();
}

}  // namespace

TEST(GroundTruth, CommaAndWhitespaceForms) {
  const auto a = parse_ground_truth("10,20,30,40\n");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], (BoundingBox{9, 19, 30, 40}));
  const auto b = parse_ground_truth("10 20\t30 40\r\n11, 21 ,30,  40\n\n");
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], (BoundingBox{9, 19, 30, 40}));
  EXPECT_EQ(b[1], (BoundingBox{10, 20, 30, 40}));
}

TEST(GroundTruth, ErrorsNameTheLine) {
  try {
    parse_ground_truth("1,2,3,4\n1,2,x,4\n", "gt.txt");
    FAIL();
  } catch (const IngestionError& e) {
    EXPECT_NE(std::string(e.what()).find("gt.txt:2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_ground_truth("1,2,3\n"), IngestionError);
  EXPECT_THROW(parse_ground_truth("1,2,0,4\n"), IngestionError);
}

TEST(LoadSequence, ReadsFramesAndBoxes) {
  const fs::path dir = make_sequence_dir("load_ok", 3);
  write_text(dir / "gt.txt", "10,20,5,6\n11,20,5,6\n12,20,5,6\n");
  const SequenceSpec s = load_sequence(dir, dir / "gt.txt");
  EXPECT_EQ(s.frame_count(), 3u);
  EXPECT_EQ(s.ground_truth[2], (BoundingBox{11, 19, 5, 6}));
  EXPECT_EQ(s.frame(1).at(0, 0), 10);
}

TEST(LoadSequence, CountMismatchNamesFile) {
  const fs::path dir = make_sequence_dir("load_mismatch", 3);
  write_text(dir / "gt.txt", "10,20,5,6\n11,20,5,6\n");
  try {
    load_sequence(dir, dir / "gt.txt");
    FAIL();
  } catch (const IngestionError& e) {
    EXPECT_NE(std::string(e.what()).find("gt.txt"), std::string::npos) << e.what();
  }
}

TEST(LoadSequence, MissingGroundTruth) {
  const fs::path dir = make_sequence_dir("load_missing", 2);
  EXPECT_THROW(load_sequence(dir, dir / "absent.txt"), IngestionError);
}

TEST(Metrics, CenterError) {
  EXPECT_EQ(cle({0, 0, 10, 10}, {0, 0, 10, 10}), 0);
  EXPECT_DOUBLE_EQ(cle({0, 0, 10, 10}, {3, 4, 10, 10}), 5);
  Rng rng(30);
  for (int i = 0; i < 50; ++i) {
    const BoundingBox a{rcf::testing::random_real(rng, -50, 50), rcf::testing::random_real(rng, -50, 50), 10, 20};
    const BoundingBox b{rcf::testing::random_real(rng, -50, 50), rcf::testing::random_real(rng, -50, 50), 30, 4};
    EXPECT_NEAR(cle(a, b), std::hypot(a.x + 5 - b.x - 15, a.y + 10 - b.y - 2), 1e-12);
    EXPECT_DOUBLE_EQ(cle(a, b), cle(b, a));
  }
}

TEST(Metrics, Overlap) {
  EXPECT_DOUBLE_EQ(overlap_ratio({0, 0, 10, 10}, {0, 0, 10, 10}), 1);
  EXPECT_EQ(overlap_ratio({0, 0, 10, 10}, {20, 0, 10, 10}), 0);
  EXPECT_NEAR(overlap_ratio({0, 0, 20, 20}, {10, 0, 20, 20}), 1.0 / 3, 1e-15);
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const BoundingBox a{rcf::testing::random_real(rng, 0, 20), rcf::testing::random_real(rng, 0, 20),
                        rcf::testing::random_real(rng, 1, 20), rcf::testing::random_real(rng, 1, 20)};
    const BoundingBox b{rcf::testing::random_real(rng, 0, 20), rcf::testing::random_real(rng, 0, 20),
                        rcf::testing::random_real(rng, 1, 20), rcf::testing::random_real(rng, 1, 20)};
    const double o = overlap_ratio(a, b);
    EXPECT_GE(o, 0);
    EXPECT_LE(o, 1);
    EXPECT_DOUBLE_EQ(o, overlap_ratio(b, a));
  }
}

TEST(Curves, PerfectTracking) {
  const Curve p = precision_curve(std::vector<double>(10, 0.0));
  ASSERT_EQ(p.thresholds.size(), 51u);
  EXPECT_EQ(p.values[0], 0);
  for (std::size_t i = 1; i < p.values.size(); ++i) EXPECT_EQ(p.values[i], 1);
  const Curve s = success_curve(std::vector<double>(10, 1.0));
  ASSERT_EQ(s.thresholds.size(), 51u);
  EXPECT_EQ(s.values.back(), 0);
  EXPECT_DOUBLE_EQ(auc(s), 50.0 / 51);
  EXPECT_EQ(curve_at(s, 0.5), 1);
  EXPECT_EQ(curve_at(p, 20), 1);
  EXPECT_THROW(curve_at(p, 20.5), InvalidInput);
}

TEST(Curves, MatchCounting) {
  Rng rng(32);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> c, o;
    for (int k = 0; k < 37; ++k) {
      c.push_back(std::floor(rcf::testing::random_real(rng, 0, 60)));  // integers land on thresholds
      o.push_back(std::round(rcf::testing::random_real(rng, 0, 1) * 50) / 50);
    }
    const Curve p = precision_curve(c), s = success_curve(o);
    for (std::size_t t = 0; t < p.thresholds.size(); ++t) {
      EXPECT_EQ(p.thresholds[t], static_cast<double>(t));
      EXPECT_DOUBLE_EQ(p.values[t], fraction_below(c, p.thresholds[t]));
      if (t) EXPECT_GE(p.values[t], p.values[t - 1]);
    }
    for (std::size_t t = 0; t < s.thresholds.size(); ++t) {
      EXPECT_DOUBLE_EQ(s.values[t], fraction_above(o, s.thresholds[t]));
      if (t) EXPECT_LE(s.values[t], s.values[t - 1]);
    }
    double mean = 0;
    for (double v : s.values) mean += v;
    EXPECT_NEAR(auc(s), mean / 51, 1e-15);
  }
  EXPECT_THROW(precision_curve({}), InvalidInput);
  EXPECT_THROW(success_curve({}), InvalidInput);
}

TEST(Sensitivity, Examples) {
  EXPECT_LE(sensitivity({2.5, 2.5, 2.5, 2.5}), 1e-12);
  // p' = (0.12, 0.16), mean 0.14.
  EXPECT_NEAR(sensitivity({3, 4}), 8e-4, 1e-12);
  EXPECT_THROW(sensitivity({0, 0, 0}), InvalidInput);
  EXPECT_THROW(sensitivity({1}), InvalidInput);
  EXPECT_EQ(sensitivity({2, 2, 2}, SensitivityNormalization::CenteredSumOfSquares), 0);
  // Centered (−0.5, 0.5): norm 0.5, p' = (−1, 1), s = 2.
  EXPECT_NEAR(sensitivity({3, 4}, SensitivityNormalization::CenteredSumOfSquares), 2, 1e-12);
}

TEST(Sensitivity, NonNegativeAndPermutationInvariant) {
  Rng rng(33);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> p;
    for (int k = 0; k < rcf::testing::random_int(rng, 2, 30); ++k) p.push_back(rcf::testing::random_real(rng, 0.1, 5));
    const double s = sensitivity(p);
    EXPECT_GE(s, 0);
    std::shuffle(p.begin(), p.end(), rng);
    EXPECT_NEAR(sensitivity(p), s, 1e-15 + 1e-12 * s);
  }
}

TEST(Corrupt, ExactCountAndValues) {
  const Frame f(100, 100, 1, 128);
  const Frame c = corrupt_pixels(f, 0.1, 42, 3);
  int changed = 0;
  for (std::size_t i = 0; i < c.pixels.size(); ++i)
    if (c.pixels[i] != 128) {
      ++changed;
      EXPECT_TRUE(c.pixels[i] == 0 || c.pixels[i] == 255);
    }
  EXPECT_EQ(changed, 1000);
}

TEST(Corrupt, Extremes) {
  Rng rng(34);
  const Frame f = rcf::testing::random_frame(rng, 17, 23, 3);
  EXPECT_EQ(corrupt_pixels(f, 0, 1), f);
  const Frame all = corrupt_pixels(f, 1, 1);
  for (auto v : all.pixels) EXPECT_TRUE(v == 0 || v == 255);
  for (std::size_t p = 0; p < all.pixel_count(); ++p) {
    EXPECT_EQ(all.pixels[3 * p], all.pixels[3 * p + 1]);
    EXPECT_EQ(all.pixels[3 * p], all.pixels[3 * p + 2]);
  }
  EXPECT_THROW(corrupt_pixels(f, 1.5, 1), InvalidInput);
}

TEST(Corrupt, DeterministicPerSeedAndFrame) {
  Rng rng(35);
  const Frame f = rcf::testing::random_frame(rng, 40, 40);
  EXPECT_EQ(corrupt_pixels(f, 0.2, 9, 4), corrupt_pixels(f, 0.2, 9, 4));
  EXPECT_NE(corrupt_pixels(f, 0.2, 9, 4), corrupt_pixels(f, 0.2, 9, 5));
  EXPECT_NE(corrupt_pixels(f, 0.2, 9, 4), corrupt_pixels(f, 0.2, 10, 4));
  const Frame c = corrupt_pixels(f, 0.2, 9, 4);
  EXPECT_EQ(c.height, f.height);
  EXPECT_EQ(c.width, f.width);
}

TEST(RunEval, SyntheticSequence) {
  verify::TranslationScene sc;
  sc.frames = 10;
  const EvalReport r = run_eval(verify::make_translation_sequence(sc), verify::synthetic_tracker_params(LossKind::L2));
  EXPECT_EQ(r.boxes.size(), 10u);
  EXPECT_EQ(r.precision_at_20, 1);
  EXPECT_EQ(r.success_at_05, 1);
  ASSERT_TRUE(r.sensitivity_filter.has_value());
  EXPECT_EQ(r.loss, "l2");
}

TEST(RunEval, StaticSceneFilterPeaksAreStable) {
  for (LossKind loss : {LossKind::L2, LossKind::L21}) {
    const EvalReport r = run_eval(verify::make_static_sequence(6), verify::synthetic_tracker_params(loss));
    EXPECT_LE(*r.sensitivity_filter, 1e-6) << to_string(loss);
  }
}

TEST(RunEval, NoisyRunsRepeat) {
  verify::TranslationScene sc;
  sc.frames = 6;
  const SequenceSpec seq = verify::make_translation_sequence(sc);
  EvalOptions o;
  o.noise_fraction = 0.1;
  o.seed = 5;
  EvalReport a = run_eval(seq, verify::synthetic_tracker_params(LossKind::L2), o);
  EvalReport b = run_eval(seq, verify::synthetic_tracker_params(LossKind::L2), o);
  a.fps = b.fps = 0;
  EXPECT_EQ(a, b);
}

TEST(RunEval, DumpsPerFrameDiagnostics) {
  verify::TranslationScene sc;
  sc.frames = 3;
  EvalOptions o;
  o.dump_dir = rcf::testing::scratch_dir("dump");
  run_eval(verify::make_translation_sequence(sc), verify::synthetic_tracker_params(LossKind::L1), o);
  EXPECT_TRUE(fs::exists(*o.dump_dir / "frame00002.error.csv"));
  EXPECT_TRUE(fs::exists(*o.dump_dir / "frame00002.objective.csv"));
}

TEST(Report, JsonRoundTripAndFiles) {
  verify::TranslationScene sc;
  sc.frames = 4;
  const EvalReport r = run_eval(verify::make_translation_sequence(sc), verify::synthetic_tracker_params(LossKind::L1L2));
  EXPECT_EQ(report_from_json(nlohmann::json::parse(to_json(r).dump())), r);
  const fs::path dir = rcf::testing::scratch_dir("report");
  write_report(dir, r);
  const std::string stem = report_stem(r.sequence, r.loss, r.noise_fraction);
  EXPECT_EQ(stem, "synthetic.l1l2.0.00");
  for (const char* ext : {".json", ".precision.csv", ".success.csv"}) EXPECT_TRUE(fs::exists(dir / (stem + ext)));
}
