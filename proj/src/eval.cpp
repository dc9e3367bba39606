#include "rcf/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "rcf/errors.hpp"
#include "rcf/image_io.hpp"

namespace rcf {

namespace fs = std::filesystem;

Frame SequenceSpec::frame(std::size_t i) const {
  if (!frames.empty()) return frames.at(i);
  return read_frame(frame_paths.at(i));
}

void SequenceSpec::validate() const {
  if (frame_count() == 0) throw IngestionError("sequence " + name + ": no frames");
  if (ground_truth.size() != frame_count())
    throw IngestionError("sequence " + name + ": " + std::to_string(frame_count()) + " frames but " +
                         std::to_string(ground_truth.size()) + " ground-truth boxes");
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    if (!(ground_truth[i].w >= 1 && ground_truth[i].h >= 1))
      throw IngestionError("sequence " + name + ": invalid ground-truth box for frame " + std::to_string(i + 1));
  }
}

std::vector<BoundingBox> parse_ground_truth(const std::string& text, const std::string& source) {
  std::vector<BoundingBox> boxes;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<double> v;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw IngestionError(source + ":" + std::to_string(line_no) + ": not a number: '" + tok + "'");
      }
    }
    if (v.empty()) continue;
    if (v.size() != 4)
      throw IngestionError(source + ":" + std::to_string(line_no) + ": expected 4 fields, got " +
                           std::to_string(v.size()));
    if (!(v[2] >= 1 && v[3] >= 1))
      throw IngestionError(source + ":" + std::to_string(line_no) + ": box width and height must be >= 1");
    boxes.push_back({v[0] - 1, v[1] - 1, v[2], v[3]});
  }
  return boxes;
}

std::vector<BoundingBox> read_ground_truth(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read ground-truth file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_ground_truth(buf.str(), path.string());
}

SequenceSpec load_sequence(const fs::path& dir, const fs::path& gt_path) {
  SequenceSpec spec;
  spec.name = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
  spec.ground_truth = read_ground_truth(gt_path);
  spec.frame_paths = list_images(dir);
  if (spec.frame_paths.size() != spec.ground_truth.size())
    throw IngestionError(gt_path.string() + ": " + std::to_string(spec.ground_truth.size()) + " boxes for " +
                         std::to_string(spec.frame_paths.size()) + " frames in " + dir.string());
  for (std::size_t i = 0; i < spec.frame_paths.size(); ++i) {
    std::ifstream probe(spec.frame_paths[i], std::ios::binary);
    if (!probe) throw IngestionError("frame " + std::to_string(i + 1) + " unreadable: " + spec.frame_paths[i].string());
  }
  spec.validate();
  return spec;
}

double cle(const BoundingBox& a, const BoundingBox& b) {
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

double overlap_ratio(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0 || ih <= 0) return 0;
  const double inter = iw * ih;
  return inter / (a.w * a.h + b.w * b.h - inter);
}

Curve precision_curve(const std::vector<double>& cles) {
  if (cles.empty()) throw InvalidInput("precision_curve: empty series");
  Curve c;
  for (int t = 0; t <= 50; ++t) {
    const double th = t;
    const auto hits = std::count_if(cles.begin(), cles.end(), [th](double e) { return e < th; });
    c.thresholds.push_back(th);
    c.values.push_back(static_cast<double>(hits) / static_cast<double>(cles.size()));
  }
  return c;
}

Curve success_curve(const std::vector<double>& ors) {
  if (ors.empty()) throw InvalidInput("success_curve: empty series");
  Curve c;
  for (int t = 0; t <= 50; ++t) {
    const double th = t / 50.0;
    const auto hits = std::count_if(ors.begin(), ors.end(), [th](double o) { return o > th; });
    c.thresholds.push_back(th);
    c.values.push_back(static_cast<double>(hits) / static_cast<double>(ors.size()));
  }
  return c;
}

double auc(const Curve& curve) {
  if (curve.values.empty()) throw InvalidInput("auc: empty curve");
  return std::accumulate(curve.values.begin(), curve.values.end(), 0.0) / static_cast<double>(curve.values.size());
}

double curve_at(const Curve& curve, double threshold) {
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    if (std::abs(curve.thresholds[i] - threshold) < 1e-12) return curve.values[i];
  }
  throw InvalidInput("curve_at: threshold not on the curve grid");
}

double sensitivity(const std::vector<double>& peaks, SensitivityNormalization mode) {
  if (peaks.size() < 2) throw InvalidInput("sensitivity: need at least two peaks");
  std::vector<double> p = peaks;
  if (mode == SensitivityNormalization::CenteredSumOfSquares) {
    const double m = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
    for (double& v : p) v -= m;
  }
  const double sq = std::inner_product(p.begin(), p.end(), p.begin(), 0.0);
  if (sq == 0) {
    // A constant series centers to zero: no deviation at all.
    if (mode == SensitivityNormalization::CenteredSumOfSquares &&
        std::any_of(peaks.begin(), peaks.end(), [](double v) { return v != 0; }))
      return 0;
    throw InvalidInput("sensitivity: undefined for an all-zero peak series");
  }
  for (double& v : p) v /= sq;
  const double mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
  double s = 0;
  for (double v : p) s += (v - mean) * (v - mean);
  return s;
}

Frame corrupt_pixels(const Frame& frame, double fraction, std::uint64_t seed, std::uint64_t frame_index) {
  frame.validate();
  if (!(fraction >= 0 && fraction <= 1)) throw InvalidInput("corrupt_pixels: fraction must be in [0,1]");
  const std::size_t n = frame.pixel_count();
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  Frame out = frame;
  if (count == 0) return out;

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(frame_index), static_cast<std::uint32_t>(frame_index >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` entries are a uniform sample without replacement.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
    const std::uint8_t value = (rng() & 1U) ? 255 : 0;
    const std::size_t p = idx[i];
    for (int ch = 0; ch < frame.channels; ++ch) out.pixels[p * frame.channels + ch] = value;
  }
  return out;
}

void compute_metrics(EvalReport& r, const std::vector<BoundingBox>& gt, SensitivityNormalization mode) {
  if (gt.size() != r.boxes.size()) throw InvalidInput("compute_metrics: ground truth and tracked boxes differ in count");
  r.cle.clear();
  r.overlap.clear();
  for (std::size_t i = 0; i < gt.size(); ++i) {
    r.cle.push_back(cle(r.boxes[i], gt[i]));
    r.overlap.push_back(overlap_ratio(r.boxes[i], gt[i]));
  }
  r.precision = precision_curve(r.cle);
  r.success = success_curve(r.overlap);
  r.auc = auc(r.success);
  r.precision_at_20 = curve_at(r.precision, 20);
  r.success_at_05 = curve_at(r.success, 0.5);

  auto safe_sensitivity = [mode](const std::vector<double>& p) -> std::optional<double> {
    try {
      return sensitivity(p, mode);
    } catch (const InvalidInput&) {
      return std::nullopt;
    }
  };
  r.sensitivity_filter = safe_sensitivity(r.filter_peaks);
  r.sensitivity_response = safe_sensitivity(r.response_peaks);
}

EvalReport run_eval(const SequenceSpec& spec, const TrackerParams& params, const EvalOptions& options) {
  spec.validate();
  if (options.dump_dir) fs::create_directories(*options.dump_dir);

  auto source = [&](std::size_t i) {
    Frame f = spec.frame(i);
    if (i > 0 && options.noise_fraction > 0) f = corrupt_pixels(f, options.noise_fraction, options.seed, i);
    return f;
  };
  FrameObserver observer;
  if (options.dump_dir) {
    observer = [&](std::size_t i, const TrackerState& s) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "frame%05zu", i + 1);
      write_grid_csv(*options.dump_dir / (std::string(stem) + ".error.csv"), s.last_error);
      std::ofstream trace(*options.dump_dir / (std::string(stem) + ".objective.csv"));
      trace.precision(17);
      trace << "iteration,objective\n";
      for (std::size_t k = 0; k < s.last_objective_trace.size(); ++k)
        trace << k + 1 << ',' << s.last_objective_trace[k] << '\n';
    };
  }

  const auto start = std::chrono::steady_clock::now();
  const auto records = track_sequence(spec.frame_count(), source, spec.ground_truth.front(), params, observer);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  EvalReport r;
  r.sequence = spec.name;
  r.loss = std::string(to_string(params.learner.loss));
  r.noise_fraction = options.noise_fraction;
  r.seed = options.seed;
  for (const auto& rec : records) {
    r.boxes.push_back(rec.box);
    r.filter_peaks.push_back(rec.filter_peak);
    r.response_peaks.push_back(rec.response_peak);
    r.train_iterations.push_back(rec.train_iterations);
  }
  r.fps = seconds > 0 ? static_cast<double>(records.size()) / seconds : 0;
  compute_metrics(r, spec.ground_truth, options.sensitivity_mode);
  return r;
}

namespace {

nlohmann::json curve_json(const Curve& c) { return {{"thresholds", c.thresholds}, {"values", c.values}}; }

Curve curve_from(const nlohmann::json& j) {
  return {j.at("thresholds").get<std::vector<double>>(), j.at("values").get<std::vector<double>>()};
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> optional_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& b : r.boxes) boxes.push_back({b.x, b.y, b.w, b.h});
  return {
      {"sequence", r.sequence},
      {"loss", r.loss},
      {"noise_fraction", r.noise_fraction},
      {"seed", r.seed},
      {"boxes", boxes},
      {"cle", r.cle},
      {"overlap", r.overlap},
      {"precision_curve", curve_json(r.precision)},
      {"success_curve", curve_json(r.success)},
      {"auc", r.auc},
      {"precision_at_20", r.precision_at_20},
      {"success_at_0.5", r.success_at_05},
      {"filter_peaks", r.filter_peaks},
      {"response_peaks", r.response_peaks},
      {"sensitivity_filter", optional_json(r.sensitivity_filter)},
      {"sensitivity_response", optional_json(r.sensitivity_response)},
      {"train_iterations", r.train_iterations},
      {"fps", r.fps},
  };
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.sequence = j.at("sequence").get<std::string>();
  r.loss = j.at("loss").get<std::string>();
  r.noise_fraction = j.at("noise_fraction").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& b : j.at("boxes"))
    r.boxes.push_back({b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()});
  r.cle = j.at("cle").get<std::vector<double>>();
  r.overlap = j.at("overlap").get<std::vector<double>>();
  r.precision = curve_from(j.at("precision_curve"));
  r.success = curve_from(j.at("success_curve"));
  r.auc = j.at("auc").get<double>();
  r.precision_at_20 = j.at("precision_at_20").get<double>();
  r.success_at_05 = j.at("success_at_0.5").get<double>();
  r.filter_peaks = j.at("filter_peaks").get<std::vector<double>>();
  r.response_peaks = j.at("response_peaks").get<std::vector<double>>();
  r.sensitivity_filter = optional_from(j.at("sensitivity_filter"));
  r.sensitivity_response = optional_from(j.at("sensitivity_response"));
  r.train_iterations = j.at("train_iterations").get<std::vector<int>>();
  r.fps = j.at("fps").get<double>();
  return r;
}

std::string report_stem(const std::string& sequence, const std::string& loss, double noise) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", noise);
  return sequence + "." + loss + "." + buf;
}

void write_curve_csv(const fs::path& path, const Curve& curve) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write " + path.string());
  out.precision(17);
  out << "threshold,value\n";
  for (std::size_t i = 0; i < curve.values.size(); ++i) out << curve.thresholds[i] << ',' << curve.values[i] << '\n';
}

void write_grid_csv(const fs::path& path, const RealGrid& grid) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write " + path.string());
  out.precision(17);
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) out << (c ? "," : "") << grid(r, c);
    out << '\n';
  }
}

void write_report(const fs::path& dir, const EvalReport& report) {
  fs::create_directories(dir);
  const std::string stem = report_stem(report.sequence, report.loss, report.noise_fraction);
  std::ofstream json(dir / (stem + ".json"));
  if (!json) throw IngestionError("cannot write " + (dir / (stem + ".json")).string());
  json << to_json(report).dump(2) << '\n';
  write_curve_csv(dir / (stem + ".precision.csv"), report.precision);
  write_curve_csv(dir / (stem + ".success.csv"), report.success);
}

}  // namespace rcf
