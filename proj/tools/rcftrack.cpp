// rcftrack: run the robust correlation-filter tracker on image sequences,
// compare losses under impulse noise, and run the built-in oracle checks.
//
// Exit codes: 0 success, 1 usage/configuration error, 2 runtime error.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rcf/config.hpp"
#include "rcf/errors.hpp"
#include "rcf/eval.hpp"
#include "rcf/image_io.hpp"
#include "rcf/verify/selftest.hpp"
#include "rcf/verify/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<rcf::LossKind> parse_losses(const std::string& s) {
  std::vector<rcf::LossKind> out;
  for (const auto& name : split(s, ',')) {
    const auto k = rcf::parse_loss(name);
    if (!k) throw UsageError("unknown loss '" + name + "' (expected l2, l1, l1l2 or l21)");
    out.push_back(*k);
  }
  if (out.empty()) throw UsageError("no losses given");
  return out;
}

std::vector<double> parse_noise(const std::string& s) {
  std::vector<double> out{0.0};
  for (const auto& item : split(s, ',')) {
    double v = 0;
    try {
      v = std::stod(item);
    } catch (const std::exception&) {
      throw UsageError("bad noise fraction '" + item + "'");
    }
    if (!(v >= 0 && v <= 1)) throw UsageError("noise fraction out of [0,1]: " + item);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

struct CommonOptions {
  std::string sequence;
  std::string gt;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

rcf::RunConfig load_config(const CommonOptions& o, const nlohmann::json& overrides) {
  rcf::RunConfig cfg;
  try {
    if (!o.config.empty()) cfg = rcf::RunConfig::from_file(o.config);
    nlohmann::json layer = overrides;
    if (o.seed) layer["seed"] = *o.seed;
    if (!o.out.empty()) layer["output_dir"] = o.out;
    cfg.apply(layer);
  } catch (const rcf::InvalidInput& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void write_snapshot(const fs::path& dir, const rcf::RunConfig& cfg, const nlohmann::json& extra) {
  fs::create_directories(dir);
  nlohmann::json snap = cfg.to_json();
  std::ofstream out(dir / "config.json");
  out << snap.dump(2) << '\n';
  std::ofstream run(dir / "run.json");
  run << extra.dump(2) << '\n';
}

int threads_from_env() {
  if (const char* v = std::getenv("RCF_THREADS")) {
    const int n = std::atoi(v);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_optional(const std::optional<double>& v) { return v ? fmt17(*v) : std::string("nan"); }

rcf::EvalOptions eval_options(const rcf::RunConfig& cfg, double noise) {
  rcf::EvalOptions o;
  o.noise_fraction = noise;
  o.seed = cfg.seed;
  o.sensitivity_mode = cfg.sensitivity_mode;
  return o;
}

int cmd_track(const CommonOptions& o, const std::string& loss, const std::string& dump_dir) {
  if (!rcf::parse_loss(loss)) throw UsageError("unknown loss '" + loss + "'");
  const rcf::RunConfig cfg = load_config(o, {{"loss", loss}});
  const rcf::SequenceSpec spec = rcf::load_sequence(o.sequence, o.gt);

  rcf::EvalOptions opts = eval_options(cfg, 0.0);
  if (!dump_dir.empty()) opts.dump_dir = fs::path(dump_dir);
  const rcf::EvalReport report = rcf::run_eval(spec, cfg.tracker, opts);

  const fs::path out = cfg.output_dir;
  rcf::write_report(out, report);
  write_snapshot(out, cfg, {{"command", "track"}, {"sequence", o.sequence}, {"gt", o.gt}});
  std::cout << report.sequence << " loss=" << report.loss << " precision@20=" << report.precision_at_20
            << " success@0.5=" << report.success_at_05 << " auc=" << report.auc
            << " fps=" << report.fps << '\n';
  return 0;
}

int cmd_compare(const CommonOptions& o, const std::string& losses_arg, const std::string& noise_arg) {
  const auto losses = parse_losses(losses_arg);
  const auto noises = parse_noise(noise_arg);
  const rcf::RunConfig base = load_config(o, nlohmann::json::object());
  const rcf::SequenceSpec spec = rcf::load_sequence(o.sequence, o.gt);

  struct Cell {
    rcf::LossKind loss;
    double noise;
    rcf::EvalReport report;
    std::string error;
  };
  std::vector<Cell> cells;
  for (auto l : losses)
    for (double n : noises) cells.push_back({l, n, {}, {}});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      Cell& c = cells[i];
      rcf::TrackerParams params = base.tracker;
      params.learner.loss = c.loss;
      try {
        c.report = rcf::run_eval(spec, params, eval_options(base, c.noise));
      } catch (const std::exception& e) {
        c.error = e.what();
      }
    }
  };
  const int n_threads = std::min<int>(threads_from_env(), static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const auto& c : cells) {
    if (!c.error.empty()) throw rcf::Error(std::string(rcf::to_string(c.loss)) + " @ noise " + fmt17(c.noise) + ": " + c.error);
  }

  const fs::path out = base.output_dir;
  fs::create_directories(out);
  std::ofstream summary(out / "summary.csv");
  std::ofstream timing(out / "timing.csv");
  summary << "loss,noise,precision@20,success@0.5,auc,sensitivity_filter,sensitivity_response\n";
  timing << "loss,noise,fps\n";
  for (const auto& c : cells) {
    rcf::write_report(out, c.report);
    char noise[16];
    std::snprintf(noise, sizeof noise, "%.2f", c.noise);
    summary << c.report.loss << ',' << noise << ',' << fmt17(c.report.precision_at_20) << ','
            << fmt17(c.report.success_at_05) << ',' << fmt17(c.report.auc) << ','
            << fmt_optional(c.report.sensitivity_filter) << ',' << fmt_optional(c.report.sensitivity_response) << '\n';
    timing << c.report.loss << ',' << noise << ',' << fmt17(c.report.fps) << '\n';
  }
  write_snapshot(out, base,
                 {{"command", "compare"}, {"sequence", o.sequence}, {"gt", o.gt}, {"losses", losses_arg},
                  {"noise", noises}});
  std::cout << "wrote " << cells.size() << " reports and " << (out / "summary.csv").string() << '\n';
  return 0;
}

int cmd_selftest(std::uint64_t seed, const std::string& perturb) {
  rcf::verify::SelftestOptions opts;
  opts.seed = seed;
  opts.perturb = perturb;
  const auto results = rcf::verify::run_selftest(opts);
  bool all = true;
  bool perturbed_found = perturb.empty();
  for (const auto& r : results) {
    std::printf("[%s] %-32s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    all = all && r.passed;
    perturbed_found = perturbed_found || r.name == perturb;
  }
  if (!perturbed_found) throw UsageError("no property named '" + perturb + "'");
  std::printf("%s\n", all ? "selftest: all properties pass" : "selftest: FAILURES");
  return all ? 0 : kExitRuntime;
}

int cmd_synth(const std::string& out, int frames, double vx, double vy, std::uint64_t seed) {
  rcf::verify::TranslationScene scene;
  scene.frames = frames;
  scene.velocity_x = vx;
  scene.velocity_y = vy;
  scene.seed = seed;
  const auto spec = rcf::verify::make_translation_sequence(scene);
  const fs::path dir(out);
  fs::create_directories(dir / "img");
  std::ofstream gt(dir / "groundtruth_rect.txt");
  for (std::size_t i = 0; i < spec.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%04zu.png", i + 1);
    rcf::write_frame(dir / "img" / name, spec.frames[i]);
    const auto& b = spec.ground_truth[i];
    gt << b.x + 1 << ',' << b.y + 1 << ',' << b.w << ',' << b.h << '\n';
  }
  std::cout << "wrote " << spec.frames.size() << " frames to " << (dir / "img").string() << '\n';
  return 0;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool need_sequence) {
  auto* s = cmd->add_option("--sequence", o.sequence, "Directory of frames (sorted by file name)");
  auto* g = cmd->add_option("--gt", o.gt, "Ground-truth file, one 1-indexed x,y,w,h box per line");
  if (need_sequence) {
    s->required();
    g->required();
  }
  cmd->add_option("--config", o.config, "Flat JSON configuration file");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Seed for all randomness (default 0)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation-filter tracking with robust losses"};
  app.require_subcommand(1);

  CommonOptions track_opts;
  std::string loss = "l1";
  std::string dump_dir;
  auto* track = app.add_subcommand("track", "Track one sequence and write its report");
  add_common(track, track_opts, true);
  track->add_option("--loss", loss, "l2 | l1 | l1l2 | l21")->required();
  track->add_option("--dump-errors", dump_dir, "Write per-frame error maps and objective traces here");

  CommonOptions cmp_opts;
  std::string losses = "l2,l1,l1l2,l21";
  std::string noise;
  auto* compare = app.add_subcommand("compare", "Evaluate every loss x noise level");
  add_common(compare, cmp_opts, true);
  compare->add_option("--losses", losses, "Comma-separated losses");
  compare->add_option("--noise", noise, "Comma-separated corrupted-pixel fractions (0 is always included)");

  std::uint64_t st_seed = 0;
  std::string perturb;
  auto* selftest = app.add_subcommand("selftest", "Run the oracle property checks");
  selftest->add_option("--seed", st_seed);
  selftest->add_option("--perturb", perturb, "Perturb the named property (negative control)");

  std::string synth_out;
  int synth_frames = 30;
  double vx = 2, vy = 0;
  std::uint64_t synth_seed = 7;
  auto* synth = app.add_subcommand("synth", "Write a synthetic translating-texture sequence");
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--frames", synth_frames);
  synth->add_option("--vx", vx);
  synth->add_option("--vy", vy);
  synth->add_option("--seed", synth_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*track) return cmd_track(track_opts, loss, dump_dir);
    if (*compare) return cmd_compare(cmp_opts, losses, noise);
    if (*selftest) return cmd_selftest(st_seed, perturb);
    if (*synth) return cmd_synth(synth_out, synth_frames, vx, vy, synth_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
