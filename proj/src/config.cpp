#include "rcf/config.hpp"

#include <fstream>

#include "rcf/errors.hpp"

namespace rcf {

namespace {

template <typename T>
T get(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidInput("config: bad value for '" + key + "': " + j.dump());
  }
}

std::string_view to_string(SensitivityNormalization m) {
  return m == SensitivityNormalization::SumOfSquares ? "sum_of_squares" : "centered";
}

}  // namespace

void RunConfig::apply(const nlohmann::json& layer) {
  if (!layer.is_object()) throw InvalidInput("config: expected a flat JSON object");
  for (const auto& [key, v] : layer.items()) {
    auto& t = tracker;
    if (key == "lambda") {
      t.learner.lambda = get<double>(v, key);
    } else if (key == "tau") {
      t.learner.tau = get<double>(v, key);
      tau_set_ = true;
    } else if (key == "loss") {
      const auto loss = parse_loss(get<std::string>(v, key));
      if (!loss) throw InvalidInput("config: unknown loss " + v.dump());
      t.learner.loss = *loss;
    } else if (key == "max_iters") {
      t.learner.max_iters = get<int>(v, key);
    } else if (key == "rel_tol") {
      t.learner.rel_tol = get<double>(v, key);
    } else if (key == "padding") {
      t.padding = get<double>(v, key);
    } else if (key == "interp_factor") {
      t.interp_factor = get<double>(v, key);
    } else if (key == "features") {
      const auto kind = parse_feature_kind(get<std::string>(v, key));
      if (!kind) throw InvalidInput("config: unknown feature kind " + v.dump());
      t.features = *kind;
    } else if (key == "cell_size") {
      t.cell_size = get<int>(v, key);
    } else if (key == "kernel_sigma") {
      t.kernel_sigma = get<double>(v, key);
    } else if (key == "label_sigma") {
      t.label_sigma = get<double>(v, key);
    } else if (key == "warm_start") {
      t.warm_start = get<bool>(v, key);
    } else if (key == "sensitivity_normalization") {
      const auto s = get<std::string>(v, key);
      if (s == "sum_of_squares") sensitivity_mode = SensitivityNormalization::SumOfSquares;
      else if (s == "centered") sensitivity_mode = SensitivityNormalization::CenteredSumOfSquares;
      else throw InvalidInput("config: unknown sensitivity_normalization " + v.dump());
    } else if (key == "seed") {
      seed = get<std::uint64_t>(v, key);
    } else if (key == "output_dir") {
      output_dir = get<std::string>(v, key);
    } else {
      throw InvalidInput("config: unknown key '" + key + "'");
    }
  }
  if (!tau_set_) tracker.learner.tau = tracker.learner.lambda;
  tracker.validate();
}

nlohmann::json RunConfig::to_json() const {
  const auto& t = tracker;
  return {
      {"lambda", t.learner.lambda},
      {"tau", t.learner.tau},
      {"loss", std::string(rcf::to_string(t.learner.loss))},
      {"max_iters", t.learner.max_iters},
      {"rel_tol", t.learner.rel_tol},
      {"padding", t.padding},
      {"interp_factor", t.interp_factor},
      {"features", std::string(rcf::to_string(t.features))},
      {"cell_size", t.cell_size},
      {"kernel_sigma", t.kernel_sigma},
      {"label_sigma", t.label_sigma},
      {"warm_start", t.warm_start},
      {"sensitivity_normalization", std::string(to_string(sensitivity_mode))},
      {"seed", seed},
      {"output_dir", output_dir},
  };
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError("config file " + path + ": " + e.what());
  }
  RunConfig c;
  c.apply(j);
  return c;
}

}  // namespace rcf
