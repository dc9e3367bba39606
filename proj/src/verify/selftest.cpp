#include "rcf/verify/selftest.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "rcf/eval.hpp"
#include "rcf/kernel.hpp"
#include "rcf/learner.hpp"
#include "rcf/spectral.hpp"
#include "rcf/verify/oracles.hpp"
#include "rcf/verify/synthetic.hpp"

namespace rcf::verify {

namespace {

using Rng = std::mt19937_64;

RealGrid random_grid(Rng& rng, Eigen::Index h, Eigen::Index w, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  RealGrid g(h, w);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = d(rng);
  return g;
}

FeatureMap<double> random_features(Rng& rng, Eigen::Index h, Eigen::Index w, int channels) {
  std::vector<RealGrid> ch;
  for (int c = 0; c < channels; ++c) ch.push_back(random_grid(rng, h, w));
  return FeatureMap<double>(std::move(ch), 1);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

PropertyResult timed(std::string name, const std::function<std::pair<bool, std::string>()>& body) {
  PropertyResult r;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::tie(r.passed, r.detail) = body();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::pair<bool, std::string> verdict(double worst, double tol, const std::string& what) {
  return {worst <= tol, what + " " + fmt(worst) + " (tolerance " + fmt(tol) + ")"};
}

}  // namespace

PropertyResult check_fft_roundtrip(int instances, const CheckConfig& cfg) {
  return timed("fft_roundtrip", [&] {
    Rng rng(cfg.seed + 1);
    std::uniform_int_distribution<int> dim(1, 24);
    double worst = 0;
    for (int i = 0; i < instances; ++i) {
      const RealGrid g = random_grid(rng, dim(rng), dim(rng), -10, 10);
      RealGrid back = idft2(dft2(g));
      back(0, 0) += cfg.perturbation;
      worst = std::max(worst, (back - g).abs().maxCoeff() / g.abs().maxCoeff());
    }
    return verdict(worst, 1e-10, "max relative roundtrip error");
  });
}

PropertyResult check_fft_against_naive(int instances, const CheckConfig& cfg) {
  return timed("fft_matches_naive_dft", [&] {
    Rng rng(cfg.seed + 2);
    double worst = 0;
    for (int i = 0; i < instances; ++i) {
      const RealGrid g = random_grid(rng, 8, 8);
      ComplexSpectrum fast = dft2(g);
      fast(1, 1) += cfg.perturbation;
      worst = std::max(worst, (fast - naive_dft2(g)).abs().maxCoeff());
    }
    return verdict(worst, 1e-10, "max deviation from direct summation");
  });
}

PropertyResult check_parseval(int instances, const CheckConfig& cfg) {
  return timed("parseval", [&] {
    Rng rng(cfg.seed + 3);
    std::uniform_int_distribution<int> dim(1, 32);
    double worst = 0;
    for (int i = 0; i < instances; ++i) {
      const RealGrid g = random_grid(rng, dim(rng), dim(rng));
      const double spatial = g.square().sum();
      const double spectral = dft2(g).abs2().sum() / static_cast<double>(g.size()) + cfg.perturbation;
      worst = std::max(worst, std::abs(spatial - spectral) / spatial);
    }
    return verdict(worst, 1e-9, "max relative energy mismatch");
  });
}

PropertyResult check_circulant_eigenvalues(int instances, const CheckConfig& cfg) {
  return timed("circulant_diagonalization", [&] {
    Rng rng(cfg.seed + 4);
    std::uniform_int_distribution<int> dim(2, 7);
    std::uniform_int_distribution<int> chans(1, 3);
    double worst = 0;
    for (int i = 0; i < instances; ++i) {
      const FeatureMap<double> a = random_features(rng, dim(rng), dim(rng), chans(rng));
      const double sigma = 0.5;
      const Eigen::MatrixXd k = build_explicit_kernel_matrix(a, sigma);
      Eigen::VectorXd dense = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k, Eigen::EigenvaluesOnly).eigenvalues();

      const ComplexSpectrum k_hat = gaussian_correlation(a, a, sigma).k_hat;
      worst = std::max(worst, k_hat.imag().abs().maxCoeff());
      Eigen::VectorXd spectral(k_hat.size());
      for (Eigen::Index j = 0; j < k_hat.size(); ++j) spectral(j) = k_hat.data()[j].real();
      spectral(0) += cfg.perturbation;
      std::sort(dense.data(), dense.data() + dense.size());
      std::sort(spectral.data(), spectral.data() + spectral.size());
      worst = std::max(worst, (dense - spectral).cwiseAbs().maxCoeff());
    }
    return verdict(worst, 1e-8, "max eigenvalue mismatch");
  });
}

PropertyResult check_dense_solve(int instances, const CheckConfig& cfg) {
  return timed("dense_circulant_solve", [&] {
    Rng rng(cfg.seed + 5);
    const double lambda = LearnerParams{}.lambda;
    const double sigma = 0.5;
    double worst = 0;
    for (int i = 0; i < instances; ++i) {
      const FeatureMap<double> x = random_features(rng, 8, 8, 1);
      const RealGrid y = gaussian_labels<double>(8, 8, default_label_sigma(8, 8));
      const RealGrid zero = RealGrid::Zero(8, 8);
      const ComplexSpectrum k_hat = gaussian_correlation(x, x, sigma).k_hat;
      RealGrid fast = idft2(solve_alpha(dft2(y), dft2(zero), k_hat, lambda));
      fast(0, 0) += cfg.perturbation;
      const RealGrid dense = dense_ridge_solve(build_explicit_kernel_matrix(x, sigma), y, zero, lambda);
      worst = std::max(worst, (fast - dense).abs().maxCoeff());
    }
    return verdict(worst, 1e-8, "max dual-coefficient error");
  });
}

namespace {

PropertyResult check_scalar_prox(const std::string& name, int pairs, const CheckConfig& cfg, std::uint64_t salt,
                                 const std::function<double(double, double)>& closed_form,
                                 const std::function<double(double, double, double)>& objective) {
  return timed(name, [&] {
    Rng rng(cfg.seed + salt);
    std::uniform_real_distribution<double> qd(-3, 3);
    std::uniform_real_distribution<double> td(0, 3);
    double worst = -1e300;
    for (int i = 0; i < pairs; ++i) {
      const double q = qd(rng);
      double tau = td(rng);
      while (tau == 0) tau = td(rng);
      const double e = closed_form(q, tau) + cfg.perturbation;
      const double best = grid_search_min([&](double t) { return objective(t, q, tau); }, -3 * std::abs(q),
                                          3 * std::abs(q), 1e-4);
      worst = std::max(worst, objective(e, q, tau) - best);
    }
    return verdict(worst, 1e-8, "worst excess over grid minimum");
  });
}

}  // namespace

PropertyResult check_prox_l1(int pairs, const CheckConfig& cfg) {
  return check_scalar_prox(
      "prox_l1", pairs, cfg, 6,
      [](double q, double tau) {
        RealGrid g(1, 1);
        g(0, 0) = q;
        return update_e_l1(g, tau)(0, 0);
      },
      [](double e, double q, double tau) { return (e - q) * (e - q) + tau * std::abs(e); });
}

PropertyResult check_prox_l1l2(int pairs, const CheckConfig& cfg) {
  return check_scalar_prox(
      "prox_l1l2", pairs, cfg, 7,
      [](double q, double tau) {
        RealGrid g(1, 1);
        g(0, 0) = q;
        return update_e_l1l2(g, tau)(0, 0);
      },
      [](double e, double q, double tau) { return (e - q) * (e - q) + tau * 0.5 * (std::abs(e) + e * e); });
}

PropertyResult check_prox_l21(int pairs, const CheckConfig& cfg) {
  return timed("prox_l21", [&] {
    Rng rng(cfg.seed + 8);
    std::uniform_int_distribution<int> len(1, 8);
    std::uniform_real_distribution<double> td(0, 3);
    std::uniform_real_distribution<double> scale(0, 1);
    double worst = -1e300;
    for (int i = 0; i < pairs; ++i) {
      const RealGrid q = random_grid(rng, len(rng), 1, -3, 3) * scale(rng);
      double tau = td(rng);
      while (tau == 0) tau = td(rng);
      const double qn = q.matrix().norm();
      if (qn == 0) continue;
      auto obj = [&](const RealGrid& e) { return (e - q).square().sum() + (2 / tau) * e.matrix().norm(); };

      RealGrid e = update_e_l21(q, tau);
      e(0, 0) += cfg.perturbation;
      const double best =
          grid_search_min([&](double t) { return obj(RealGrid(q * (t / qn))); }, 0, 3 * qn, 1e-4);
      worst = std::max(worst, obj(e) - best);
    }
    return verdict(worst, 1e-8, "worst excess over radial minimum");
  });
}

PropertyResult check_descent(LossKind loss, int instances, int size, const CheckConfig& cfg,
                             const DescentOptions& opt) {
  const bool windowed = opt.windowed;
  const double tau = opt.tau;
  const std::string name = std::string(windowed ? "descent_windowed_" : "descent_") + std::string(to_string(loss));
  return timed(name, [&]() -> std::pair<bool, std::string> {
    Rng rng(cfg.seed + 9 + static_cast<int>(loss));
    LearnerParams params;
    params.loss = loss;
    if (tau > 0) params.tau = tau;
    const RealGrid window = cosine_window<double>(size, size);
    const RealGrid y = gaussian_labels<double>(size, size, default_label_sigma(size, size));
    double worst_rise = 0;
    int max_iters = 0;
    int unconverged = 0;
    for (int i = 0; i < instances; ++i) {
      // Grayscale-range features: intensities in [-0.5, 0.5].
      FeatureMap<double> x = random_features(rng, size, size, 1);
      x.channels[0] *= 0.5;
      if (windowed) x.channels[0] *= window;
      auto r = train(x, y, params, 0.5);
      if (!r.objective_trace.empty()) r.objective_trace.back() += cfg.perturbation;
      for (std::size_t t = 1; t < r.objective_trace.size(); ++t)
        worst_rise = std::max(worst_rise, r.objective_trace[t] - r.objective_trace[t - 1]);
      if (cfg.perturbation != 0 && r.objective_trace.size() < 2) worst_rise = std::max(worst_rise, cfg.perturbation);
      max_iters = std::max(max_iters, r.iterations);
      if (!r.converged) ++unconverged;
    }
    const bool ok = worst_rise <= 1e-9 && (!opt.require_convergence || unconverged == 0);
    return {ok, "worst objective rise " + fmt(worst_rise) + " (slack 1e-9), max iterations " +
                    std::to_string(max_iters) + ", unconverged " + std::to_string(unconverged) + "/" +
                    std::to_string(instances)};
  });
}

TrackerParams synthetic_tracker_params(LossKind loss) {
  TrackerParams p;
  p.features = FeatureKind::Grayscale;
  p.cell_size = 1;
  p.learner.loss = loss;
  return p;
}

PropertyResult check_synthetic_tracking(LossKind loss, const CheckConfig& cfg) {
  return timed("synthetic_tracking_" + std::string(to_string(loss)), [&]() -> std::pair<bool, std::string> {
    const SequenceSpec seq = make_translation_sequence(TranslationScene{});
    EvalReport r = run_eval(seq, synthetic_tracker_params(loss), EvalOptions{0, cfg.seed});
    const double worst = *std::max_element(r.cle.begin(), r.cle.end()) + cfg.perturbation * 1e4;
    const bool ok = worst <= 2 && r.precision_at_20 == 1.0 && r.success_at_05 == 1.0;
    return {ok, "max CLE " + fmt(worst) + " px, precision@20 " + fmt(r.precision_at_20) + ", success@0.5 " +
                    fmt(r.success_at_05)};
  });
}

PropertyResult check_sensitivity_example(const CheckConfig& cfg) {
  return timed("sensitivity_metric", [&]() -> std::pair<bool, std::string> {
    const double s34 = sensitivity({3, 4}) + cfg.perturbation;
    const double sconst = sensitivity({2.5, 2.5, 2.5, 2.5, 2.5});
    const bool ok = std::abs(s34 - 8e-4) <= 1e-9 && sconst <= 1e-12;
    return {ok, "s(3,4) = " + fmt(s34) + ", s(constant) = " + fmt(sconst)};
  });
}

std::vector<PropertyResult> run_selftest(const SelftestOptions& o) {
  auto cfg = [&](const std::string& name) {
    return CheckConfig{o.seed, name == o.perturb ? o.perturbation : 0.0};
  };
  std::vector<PropertyResult> out;
  out.push_back(check_fft_roundtrip(50, cfg("fft_roundtrip")));
  out.push_back(check_fft_against_naive(10, cfg("fft_matches_naive_dft")));
  out.push_back(check_parseval(50, cfg("parseval")));
  out.push_back(check_circulant_eigenvalues(10, cfg("circulant_diagonalization")));
  out.push_back(check_dense_solve(20, cfg("dense_circulant_solve")));
  out.push_back(check_prox_l1(1000, cfg("prox_l1")));
  out.push_back(check_prox_l1l2(1000, cfg("prox_l1l2")));
  out.push_back(check_prox_l21(1000, cfg("prox_l21")));
  for (LossKind k : {LossKind::L2, LossKind::L1, LossKind::L1L2, LossKind::L21})
    out.push_back(check_descent(k, 10, 32, cfg("descent_" + std::string(to_string(k)))));
  for (LossKind k : {LossKind::L1, LossKind::L1L2})
    out.push_back(check_descent(k, 4, 32, cfg("descent_windowed_" + std::string(to_string(k))), {.windowed = true}));
  for (LossKind k : {LossKind::L2, LossKind::L1, LossKind::L1L2, LossKind::L21})
    out.push_back(check_synthetic_tracking(k, cfg("synthetic_tracking_" + std::string(to_string(k)))));
  out.push_back(check_sensitivity_example(cfg("sensitivity_metric")));
  return out;
}

}  // namespace rcf::verify
