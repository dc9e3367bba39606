#pragma once

// Property checks pairing each fast path with its direct oracle. Shared by
// the `selftest` command and the test suites.

#include <cstdint>
#include <string>
#include <vector>

#include "rcf/robust_loss.hpp"
#include "rcf/tracker.hpp"

namespace rcf::verify {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct CheckConfig {
  std::uint64_t seed = 0;
  /// Added to the implementation-side value before comparison; a nonzero
  /// value must make the check fail (negative control).
  double perturbation = 0;
};

PropertyResult check_fft_roundtrip(int instances, const CheckConfig& cfg = {});
PropertyResult check_fft_against_naive(int instances, const CheckConfig& cfg = {});
PropertyResult check_parseval(int instances, const CheckConfig& cfg = {});
PropertyResult check_circulant_eigenvalues(int instances, const CheckConfig& cfg = {});
PropertyResult check_dense_solve(int instances, const CheckConfig& cfg = {});
PropertyResult check_prox_l1(int pairs, const CheckConfig& cfg = {});
PropertyResult check_prox_l1l2(int pairs, const CheckConfig& cfg = {});
PropertyResult check_prox_l21(int pairs, const CheckConfig& cfg = {});
struct DescentOptions {
  /// Apply the Hann taper to the random instance.
  bool windowed = false;
  /// <= 0 keeps the default tau.
  double tau = 0;
  /// Also fail when any instance hits max_iters before rel_tol.
  bool require_convergence = false;
};

/// Objective traces of train() on random single-channel instances with
/// intensities in [-0.5, 0.5] must be non-increasing (slack 1e-9).
PropertyResult check_descent(LossKind loss, int instances, int size, const CheckConfig& cfg = {},
                             const DescentOptions& options = {});
PropertyResult check_synthetic_tracking(LossKind loss, const CheckConfig& cfg = {});
PropertyResult check_sensitivity_example(const CheckConfig& cfg = {});

/// Grayscale tracker configuration used on the synthetic scenes.
TrackerParams synthetic_tracker_params(LossKind loss);

struct SelftestOptions {
  std::uint64_t seed = 0;
  /// Name of the property whose implementation value gets perturbed; empty for none.
  std::string perturb;
  double perturbation = 1e-3;
};

std::vector<PropertyResult> run_selftest(const SelftestOptions& options);

}  // namespace rcf::verify
