#pragma once

// Root-finding calibration of the Dirichlet concentration alpha so that the
// expected median of the mean-scaled weights hits a target (by default the
// asymptotic inclusion probability 1 - e^-1 of the ordinary bootstrap).

#include <cmath>
#include <utility>
#include <vector>

#include "mixent/errors.hpp"
#include "mixent/numkernel.hpp"
#include "mixent/weights.hpp"

namespace mixent {

struct CalibrationTarget {
  double target_median = 1.0 - std::exp(-1.0);
  std::size_t n = 1000;
  std::size_t n_mc = 4000;
  double lo = 0.5;
  double hi = 1.5;
  double tol = 1e-3;

  void validate() const {
    if (!(target_median > 0.0 && target_median < 1.0))
      throw DomainError("calibration: target median must lie in (0, 1)");
    if (n < 2) throw DomainError("calibration: n must be >= 2");
    if (n_mc < 1) throw DomainError("calibration: n_mc must be >= 1");
    if (!(lo > 0.0) || !(lo < hi)) throw DomainError("calibration: bracket must satisfy 0 < lo < hi");
    if (!(tol > 0.0)) throw DomainError("calibration: tol must be positive");
  }
};

/// Bisection on g(alpha) = E[median(w / alpha)] - target. Every evaluation
/// reuses the same random substreams (common random numbers), so the result
/// is a deterministic function of rng.
inline double calibrate_alpha(const CalibrationTarget& target, const RngStream& rng) {
  target.validate();
  auto g = [&](double alpha) {
    return expected_median_scaled(alpha, target.n, target.n_mc, rng) - target.target_median;
  };
  double lo = target.lo;
  double hi = target.hi;
  double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if ((g_lo > 0.0) == (g_hi > 0.0))
    throw DomainError("calibration: target is not bracketed (no sign change on [lo, hi])");
  while (hi - lo > target.tol) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// (alpha, E[median]) pairs on a grid, with the same common random numbers
/// as calibrate_alpha.
inline std::vector<std::pair<double, double>> calibration_curve(const std::vector<double>& alphas, std::size_t n,
                                                                std::size_t n_mc, const RngStream& rng) {
  std::vector<std::pair<double, double>> out;
  out.reserve(alphas.size());
  for (double a : alphas) out.emplace_back(a, expected_median_scaled(a, n, n_mc, rng));
  return out;
}

}  // namespace mixent
