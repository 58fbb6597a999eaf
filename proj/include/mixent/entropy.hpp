#pragma once

// Mixture-based differential entropy (nats) and closed-form bounds for
// Gaussian mixtures.

#include <cmath>
#include <span>
#include <utility>

#include "mixent/errors.hpp"
#include "mixent/gmm.hpp"
#include "mixent/numkernel.hpp"
#include "mixent/weights.hpp"

namespace mixent {

struct EntropyEstimate {
  double value = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::size_t n_used = 0;
};

/// Entropy of N(., cov): d/2 (1 + ln 2 pi) + 1/2 ln|cov|.
inline double gaussian_entropy(int d, double log_det_cov) {
  return 0.5 * d * (1.0 + kLog2Pi) + 0.5 * log_det_cov;
}

/// Plug-in estimate -1/n sum_i log f(x_i; theta) evaluated on the fitting
/// data.
inline double entropy_estimate(const MixtureModel& model, const Matrix& data) {
  if (data.rows() == 0) throw DataError("entropy_estimate: empty data");
  return -model.log_density(data).mean();
}

/// -(1 / sum w) sum_i w_i log f(x_i); invariant to the weight normalization.
inline double weighted_entropy_estimate(const MixtureModel& model, const Matrix& data, const WeightVector& w) {
  if (static_cast<Eigen::Index>(w.size()) != data.rows())
    throw DimensionError("weighted_entropy_estimate: weight length mismatch");
  const double total = w.sum();
  if (!(total > 0.0)) throw DomainError("weighted_entropy_estimate: all weights are zero");
  return -w.as_eigen().dot(model.log_density(data)) / total;
}

/// Lower and upper entropy bounds for a Gaussian mixture (Huber et al.):
///   lower = -sum_k pi_k log sum_j pi_j phi(mu_k; mu_j, Sigma_k + Sigma_j)
///   upper = -sum_k pi_k log pi_k + sum_k pi_k H(N(mu_k, Sigma_k))
inline std::pair<double, double> entropy_bounds_gaussian(const MixtureModel& model) {
  const int G = model.G();
  const auto& pi = model.weights();
  double lower = 0.0;
  std::vector<double> terms(G);
  for (int k = 0; k < G; ++k) {
    for (int j = 0; j < G; ++j)
      terms[j] = std::log(pi[j]) +
                 mvn_logpdf(model.means()[k], model.means()[j], model.covariances()[k] + model.covariances()[j]);
    lower -= pi[k] * log_sum_exp(terms);
  }
  double upper = 0.0;
  for (int k = 0; k < G; ++k) upper += pi[k] * (gaussian_entropy(model.d(), model.log_det(k)) - std::log(pi[k]));
  return {lower, upper};
}

/// Upper bound for any finite mixture given its component entropies
/// (Wang & Madiman): -sum pi_k log pi_k + sum pi_k H_k.
inline double wang_madiman_upper(const MixtureModel& model, std::span<const double> component_entropies) {
  if (static_cast<int>(component_entropies.size()) != model.G())
    throw DimensionError("wang_madiman_upper: one entropy per component required");
  double h = 0.0;
  for (int k = 0; k < model.G(); ++k) {
    const double p = model.weights()[k];
    h += p * (component_entropies[k] - std::log(p));
  }
  return h;
}

inline EntropyEstimate estimate_entropy(const MixtureModel& model, const Matrix& data) {
  const auto [lo, hi] = entropy_bounds_gaussian(model);
  return {entropy_estimate(model, data), lo, hi, static_cast<std::size_t>(data.rows())};
}

}  // namespace mixent
