#pragma once

// Resampling weights for the bootstrap schemes: multinomial counts for the
// ordinary nonparametric bootstrap and Gamma-generated Dirichlet weights for
// the weighted likelihood bootstrap.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "mixent/errors.hpp"
#include "mixent/numkernel.hpp"

namespace mixent {

enum class Normalization { SumToOne, SumToN, Raw };

/// Per-observation nonnegative weights. Construction validates the
/// nonnegativity and the declared normalization.
class WeightVector {
 public:
  WeightVector(std::vector<double> w, Normalization normalization)
      : w_(std::move(w)), normalization_(normalization) {
    validate();
  }

  static WeightVector unit(std::size_t n) { return {std::vector<double>(n, 1.0), Normalization::SumToN}; }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const noexcept { return w_[i]; }
  const std::vector<double>& values() const noexcept { return w_; }
  Normalization normalization() const noexcept { return normalization_; }
  double sum() const noexcept { return std::accumulate(w_.begin(), w_.end(), 0.0); }

  Eigen::Map<const Vector> as_eigen() const noexcept {
    return {w_.data(), static_cast<Eigen::Index>(w_.size())};
  }

  /// Copy scaled by c > 0; the normalization tag becomes Raw unless c == 1.
  WeightVector scaled(double c) const {
    if (!(c > 0.0)) throw DomainError("WeightVector::scaled: factor must be positive");
    std::vector<double> out(w_);
    for (double& v : out) v *= c;
    return {std::move(out), c == 1.0 ? normalization_ : Normalization::Raw};
  }

 private:
  void validate() const {
    if (w_.empty()) throw DomainError("WeightVector: empty");
    bool any_positive = false;
    for (double v : w_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("WeightVector: weights must be finite and nonnegative");
      any_positive = any_positive || v > 0.0;
    }
    if (!any_positive) throw DomainError("WeightVector: all weights are zero");
    const double s = sum();
    const double n = static_cast<double>(w_.size());
    if (normalization_ == Normalization::SumToOne && std::abs(s - 1.0) > 1e-12)
      throw DomainError("WeightVector: SumToOne weights do not sum to one");
    if (normalization_ == Normalization::SumToN && std::abs(s - n) > 1e-9 * n)
      throw DomainError("WeightVector: SumToN weights do not sum to n");
  }

  std::vector<double> w_;
  Normalization normalization_;
};

struct MultinomialBS {};

struct DirichletWLB {
  double alpha = 1.0;
};

using WeightScheme = std::variant<MultinomialBS, DirichletWLB>;

/// Independent Gamma(alpha, 1) draws rescaled by their realized mean so that
/// they sum to n.
inline std::vector<double> dirichlet_sum_to_n(double alpha, std::size_t n, RngStream& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& v : w) {
    v = gamma_sample(rng, alpha);
    total += v;
  }
  // A run of underflowed draws at tiny alpha can leave total == 0.
  if (!(total > 0.0)) {
    w.assign(n, 0.0);
    w[rng.below(n)] = static_cast<double>(n);
    return w;
  }
  const double scale = static_cast<double>(n) / total;
  for (auto& v : w) v *= scale;
  // Push the rounding residue into the largest entry so the sum is n.
  const double residue = static_cast<double>(n) - std::accumulate(w.begin(), w.end(), 0.0);
  *std::max_element(w.begin(), w.end()) += residue;
  return w;
}

/// Counts of n equiprobable draws over n cells (the row multiplicities of a
/// nonparametric bootstrap resample).
inline std::vector<double> multinomial_counts(std::size_t n, RngStream& rng) {
  std::vector<double> counts(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) counts[rng.below(n)] += 1.0;
  return counts;
}

inline WeightVector gen_weights(const WeightScheme& scheme, std::size_t n, RngStream& rng) {
  if (n == 0) throw DomainError("gen_weights: n must be at least 1");
  if (std::holds_alternative<MultinomialBS>(scheme))
    return {multinomial_counts(n, rng), Normalization::Raw};
  const double alpha = std::get<DirichletWLB>(scheme).alpha;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("gen_weights: Dirichlet alpha must be positive");
  return {dirichlet_sum_to_n(alpha, n, rng), Normalization::SumToN};
}

/// Monte Carlo estimate of E[median(w / alpha)] for w_i ~ Gamma(alpha, 1),
/// i = 1..n, averaged over n_mc replicates.
///
/// Every (replicate, observation) pair draws from its own substream of rng,
/// so calls with different alpha reuse the same underlying normals and
/// uniforms (common random numbers). This keeps the curve nearly smooth in
/// alpha, which the calibration bisection relies on.
inline double expected_median_scaled(double alpha, std::size_t n, std::size_t n_mc, const RngStream& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("expected_median_scaled: alpha must be positive");
  if (n < 2) throw DomainError("expected_median_scaled: n must be at least 2");
  if (n_mc < 1) throw DomainError("expected_median_scaled: n_mc must be at least 1");
  std::vector<double> w(n);
  double acc = 0.0;
  for (std::size_t r = 0; r < n_mc; ++r) {
    const RngStream rep = rng.substream(r);
    for (std::size_t i = 0; i < n; ++i) {
      RngStream cell = rep.substream(i);
      w[i] = gamma_sample(cell, alpha) / alpha;
    }
    acc += median_inplace(w);
  }
  return acc / static_cast<double>(n_mc);
}

}  // namespace mixent
