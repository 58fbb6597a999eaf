#pragma once

// Bootstrap replicate generation for the mixture entropy estimator
// (nonparametric, parametric, and weighted likelihood bootstrap) and the
// summaries built on the replicate distribution.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mixent/entropy.hpp"
#include "mixent/errors.hpp"
#include "mixent/gmm.hpp"
#include "mixent/numkernel.hpp"
#include "mixent/parallel.hpp"
#include "mixent/weights.hpp"

namespace mixent {

struct Nonparametric {};
struct Parametric {};
struct WLB {
  double alpha = 0.8137;
};

using BootstrapMethod = std::variant<Nonparametric, Parametric, WLB>;

inline constexpr double kCalibratedAlpha = 0.8137;

/// Short label used in reports: BS, PB, WLB(alpha).
inline std::string method_label(const BootstrapMethod& m) {
  if (std::holds_alternative<Nonparametric>(m)) return "BS";
  if (std::holds_alternative<Parametric>(m)) return "PB";
  char buf[48];
  std::snprintf(buf, sizeof buf, "WLB(%g)", std::get<WLB>(m).alpha);
  return buf;
}

/// Parses "bs", "pb" or "wlb" (case-insensitive); alpha applies to wlb.
inline BootstrapMethod parse_method(std::string name, double alpha = kCalibratedAlpha) {
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  if (name == "bs" || name == "nonparametric") return Nonparametric{};
  if (name == "pb" || name == "parametric") return Parametric{};
  if (name == "wlb") {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("WLB alpha must be positive");
    return WLB{alpha};
  }
  throw DomainError("unknown bootstrap method '" + name + "'");
}

struct BootstrapDistribution {
  double point_estimate = 0.0;
  std::vector<double> replicates;
  BootstrapMethod method = WLB{};
  int n_collapsed_retries = 0;  ///< replicates that needed a collapse fallback
  int n_failed = 0;             ///< replicates dropped after every fallback failed

  std::size_t B() const noexcept { return replicates.size(); }
};

enum class IntervalKind { Percentile, CenteredPercentile };

struct IntervalEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  IntervalKind kind = IntervalKind::Percentile;

  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
  double width() const noexcept { return upper - lower; }
};

struct BootstrapOptions {
  /// Re-run BIC selection on every replicate instead of holding (G, structure)
  /// at the base model.
  bool reselect = false;
  unsigned threads = 1;
  /// Replaces WLB weight generation (b, n) -> weights; a test hook.
  std::function<WeightVector(std::size_t, std::size_t)> weight_hook;
  /// Fraction of irrecoverably collapsed replicates tolerated.
  double max_failed_fraction = 0.10;
};

namespace detail {

struct ReplicateOutcome {
  std::optional<double> value;
  bool used_fallback = false;
};

inline ReplicateOutcome run_replicate(const Matrix& data, const MixtureModel& base, const BootstrapMethod& method,
                                      const FitConfig& config, const RngStream& rng, std::size_t b,
                                      const BootstrapOptions& options) {
  const auto n = static_cast<std::size_t>(data.rows());
  RngStream draw = rng.substream(0);
  const RngStream fit_rng = rng.substream(1);

  auto refit = [&](const Matrix& x, const WeightVector& w) -> RefitResult {
    if (options.reselect) {
      FitConfig c = config;
      c.structures = {base.structure()};
      return {select_model(x, w, c, fit_rng), 0};
    }
    return refit_from(x, w, base, config, fit_rng);
  };

  try {
    if (std::holds_alternative<WLB>(method)) {
      const WeightVector w = options.weight_hook
                                 ? options.weight_hook(b, n)
                                 : gen_weights(DirichletWLB{std::get<WLB>(method).alpha}, n, draw);
      const RefitResult r = refit(data, w);
      return {weighted_entropy_estimate(r.model, data, w), r.collapse_events > 0};
    }
    Matrix replicate_data;
    if (std::holds_alternative<Nonparametric>(method)) {
      replicate_data.resize(data.rows(), data.cols());
      for (Eigen::Index i = 0; i < data.rows(); ++i) replicate_data.row(i) = data.row(draw.below(n));
    } else {
      replicate_data = base.sample(n, draw);
    }
    const RefitResult r = refit(replicate_data, WeightVector::unit(n));
    return {entropy_estimate(r.model, replicate_data), r.collapse_events > 0};
  } catch (const NumericalError&) {
    return {std::nullopt, true};
  } catch (const DataError&) {
    return {std::nullopt, true};
  }
}

}  // namespace detail

/// B bootstrap replicates of the entropy estimate around base_model, which
/// must have been fitted on `data`. Replicate b draws only from
/// rng.substream(b), so the result does not depend on the thread count.
inline BootstrapDistribution bootstrap_entropy(const Matrix& data, const MixtureModel& base_model,
                                               const BootstrapMethod& method, std::size_t B, const FitConfig& config,
                                               const RngStream& rng, const BootstrapOptions& options = {}) {
  if (B < 1) throw DomainError("bootstrap_entropy: B must be >= 1");
  if (data.cols() != base_model.d()) throw DimensionError("bootstrap_entropy: data/model dimension mismatch");
  if (const auto* w = std::get_if<WLB>(&method); w && !(w->alpha > 0.0))
    throw DomainError("bootstrap_entropy: WLB alpha must be positive");
  config.validate();

  std::vector<detail::ReplicateOutcome> outcomes(B);
  parallel_for(B, options.threads, [&](std::size_t b) {
    outcomes[b] = detail::run_replicate(data, base_model, method, config, rng.substream(b), b, options);
  });

  BootstrapDistribution dist;
  dist.point_estimate = entropy_estimate(base_model, data);
  dist.method = method;
  dist.replicates.reserve(B);
  for (const auto& o : outcomes) {
    if (o.used_fallback) ++dist.n_collapsed_retries;
    if (o.value)
      dist.replicates.push_back(*o.value);
    else
      ++dist.n_failed;
  }
  if (static_cast<double>(dist.n_failed) > options.max_failed_fraction * static_cast<double>(B) ||
      dist.replicates.empty())
    throw NumericalError("bootstrap_entropy: too many replicates collapsed irrecoverably (" +
                         std::to_string(dist.n_failed) + " of " + std::to_string(B) + ")");
  return dist;
}

/// mean(replicates) - point_estimate.
inline double bootstrap_bias(const BootstrapDistribution& dist) {
  if (dist.replicates.empty()) throw DomainError("bootstrap_bias: no replicates");
  const double mean = std::accumulate(dist.replicates.begin(), dist.replicates.end(), 0.0) /
                      static_cast<double>(dist.replicates.size());
  return mean - dist.point_estimate;
}

/// Sample standard deviation of the replicates (divisor B - 1).
inline double bootstrap_se(const BootstrapDistribution& dist) {
  const std::size_t B = dist.replicates.size();
  if (B < 2) throw DomainError("bootstrap_se: need at least two replicates");
  const double mean = std::accumulate(dist.replicates.begin(), dist.replicates.end(), 0.0) / static_cast<double>(B);
  double ss = 0.0;
  for (double v : dist.replicates) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(B - 1));
}

namespace detail {

inline std::pair<double, double> tail_quantiles(const BootstrapDistribution& dist, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("interval level must lie in (0, 1)");
  if (dist.replicates.empty()) throw DomainError("interval: no replicates");
  std::vector<double> sorted = dist.replicates;
  std::sort(sorted.begin(), sorted.end());
  const double tail = (1.0 - level) / 2.0;
  return {quantile(sorted, tail), quantile(sorted, 1.0 - tail)};
}

}  // namespace detail

inline IntervalEstimate percentile_interval(const BootstrapDistribution& dist, double level) {
  const auto [lo, hi] = detail::tail_quantiles(dist, level);
  return {lo, hi, level, IntervalKind::Percentile};
}

/// Basic (centered) percentile interval: the percentile interval reflected
/// about the point estimate.
inline IntervalEstimate centered_percentile_interval(const BootstrapDistribution& dist, double level) {
  const auto [lo, hi] = detail::tail_quantiles(dist, level);
  return {2.0 * dist.point_estimate - hi, 2.0 * dist.point_estimate - lo, level, IntervalKind::CenteredPercentile};
}

}  // namespace mixent
