#pragma once

// Gaussian mixture models: weighted EM and BIC selection over a family of
// parsimonious covariance structures.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixent/errors.hpp"
#include "mixent/numkernel.hpp"
#include "mixent/weights.hpp"

namespace mixent {

// ---------------------------------------------------------------------------
// Covariance structures

/// Subset of the mclust covariance family. Short names follow mclust
/// (E, V, EII, VII, VVI, EEE, VVV).
enum class CovarianceStructure {
  UnivariateEqual,
  UnivariateVarying,
  SphericalEqual,
  SphericalVarying,
  DiagonalVarying,
  FullEqual,
  FullVarying,
};

inline constexpr std::array kAllStructures = {
    CovarianceStructure::UnivariateEqual, CovarianceStructure::UnivariateVarying,
    CovarianceStructure::SphericalEqual,  CovarianceStructure::SphericalVarying,
    CovarianceStructure::DiagonalVarying, CovarianceStructure::FullEqual,
    CovarianceStructure::FullVarying,
};

constexpr std::string_view structure_name(CovarianceStructure s) noexcept {
  switch (s) {
    case CovarianceStructure::UnivariateEqual: return "E";
    case CovarianceStructure::UnivariateVarying: return "V";
    case CovarianceStructure::SphericalEqual: return "EII";
    case CovarianceStructure::SphericalVarying: return "VII";
    case CovarianceStructure::DiagonalVarying: return "VVI";
    case CovarianceStructure::FullEqual: return "EEE";
    case CovarianceStructure::FullVarying: return "VVV";
  }
  return "?";
}

inline CovarianceStructure parse_structure(std::string_view name) {
  for (auto s : kAllStructures)
    if (structure_name(s) == name) return s;
  throw DomainError("unknown covariance structure '" + std::string(name) + "'");
}

constexpr bool is_univariate(CovarianceStructure s) noexcept {
  return s == CovarianceStructure::UnivariateEqual || s == CovarianceStructure::UnivariateVarying;
}

/// Whether every component shares one covariance matrix.
constexpr bool is_equal_across_components(CovarianceStructure s) noexcept {
  return s == CovarianceStructure::UnivariateEqual || s == CovarianceStructure::SphericalEqual ||
         s == CovarianceStructure::FullEqual;
}

constexpr bool is_spherical(CovarianceStructure s) noexcept {
  return s == CovarianceStructure::SphericalEqual || s == CovarianceStructure::SphericalVarying;
}

constexpr bool is_diagonal(CovarianceStructure s) noexcept {
  return is_spherical(s) || s == CovarianceStructure::DiagonalVarying;
}

/// Free covariance parameters for G components in d dimensions.
constexpr int covariance_param_count(CovarianceStructure s, int G, int d) noexcept {
  const int full = d * (d + 1) / 2;
  switch (s) {
    case CovarianceStructure::UnivariateEqual: return 1;
    case CovarianceStructure::UnivariateVarying: return G;
    case CovarianceStructure::SphericalEqual: return 1;
    case CovarianceStructure::SphericalVarying: return G;
    case CovarianceStructure::DiagonalVarying: return G * d;
    case CovarianceStructure::FullEqual: return full;
    case CovarianceStructure::FullVarying: return G * full;
  }
  return 0;
}

/// Mixing proportions + means + covariances.
constexpr int free_param_count(CovarianceStructure s, int G, int d) noexcept {
  return (G - 1) + G * d + covariance_param_count(s, G, d);
}

// ---------------------------------------------------------------------------
// Mixture model

/// A fitted (or hand-built) G-component Gaussian mixture. Immutable once
/// constructed; the constructor validates the parameters and caches the
/// Cholesky factor of every covariance.
class MixtureModel {
 public:
  MixtureModel(Vector weights, std::vector<Vector> means, std::vector<Matrix> covariances,
               CovarianceStructure structure)
      : weights_(std::move(weights)),
        means_(std::move(means)),
        covariances_(std::move(covariances)),
        structure_(structure) {
    G_ = static_cast<int>(weights_.size());
    if (G_ < 1) throw DomainError("MixtureModel: at least one component required");
    if (static_cast<int>(means_.size()) != G_ || static_cast<int>(covariances_.size()) != G_)
      throw DimensionError("MixtureModel: component count mismatch");
    d_ = static_cast<int>(means_.front().size());
    if (d_ < 1) throw DimensionError("MixtureModel: dimension must be positive");
    if (is_univariate(structure_) && d_ != 1)
      throw DimensionError("MixtureModel: univariate structure with d > 1");
    double total = 0.0;
    for (int k = 0; k < G_; ++k) {
      if (!(weights_[k] > 0.0)) throw DomainError("MixtureModel: mixing weights must be positive");
      total += weights_[k];
      if (means_[k].size() != d_ || covariances_[k].rows() != d_ || covariances_[k].cols() != d_)
        throw DimensionError("MixtureModel: component dimension mismatch");
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("MixtureModel: mixing weights must sum to one");
    chol_.reserve(G_);
    log_det_.reserve(G_);
    for (const auto& cov : covariances_) {
      Eigen::LLT<Matrix> llt(cov);
      if (llt.info() != Eigen::Success) throw NumericalError("MixtureModel: covariance is not SPD");
      Matrix l = llt.matrixL();
      double ld = 0.0;
      for (int j = 0; j < d_; ++j) {
        if (!(l(j, j) > 0.0)) throw NumericalError("MixtureModel: covariance is not SPD");
        ld += 2.0 * std::log(l(j, j));
      }
      chol_.push_back(std::move(l));
      log_det_.push_back(ld);
    }
    n_params_ = free_param_count(structure_, G_, d_);
  }

  int d() const noexcept { return d_; }
  int G() const noexcept { return G_; }
  const Vector& weights() const noexcept { return weights_; }
  const std::vector<Vector>& means() const noexcept { return means_; }
  const std::vector<Matrix>& covariances() const noexcept { return covariances_; }
  CovarianceStructure structure() const noexcept { return structure_; }
  /// Lower Cholesky factor of component k's covariance.
  const Matrix& cholesky(int k) const noexcept { return chol_[k]; }
  double log_det(int k) const noexcept { return log_det_[k]; }

  double loglik() const noexcept { return loglik_; }
  int n_params() const noexcept { return n_params_; }
  double bic() const noexcept { return bic_; }
  /// Observation count used in the BIC penalty (0 when not fitted).
  std::size_t n_obs() const noexcept { return n_obs_; }

  /// Copy carrying fit statistics: bic = 2 loglik - n_params ln(n_obs).
  MixtureModel with_fit(double loglik, std::size_t n_obs) const {
    MixtureModel m(*this);
    m.loglik_ = loglik;
    m.n_obs_ = n_obs;
    m.bic_ = 2.0 * loglik - n_params_ * std::log(static_cast<double>(n_obs));
    return m;
  }

  /// n x G matrix of log(pi_k) + log phi(x_i; mu_k, Sigma_k).
  Matrix component_log_density(const Matrix& data) const {
    if (data.cols() != d_) throw DimensionError("data dimension does not match the model");
    const Eigen::Index n = data.rows();
    Matrix out(n, G_);
    for (int k = 0; k < G_; ++k) {
      const double c = std::log(weights_[k]) - 0.5 * (d_ * kLog2Pi + log_det_[k]);
      if (d_ == 1) {
        const double mu = means_[k][0];
        const double inv_sd = 1.0 / chol_[k](0, 0);
        out.col(k) = c - 0.5 * ((data.col(0).array() - mu) * inv_sd).square();
      } else {
        Matrix centered = (data.rowwise() - means_[k].transpose()).transpose();
        chol_[k].triangularView<Eigen::Lower>().solveInPlace(centered);
        out.col(k) = (c - 0.5 * centered.colwise().squaredNorm().array()).matrix().transpose();
      }
    }
    return out;
  }

  /// log f(x_i) for every row.
  Vector log_density(const Matrix& data) const {
    Matrix a = component_log_density(data);
    Vector m = a.rowwise().maxCoeff();
    return m.array() + (a.colwise() - m).array().exp().rowwise().sum().log();
  }

  /// n i.i.d. draws from the mixture.
  Matrix sample(std::size_t n, RngStream& rng) const {
    Matrix out(static_cast<Eigen::Index>(n), d_);
    Vector cumulative(G_);
    std::partial_sum(weights_.begin(), weights_.end(), cumulative.begin());
    Vector z(d_);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const double u = rng.uniform() * cumulative[G_ - 1];
      int k = 0;
      while (k < G_ - 1 && u > cumulative[k]) ++k;
      for (int j = 0; j < d_; ++j) z[j] = rng.normal();
      out.row(i) = (means_[k] + chol_[k] * z).transpose();
    }
    return out;
  }

 private:
  Vector weights_;
  std::vector<Vector> means_;
  std::vector<Matrix> covariances_;
  CovarianceStructure structure_;
  int G_ = 0;
  int d_ = 0;
  std::vector<Matrix> chol_;
  std::vector<double> log_det_;
  double loglik_ = std::numeric_limits<double>::quiet_NaN();
  int n_params_ = 0;
  double bic_ = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_obs_ = 0;
};

/// Conditional membership probabilities z_ik (n x G, rows sum to one).
struct Responsibilities {
  Matrix z;
};

struct EStepResult {
  Responsibilities resp;
  Vector log_density;  ///< log f(x_i) per observation
  double loglik = 0.0;  ///< sum of log_density
};

struct FitConfig {
  int max_iter = 500;
  double tol = 1e-6;  ///< relative log-likelihood change |dl| / (1 + |l|)
  int n_init = 5;
  /// Covariance floor as a multiple of the mean per-column data variance.
  /// Cholesky pivots (squared) below the floor count as a collapse.
  double reg_floor = 1e-8;
  std::vector<int> G_range = {1, 2, 3, 4, 5};
  std::vector<CovarianceStructure> structures = {CovarianceStructure::UnivariateEqual,
                                                 CovarianceStructure::UnivariateVarying};
  /// Fresh restarts tried after a bootstrap refit collapses, before G is
  /// reduced.
  int collapse_retries = 3;
  /// Largest G tried with FullVarying during selection (unset: no cap).
  std::optional<int> full_varying_max_G;

  void validate() const {
    if (max_iter < 1) throw DomainError("FitConfig: max_iter must be >= 1");
    if (!(tol > 0.0)) throw DomainError("FitConfig: tol must be > 0");
    if (n_init < 1) throw DomainError("FitConfig: n_init must be >= 1");
    if (!(reg_floor >= 0.0)) throw DomainError("FitConfig: reg_floor must be >= 0");
    if (collapse_retries < 0) throw DomainError("FitConfig: collapse_retries must be >= 0");
  }
};

/// Default candidate structures for data of dimension d.
inline std::vector<CovarianceStructure> default_structures(int d) {
  if (d == 1) return {CovarianceStructure::UnivariateEqual, CovarianceStructure::UnivariateVarying};
  return {CovarianceStructure::SphericalEqual, CovarianceStructure::SphericalVarying,
          CovarianceStructure::DiagonalVarying, CovarianceStructure::FullEqual,
          CovarianceStructure::FullVarying};
}

/// Mean of the per-column (unweighted, divisor n) variances.
inline double mean_column_variance(const Matrix& data) {
  if (data.rows() == 0) return 0.0;
  const Eigen::RowVectorXd mean = data.colwise().mean();
  return (data.rowwise() - mean).array().square().colwise().mean().mean();
}

inline double covariance_floor(const Matrix& data, const FitConfig& config) {
  return config.reg_floor * mean_column_variance(data);
}

// ---------------------------------------------------------------------------
// EM steps

inline EStepResult e_step(const MixtureModel& model, const Matrix& data) {
  Matrix a = model.component_log_density(data);
  Vector m = a.rowwise().maxCoeff();
  a = (a.colwise() - m).array().exp().matrix();
  Vector s = a.rowwise().sum();
  a.array().colwise() /= s.array();
  EStepResult out;
  out.log_density = m.array() + s.array().log();
  out.loglik = out.log_density.sum();
  if (!std::isfinite(out.loglik)) throw NumericalError("e_step: non-finite log-likelihood");
  out.resp.z = std::move(a);
  return out;
}

namespace detail {

inline void check_weights(const Matrix& data, const WeightVector& w) {
  if (static_cast<Eigen::Index>(w.size()) != data.rows())
    throw DimensionError("weight vector length does not match the number of observations");
}

/// Cholesky-pivot test against the floor; throws CollapseError.
inline void check_covariance(const Matrix& cov, double floor) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw CollapseError("component covariance became singular");
  const Matrix& l = llt.matrixLLT();
  for (Eigen::Index j = 0; j < cov.rows(); ++j) {
    const double pivot = l(j, j);
    if (!(pivot > 0.0) || !(pivot * pivot >= floor) || !std::isfinite(pivot))
      throw CollapseError("component covariance fell below the floor");
  }
}

}  // namespace detail

/// Maximizes the weighted complete-data log-likelihood given z, then projects
/// the covariances onto the declared structure. Components whose weighted
/// mass sum_i w_i z_ik falls below mass_floor, or whose covariance falls
/// below cov_floor, raise CollapseError.
inline MixtureModel m_step_weighted(const Responsibilities& resp, const Matrix& data,
                                    const WeightVector& w, CovarianceStructure structure,
                                    double cov_floor = 0.0, double mass_floor = 0.0) {
  detail::check_weights(data, w);
  const Matrix& z = resp.z;
  if (z.rows() != data.rows()) throw DimensionError("m_step: responsibilities/data row mismatch");
  const int G = static_cast<int>(z.cols());
  const int d = static_cast<int>(data.cols());
  if (is_univariate(structure) && d != 1) throw DimensionError("univariate structure requires d = 1");

  const Matrix omega = z.array().colwise() * w.as_eigen().array();
  const Eigen::RowVectorXd nk = omega.colwise().sum();
  const double total = nk.sum();
  if (!(total > 0.0)) throw DomainError("m_step: weights are all zero");
  const double floor_mass = std::max(mass_floor, 1e-10 * total);
  for (int k = 0; k < G; ++k)
    if (!(nk[k] > floor_mass)) throw CollapseError("mixture component lost its mass");

  Vector pi = (nk / total).transpose();
  pi /= pi.sum();
  std::vector<Vector> means(G);
  std::vector<Matrix> scatter(G);
  for (int k = 0; k < G; ++k) {
    means[k] = (data.transpose() * omega.col(k)) / nk[k];
    const Matrix centered = data.rowwise() - means[k].transpose();
    Matrix s = centered.transpose() * (centered.array().colwise() * omega.col(k).array()).matrix();
    scatter[k] = 0.5 * (s + s.transpose());
  }

  std::vector<Matrix> covs(G);
  auto pooled = [&] {
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& s : scatter) sum += s;
    return Matrix(sum / total);
  };
  switch (structure) {
    case CovarianceStructure::UnivariateEqual:
    case CovarianceStructure::FullEqual: {
      const Matrix shared = pooled();
      std::fill(covs.begin(), covs.end(), shared);
      break;
    }
    case CovarianceStructure::UnivariateVarying:
    case CovarianceStructure::FullVarying:
      for (int k = 0; k < G; ++k) covs[k] = scatter[k] / nk[k];
      break;
    case CovarianceStructure::SphericalEqual: {
      double trace = 0.0;
      for (const auto& s : scatter) trace += s.trace();
      const Matrix shared = Matrix::Identity(d, d) * (trace / (d * total));
      std::fill(covs.begin(), covs.end(), shared);
      break;
    }
    case CovarianceStructure::SphericalVarying:
      for (int k = 0; k < G; ++k) covs[k] = Matrix::Identity(d, d) * (scatter[k].trace() / (d * nk[k]));
      break;
    case CovarianceStructure::DiagonalVarying:
      for (int k = 0; k < G; ++k) {
        covs[k] = Matrix::Zero(d, d);
        covs[k].diagonal() = scatter[k].diagonal() / nk[k];
      }
      break;
  }
  for (const auto& c : covs) detail::check_covariance(c, cov_floor);
  return MixtureModel(std::move(pi), std::move(means), std::move(covs), structure);
}

/// Outcome of one EM run, with the weighted log-likelihood after every
/// M-step (trace[0] is the starting point).
struct EmResult {
  MixtureModel model;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

/// Weighted EM from a starting model. model.loglik() of the result is the
/// weighted log-likelihood sum_i w_i log f(x_i) at the returned parameters.
inline EmResult run_em(const Matrix& data, const WeightVector& w, const MixtureModel& start,
                       const FitConfig& config, double cov_floor) {
  detail::check_weights(data, w);
  if (data.cols() != start.d()) throw DimensionError("run_em: data dimension does not match the model");
  const auto wv = w.as_eigen();
  MixtureModel model = start;
  EStepResult e = e_step(model, data);
  double ll = wv.dot(e.log_density);
  std::vector<double> trace{ll};
  bool converged = false;
  int it = 0;
  while (it < config.max_iter) {
    ++it;
    MixtureModel next = m_step_weighted(e.resp, data, w, start.structure(), cov_floor);
    e = e_step(next, data);
    const double ll_next = wv.dot(e.log_density);
    if (!std::isfinite(ll_next)) throw NumericalError("run_em: non-finite log-likelihood");
    trace.push_back(ll_next);
    model = std::move(next);
    converged = std::abs(ll_next - ll) <= config.tol * (1.0 + std::abs(ll_next));
    ll = ll_next;
    if (converged) break;
  }
  return {model.with_fit(ll, static_cast<std::size_t>(data.rows())), it, converged, std::move(trace)};
}

namespace detail {

/// k-means++ seeding (selection probability proportional to w_i D_i^2)
/// followed by a hard assignment to the nearest seed.
inline Responsibilities kmeanspp_assignment(const Matrix& data, const WeightVector& w, int G, RngStream& rng) {
  const Eigen::Index n = data.rows();
  const auto wv = w.as_eigen();
  std::vector<Eigen::Index> centers;
  centers.reserve(G);
  Vector dist2 = Vector::Constant(n, std::numeric_limits<double>::infinity());

  auto pick = [&](const Vector& score) -> Eigen::Index {
    const double total = score.sum();
    if (!(total > 0.0) || !std::isfinite(total)) return -1;
    double u = rng.uniform() * total;
    Eigen::Index last_positive = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (score[i] <= 0.0) continue;
      last_positive = i;
      u -= score[i];
      if (u <= 0.0) return i;
    }
    return last_positive;
  };

  for (int k = 0; k < G; ++k) {
    const Eigen::Index c = k == 0 ? pick(wv) : pick((wv.array() * dist2.array()).matrix());
    if (c < 0) throw CollapseError("k-means++: fewer distinct points than components");
    centers.push_back(c);
    const Vector d2 = (data.rowwise() - data.row(c)).rowwise().squaredNorm();
    dist2 = dist2.cwiseMin(d2);
  }
  Responsibilities r{Matrix::Zero(n, G)};
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < G; ++k) {
      const double d2 = (data.row(i) - data.row(centers[k])).squaredNorm();
      if (d2 < best_d) {
        best_d = d2;
        best = k;
      }
    }
    r.z(i, best) = 1.0;
  }
  return r;
}

/// Rows (with their weights) in lexicographic order, so that fits started
/// from random seeds do not depend on the input row order.
inline std::pair<Matrix, WeightVector> canonical_order(const Matrix& data, const WeightVector& w) {
  const Eigen::Index n = data.rows();
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < data.cols(); ++j)
      if (data(a, j) != data(b, j)) return data(a, j) < data(b, j);
    return w[a] < w[b];
  });
  Matrix sorted(n, data.cols());
  std::vector<double> ws(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted.row(i) = data.row(idx[i]);
    ws[i] = w[idx[i]];
  }
  return {std::move(sorted), WeightVector(std::move(ws), Normalization::Raw)};
}

inline void check_fit_inputs(const Matrix& data, const WeightVector& w, int G, CovarianceStructure structure) {
  check_weights(data, w);
  if (data.cols() < 1) throw DimensionError("fit: data must have at least one column");
  if (G < 1) throw DomainError("fit: G must be >= 1");
  if (data.rows() <= G) throw DomainError("fit: need more observations than components");
  if (is_univariate(structure) && data.cols() != 1)
    throw DimensionError("fit: univariate structure requires one-dimensional data");
  if (!data.allFinite()) throw DataError("fit: data contains non-finite values");
}

inline MixtureModel fit_em_ordered(const Matrix& data, const WeightVector& w, int G, CovarianceStructure structure,
                                   const FitConfig& config, const RngStream& rng) {
  const double floor = covariance_floor(data, config);
  std::optional<MixtureModel> best;
  const int starts = G == 1 ? 1 : config.n_init;
  for (int s = 0; s < starts; ++s) {
    RngStream init_rng = rng.substream(static_cast<std::uint64_t>(s));
    try {
      const Responsibilities r0 = G == 1 ? Responsibilities{Matrix::Ones(data.rows(), 1)}
                                         : kmeanspp_assignment(data, w, G, init_rng);
      const MixtureModel start = m_step_weighted(r0, data, w, structure, floor);
      EmResult em = run_em(data, w, start, config, floor);
      if (!best || em.model.loglik() > best->loglik()) best = std::move(em.model);
    } catch (const NumericalError&) {
      // collapsed start; try the next one
    }
  }
  if (!best) throw CollapseError("fit_em: all initializations collapsed");
  return *best;
}

}  // namespace detail

/// Weighted EM for a fixed (G, structure), keeping the best of
/// config.n_init k-means++ starts by final weighted log-likelihood.
inline MixtureModel fit_em(const Matrix& data, const WeightVector& w, int G, CovarianceStructure structure,
                           const FitConfig& config, const RngStream& rng) {
  config.validate();
  detail::check_fit_inputs(data, w, G, structure);
  auto [sorted, ws] = detail::canonical_order(data, w);
  return detail::fit_em_ordered(sorted, ws, G, structure, config, rng);
}

/// Fits every (G, structure) candidate and returns the one with the largest
/// BIC = 2 loglik - n_params ln n. Ties go to fewer parameters, then
/// smaller G.
inline MixtureModel select_model(const Matrix& data, const WeightVector& w, const FitConfig& config,
                                 const RngStream& rng) {
  config.validate();
  if (config.G_range.empty() || config.structures.empty())
    throw DomainError("select_model: empty candidate set");
  detail::check_weights(data, w);
  if (!data.allFinite()) throw DataError("select_model: data contains non-finite values");
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::RowVectorXd var = (data.rowwise() - mean).array().square().colwise().mean();
  if ((var.array() <= 0.0).any()) throw DataError("degenerate data: a column has zero variance");

  auto [sorted, ws] = detail::canonical_order(data, w);
  std::optional<MixtureModel> best;
  std::string last_error = "no admissible candidate";
  for (auto structure : config.structures) {
    for (int G : config.G_range) {
      if (structure == CovarianceStructure::FullVarying && config.full_varying_max_G &&
          G > *config.full_varying_max_G)
        continue;
      if (is_univariate(structure) && data.cols() != 1) continue;
      const std::uint64_t tag = (static_cast<std::uint64_t>(structure) << 32) | static_cast<std::uint32_t>(G);
      try {
        detail::check_fit_inputs(sorted, ws, G, structure);
        MixtureModel m = detail::fit_em_ordered(sorted, ws, G, structure, config, rng.substream(tag));
        const bool better =
            !best || m.bic() > best->bic() ||
            (m.bic() == best->bic() &&
             (m.n_params() < best->n_params() || (m.n_params() == best->n_params() && m.G() < best->G())));
        if (better) best = std::move(m);
      } catch (const Error& e) {
        last_error = e.what();
      }
    }
  }
  if (!best) throw CollapseError("select_model: every candidate failed (" + last_error + ")");
  return *best;
}

/// Bootstrap refit outcome.
struct RefitResult {
  MixtureModel model;
  int collapse_events = 0;  ///< fresh restarts and G reductions used
};

/// Refits a fixed (G, structure) under new weights, starting from `start`.
/// On collapse, retries with fresh k-means++ starts up to
/// config.collapse_retries times, then drops one component and refits.
inline RefitResult refit_from(const Matrix& data, const WeightVector& w, const MixtureModel& start,
                              const FitConfig& config, const RngStream& rng) {
  const double floor = covariance_floor(data, config);
  try {
    return {run_em(data, w, start, config, floor).model, 0};
  } catch (const NumericalError&) {
  }
  int events = 1;
  FitConfig single = config;
  single.n_init = 1;
  for (int r = 0; r < config.collapse_retries; ++r, ++events) {
    try {
      return {detail::fit_em_ordered(data, w, start.G(), start.structure(), single, rng.substream(100 + r)),
              events};
    } catch (const NumericalError&) {
    }
  }
  for (int G = start.G() - 1; G >= 1; --G, ++events) {
    try {
      return {detail::fit_em_ordered(data, w, G, start.structure(), config, rng.substream(200 + G)), events};
    } catch (const NumericalError&) {
    }
  }
  throw CollapseError("refit: every fallback collapsed");
}

}  // namespace mixent
