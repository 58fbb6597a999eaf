#pragma once

// Simulation studies: data generators with closed-form entropies, the
// (distribution x method x n) experiment grid, and coverage aggregation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "mixent/entropy.hpp"
#include "mixent/errors.hpp"
#include "mixent/gmm.hpp"
#include "mixent/numkernel.hpp"
#include "mixent/parallel.hpp"
#include "mixent/resample.hpp"

namespace mixent {

// ---------------------------------------------------------------------------
// True distributions

struct GaussianDist {
  double mu = 0.0;
  double sigma = 1.0;
};
struct StudentTDist {
  double df = 3.0;
};
/// Equal mixture of N(-mu, sigma^2) and N(mu, sigma^2).
struct MixedGaussianDist {
  double mu = 2.0;
  double sigma = 1.0;
};
struct LaplaceDist {
  double mu = 0.0;
  double beta = 2.0;
};
struct BivariateGaussianDist {
  Eigen::Vector2d mean{0.0, 0.0};
  Eigen::Matrix2d cov{{1.0, 0.8}, {0.8, 2.0}};
};
/// d independent chi-square(df) coordinates.
struct IndepChiSqDist {
  double df = 5.0;
  int d = 10;
};

using TrueDistribution =
    std::variant<GaussianDist, StudentTDist, MixedGaussianDist, LaplaceDist, BivariateGaussianDist, IndepChiSqDist>;

inline int dimension(const TrueDistribution& dist) {
  if (std::holds_alternative<BivariateGaussianDist>(dist)) return 2;
  if (const auto* c = std::get_if<IndepChiSqDist>(&dist)) return c->d;
  return 1;
}

namespace detail {

inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

inline void validate(const TrueDistribution& dist) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GaussianDist> || std::is_same_v<T, MixedGaussianDist>) {
          check_positive(p.sigma, "sigma");
        } else if constexpr (std::is_same_v<T, StudentTDist>) {
          check_positive(p.df, "df");
        } else if constexpr (std::is_same_v<T, LaplaceDist>) {
          check_positive(p.beta, "beta");
        } else if constexpr (std::is_same_v<T, BivariateGaussianDist>) {
          Eigen::LLT<Eigen::Matrix2d> llt(p.cov);
          if (llt.info() != Eigen::Success || p.cov(0, 1) != p.cov(1, 0))
            throw DomainError("bivariate covariance must be SPD");
        } else {
          check_positive(p.df, "df");
          if (p.d < 1) throw DomainError("chi-square dimension must be >= 1");
        }
      },
      dist);
}

}  // namespace detail

/// Canonical text form, e.g. "t(3)"; parse_distribution reads it back.
inline std::string distribution_label(const TrueDistribution& dist) {
  using detail::fmt_num;
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GaussianDist>)
          return "gaussian(" + fmt_num(p.mu) + "," + fmt_num(p.sigma) + ")";
        else if constexpr (std::is_same_v<T, StudentTDist>)
          return "t(" + fmt_num(p.df) + ")";
        else if constexpr (std::is_same_v<T, MixedGaussianDist>)
          return "mixed_gaussian(" + fmt_num(p.mu) + "," + fmt_num(p.sigma) + ")";
        else if constexpr (std::is_same_v<T, LaplaceDist>)
          return "laplace(" + fmt_num(p.mu) + "," + fmt_num(p.beta) + ")";
        else if constexpr (std::is_same_v<T, BivariateGaussianDist>)
          return "bivariate_gaussian(" + fmt_num(p.mean[0]) + "," + fmt_num(p.mean[1]) + "," + fmt_num(p.cov(0, 0)) +
                 "," + fmt_num(p.cov(0, 1)) + "," + fmt_num(p.cov(1, 1)) + ")";
        else
          return "chisq(" + fmt_num(p.df) + "," + std::to_string(p.d) + ")";
      },
      dist);
}

/// Accepts a bare name (paper parameters) or name(p1,p2,...):
/// gaussian(mu,sigma), t(df), mixed_gaussian(mu,sigma), laplace(mu,beta),
/// bivariate_gaussian(m1,m2,s11,s12,s22), chisq(df,d).
inline TrueDistribution parse_distribution(const std::string& text) {
  static const std::regex re(R"(^\s*([A-Za-z_]+)\s*(?:\(([^)]*)\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw DomainError("unknown distribution '" + text + "'");
  const std::string name = m[1];
  std::vector<double> args;
  if (m[2].matched) {
    std::stringstream ss(m[2].str());
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        args.push_back(std::stod(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw DomainError("distribution '" + text + "': bad parameter '" + item + "'");
      }
    }
  }
  auto need = [&](std::size_t k) {
    if (!args.empty() && args.size() != k)
      throw DomainError("distribution '" + text + "' expects " + std::to_string(k) + " parameters");
    return !args.empty();
  };
  TrueDistribution out;
  if (name == "gaussian" || name == "normal") {
    GaussianDist g;
    if (need(2)) g = {args[0], args[1]};
    out = g;
  } else if (name == "t" || name == "student_t") {
    StudentTDist t;
    if (need(1)) t.df = args[0];
    out = t;
  } else if (name == "mixed_gaussian") {
    MixedGaussianDist g;
    if (need(2)) g = {args[0], args[1]};
    out = g;
  } else if (name == "laplace") {
    LaplaceDist l;
    if (need(2)) l = {args[0], args[1]};
    out = l;
  } else if (name == "bivariate_gaussian") {
    BivariateGaussianDist b;
    if (need(5)) {
      b.mean = {args[0], args[1]};
      b.cov << args[2], args[3], args[3], args[4];
    }
    out = b;
  } else if (name == "chisq" || name == "chi_squared") {
    IndepChiSqDist c;
    if (need(2)) {
      c.df = args[0];
      if (args[1] != std::floor(args[1])) throw DomainError("chisq dimension must be an integer");
      c.d = static_cast<int>(args[1]);
    }
    out = c;
  } else {
    throw DomainError("unknown distribution '" + name + "'");
  }
  detail::validate(out);
  return out;
}

/// Entropy of the two-component mixture 0.5 N(-a, 1) + 0.5 N(a, 1) minus
/// the entropy of N(0, 1), by composite Simpson quadrature.
inline double mixed_gaussian_excess(double a) {
  a = std::abs(a);
  const double lo = -a - 14.0;
  const double hi = a + 14.0;
  const int m = 40000;  // even
  const double h = (hi - lo) / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double x = lo + i * h;
    const double la = -0.5 * (x + a) * (x + a);
    const double lb = -0.5 * (x - a) * (x - a);
    const double mx = std::max(la, lb);
    const double logf = std::log(0.5) - 0.5 * kLog2Pi + mx + std::log(std::exp(la - mx) + std::exp(lb - mx));
    const double integrand = -std::exp(logf) * logf;
    const double coef = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += coef * integrand;
  }
  return acc * h / 3.0 - 0.5 * (1.0 + kLog2Pi);
}

/// Closed-form entropy (nats). The mixed-Gaussian excess term is rounded to
/// three decimals, the precision at which it is tabulated in the literature
/// (0.633 for mu / sigma = 2); the unrounded value is
/// mixed_gaussian_excess().
inline double true_entropy(const TrueDistribution& dist) {
  detail::validate(dist);
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GaussianDist>) {
          return gaussian_entropy(1, std::log(p.sigma * p.sigma));
        } else if constexpr (std::is_same_v<T, StudentTDist>) {
          const double a = p.df / 2.0;
          const double log_beta = log_gamma(a) + log_gamma(0.5) - log_gamma(a + 0.5);
          return (p.df + 1.0) / 2.0 * (digamma((p.df + 1.0) / 2.0) - digamma(a)) + 0.5 * std::log(p.df) + log_beta;
        } else if constexpr (std::is_same_v<T, MixedGaussianDist>) {
          const double excess = std::round(mixed_gaussian_excess(p.mu / p.sigma) * 1000.0) / 1000.0;
          return gaussian_entropy(1, std::log(p.sigma * p.sigma)) + excess;
        } else if constexpr (std::is_same_v<T, LaplaceDist>) {
          return 1.0 + std::log(2.0 * p.beta);
        } else if constexpr (std::is_same_v<T, BivariateGaussianDist>) {
          return gaussian_entropy(2, std::log(p.cov.determinant()));
        } else {
          const double k = p.df / 2.0;
          return p.d * (std::log(2.0) + log_gamma(k) + k + (1.0 - k) * digamma(k));
        }
      },
      dist);
}

/// Analytic log-density of every row.
inline Vector true_log_pdf(const TrueDistribution& dist, const Matrix& x) {
  if (x.cols() != dimension(dist)) throw DimensionError("true_log_pdf: dimension mismatch");
  Vector out(x.rows());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
          if constexpr (std::is_same_v<T, GaussianDist>) {
            const double z = (x(i, 0) - p.mu) / p.sigma;
            out[i] = -0.5 * kLog2Pi - std::log(p.sigma) - 0.5 * z * z;
          } else if constexpr (std::is_same_v<T, StudentTDist>) {
            const double v = p.df;
            out[i] = log_gamma((v + 1) / 2) - log_gamma(v / 2) - 0.5 * std::log(v * std::numbers::pi) -
                     (v + 1) / 2 * std::log1p(x(i, 0) * x(i, 0) / v);
          } else if constexpr (std::is_same_v<T, MixedGaussianDist>) {
            const double a = -0.5 * std::pow((x(i, 0) + p.mu) / p.sigma, 2);
            const double b = -0.5 * std::pow((x(i, 0) - p.mu) / p.sigma, 2);
            const double m = std::max(a, b);
            out[i] = std::log(0.5) - 0.5 * kLog2Pi - std::log(p.sigma) + m +
                     std::log(std::exp(a - m) + std::exp(b - m));
          } else if constexpr (std::is_same_v<T, LaplaceDist>) {
            out[i] = -std::log(2.0 * p.beta) - std::abs(x(i, 0) - p.mu) / p.beta;
          } else if constexpr (std::is_same_v<T, BivariateGaussianDist>) {
            out[i] = mvn_logpdf(x.row(i).transpose(), p.mean, p.cov);
          } else {
            const double k = p.df / 2.0;
            double s = 0.0;
            for (Eigen::Index j = 0; j < x.cols(); ++j) {
              const double v = x(i, j);
              s += (k - 1.0) * std::log(v) - v / 2.0 - k * std::log(2.0) - log_gamma(k);
            }
            out[i] = s;
          }
        }
      },
      dist);
  return out;
}

/// n i.i.d. draws (n x d).
inline Matrix sample(const TrueDistribution& dist, std::size_t n, RngStream& rng) {
  detail::validate(dist);
  const int d = dimension(dist);
  Matrix out(static_cast<Eigen::Index>(n), d);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        [[maybe_unused]] Eigen::Matrix2d l;
        if constexpr (std::is_same_v<T, BivariateGaussianDist>) l = p.cov.llt().matrixL();
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
          if constexpr (std::is_same_v<T, GaussianDist>) {
            out(i, 0) = p.mu + p.sigma * rng.normal();
          } else if constexpr (std::is_same_v<T, StudentTDist>) {
            const double z = rng.normal();
            const double chi2 = 2.0 * gamma_sample(rng, p.df / 2.0);
            out(i, 0) = z / std::sqrt(chi2 / p.df);
          } else if constexpr (std::is_same_v<T, MixedGaussianDist>) {
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            out(i, 0) = sign * p.mu + p.sigma * rng.normal();
          } else if constexpr (std::is_same_v<T, LaplaceDist>) {
            out(i, 0) = p.mu + p.beta * (rng.exponential() - rng.exponential());
          } else if constexpr (std::is_same_v<T, BivariateGaussianDist>) {
            const Eigen::Vector2d z{rng.normal(), rng.normal()};
            out.row(i) = (p.mean + l * z).transpose();
          } else {
            for (int j = 0; j < p.d; ++j) out(i, j) = 2.0 * gamma_sample(rng, p.df / 2.0);
          }
        }
      },
      dist);
  return out;
}

/// BIC candidate set for a distribution's cells: univariate E/V or the five
/// multivariate structures, G in 1..G_max; FullVarying is capped at G = 3
/// when d >= 10.
inline FitConfig candidate_config(const TrueDistribution& dist, FitConfig base) {
  const int d = dimension(dist);
  base.structures = default_structures(d);
  base.full_varying_max_G = d >= 10 ? std::optional<int>(3) : std::nullopt;
  return base;
}

// ---------------------------------------------------------------------------
// Experiments

struct SimulationResult {
  std::string distribution;
  std::string method;
  std::size_t n = 0;
  double level = 0.95;
  std::size_t n_reps = 0;  ///< replicates that completed
  std::size_t n_failed = 0;
  double true_entropy = 0.0;
  double mean_estimate = 0.0;
  double mean_bias = 0.0;
  double mean_se = 0.0;
  std::pair<double, double> mean_perc_interval{};
  double coverage_perc = 0.0;
  std::pair<double, double> mean_cperc_interval{};
  double coverage_cperc = 0.0;
  double bias_se_ratio = 0.0;
  double mean_collapsed_retries = 0.0;
  std::string status = "ok";
};

struct ExperimentGrid {
  std::vector<TrueDistribution> distributions;
  std::vector<BootstrapMethod> methods;
  std::vector<std::size_t> sizes;
  std::vector<double> levels = {0.95};
  std::size_t n_reps = 200;
  std::size_t B = 500;
  std::uint64_t seed = 20240101;
  unsigned threads = 1;
  FitConfig fit;

  void validate() const {
    if (distributions.empty() || methods.empty() || sizes.empty() || levels.empty())
      throw DomainError("experiment grid: distributions, methods, sizes and levels must be nonempty");
    if (n_reps < 1) throw DomainError("experiment grid: n_reps must be >= 1");
    if (B < 1) throw DomainError("experiment grid: B must be >= 1");
    for (double l : levels)
      if (!(l > 0.0 && l < 1.0)) throw DomainError("experiment grid: levels must lie in (0, 1)");
    for (auto n : sizes)
      if (n < 2) throw DomainError("experiment grid: sample sizes must be >= 2");
  }
};

namespace detail {

struct MethodOutcome {
  bool ok = false;
  double bias = 0.0;
  double se = 0.0;
  int collapsed = 0;
  std::vector<IntervalEstimate> perc;
  std::vector<IntervalEstimate> cperc;
};

struct ReplicateRecord {
  bool ok = false;
  double estimate = 0.0;
  std::vector<MethodOutcome> methods;
};

/// Stream for replicate r of a (distribution, n) group. Independent of the
/// method list, so a single-method run reproduces the grid's numbers.
inline RngStream replicate_stream(const RngStream& master, const TrueDistribution& dist, std::size_t n,
                                  std::size_t r) {
  return master.substream(label_hash(distribution_label(dist))).substream(n).substream(r);
}

inline ReplicateRecord run_replicate(const TrueDistribution& dist, std::size_t n, std::size_t r,
                                     const std::vector<BootstrapMethod>& methods, const std::vector<double>& levels,
                                     std::size_t B, const FitConfig& config, const RngStream& master) {
  ReplicateRecord rec;
  rec.methods.resize(methods.size());
  const RngStream rs = replicate_stream(master, dist, n, r);
  RngStream data_rng = rs.substream(0);
  std::optional<MixtureModel> base;
  Matrix data;
  try {
    data = sample(dist, n, data_rng);
    base = select_model(data, WeightVector::unit(n), config, rs.substream(1));
    rec.estimate = entropy_estimate(*base, data);
    rec.ok = true;
  } catch (const Error&) {
    return rec;
  }
  for (std::size_t m = 0; m < methods.size(); ++m) {
    auto& out = rec.methods[m];
    try {
      const auto bd =
          bootstrap_entropy(data, *base, methods[m], B, config, rs.substream(label_hash(method_label(methods[m]))));
      out.bias = bootstrap_bias(bd);
      out.se = bd.B() >= 2 ? bootstrap_se(bd) : 0.0;
      out.collapsed = bd.n_collapsed_retries;
      for (double level : levels) {
        out.perc.push_back(percentile_interval(bd, level));
        out.cperc.push_back(centered_percentile_interval(bd, level));
      }
      out.ok = true;
    } catch (const Error&) {
    }
  }
  return rec;
}

inline std::vector<SimulationResult> run_group(const TrueDistribution& dist, std::size_t n,
                                               const std::vector<BootstrapMethod>& methods,
                                               const std::vector<double>& levels, std::size_t n_reps, std::size_t B,
                                               const FitConfig& base_config, const RngStream& master,
                                               unsigned threads) {
  const FitConfig config = candidate_config(dist, base_config);
  const double truth = true_entropy(dist);
  std::vector<ReplicateRecord> records(n_reps);
  parallel_for(n_reps, threads, [&](std::size_t r) {
    records[r] = run_replicate(dist, n, r, methods, levels, B, config, master);
  });

  std::vector<SimulationResult> out;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t l = 0; l < levels.size(); ++l) {
      SimulationResult res;
      res.distribution = distribution_label(dist);
      res.method = method_label(methods[m]);
      res.n = n;
      res.level = levels[l];
      res.true_entropy = truth;
      double abs_bias = 0.0;
      std::size_t cover_p = 0;
      std::size_t cover_c = 0;
      for (const auto& rec : records) {
        if (!rec.ok || !rec.methods[m].ok) {
          ++res.n_failed;
          continue;
        }
        const auto& mo = rec.methods[m];
        ++res.n_reps;
        res.mean_estimate += rec.estimate;
        res.mean_bias += mo.bias;
        abs_bias += std::abs(mo.bias);
        res.mean_se += mo.se;
        res.mean_collapsed_retries += mo.collapsed;
        res.mean_perc_interval.first += mo.perc[l].lower;
        res.mean_perc_interval.second += mo.perc[l].upper;
        res.mean_cperc_interval.first += mo.cperc[l].lower;
        res.mean_cperc_interval.second += mo.cperc[l].upper;
        cover_p += mo.perc[l].contains(truth) ? 1 : 0;
        cover_c += mo.cperc[l].contains(truth) ? 1 : 0;
      }
      if (res.n_reps == 0) {
        res.status = "error: every replicate failed";
      } else {
        const double k = static_cast<double>(res.n_reps);
        res.mean_estimate /= k;
        res.mean_bias /= k;
        abs_bias /= k;
        res.mean_se /= k;
        res.mean_collapsed_retries /= k;
        res.mean_perc_interval.first /= k;
        res.mean_perc_interval.second /= k;
        res.mean_cperc_interval.first /= k;
        res.mean_cperc_interval.second /= k;
        res.coverage_perc = static_cast<double>(cover_p) / k;
        res.coverage_cperc = static_cast<double>(cover_c) / k;
        res.bias_se_ratio = res.mean_se > 0.0 ? abs_bias / res.mean_se : 0.0;
      }
      out.push_back(std::move(res));
    }
  }
  return out;
}

}  // namespace detail

/// One (distribution, method, n) cell: n_reps simulated datasets, each with
/// BIC selection, a point estimate, B bootstrap replicates and both interval
/// kinds at `level`.
inline SimulationResult run_cell(const TrueDistribution& dist, const BootstrapMethod& method, std::size_t n,
                                 std::size_t n_reps, std::size_t B, const FitConfig& config, const RngStream& rng,
                                 double level = 0.95, unsigned threads = 1) {
  if (n_reps < 1 || B < 1 || n < 2) throw DomainError("run_cell: invalid parameters");
  return detail::run_group(dist, n, {method}, {level}, n_reps, B, config, rng, threads).front();
}

/// Every cell of the grid, ordered by distribution, size, method, level.
/// A failing group yields error rows rather than aborting the run.
inline std::vector<SimulationResult> run_matrix(const ExperimentGrid& grid) {
  grid.validate();
  const RngStream master(grid.seed, 0);
  std::vector<SimulationResult> out;
  for (const auto& dist : grid.distributions) {
    for (auto n : grid.sizes) {
      try {
        auto rows = detail::run_group(dist, n, grid.methods, grid.levels, grid.n_reps, grid.B, grid.fit, master,
                                      grid.threads);
        out.insert(out.end(), rows.begin(), rows.end());
      } catch (const std::exception& e) {
        for (const auto& m : grid.methods) {
          for (double level : grid.levels) {
            SimulationResult res;
            res.distribution = distribution_label(dist);
            res.method = method_label(m);
            res.n = n;
            res.level = level;
            res.status = std::string("error: ") + e.what();
            out.push_back(std::move(res));
          }
        }
      }
    }
  }
  return out;
}

inline bool any_errors(const std::vector<SimulationResult>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.status != "ok"; });
}

namespace detail {
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}
}  // namespace detail

/// One row per cell; the numeric columns mirror the simulation tables
/// (estimate, bias, SE, percentile and centered-percentile limits, coverage).
inline void write_results_csv(std::ostream& os, const std::vector<SimulationResult>& rows) {
  using detail::csv_num;
  os << "distribution,method,n,level,n_reps,n_failed,true_entropy,estimate,bias,se,perc_lower,perc_upper,"
        "perc_coverage,cperc_lower,cperc_upper,cperc_coverage,bias_se_ratio,status\n";
  for (const auto& r : rows) {
    os << detail::csv_quote(r.distribution) << ',' << r.method << ',' << r.n << ',' << csv_num(r.level) << ','
       << r.n_reps << ',' << r.n_failed << ',' << csv_num(r.true_entropy) << ',' << csv_num(r.mean_estimate) << ','
       << csv_num(r.mean_bias) << ',' << csv_num(r.mean_se) << ',' << csv_num(r.mean_perc_interval.first) << ','
       << csv_num(r.mean_perc_interval.second) << ',' << csv_num(r.coverage_perc) << ','
       << csv_num(r.mean_cperc_interval.first) << ',' << csv_num(r.mean_cperc_interval.second) << ','
       << csv_num(r.coverage_cperc) << ',' << csv_num(r.bias_se_ratio) << ',' << detail::csv_quote(r.status)
       << '\n';
  }
}

/// Long-format plot data: one line per (cell, interval kind).
inline void write_coverage_curves_csv(std::ostream& os, const std::vector<SimulationResult>& rows) {
  using detail::csv_num;
  os << "distribution,method,interval_kind,n,level,coverage,bias_se_ratio\n";
  for (const auto& r : rows) {
    if (r.status != "ok") continue;
    for (int kind = 0; kind < 2; ++kind) {
      os << detail::csv_quote(r.distribution) << ',' << r.method << ',' << (kind == 0 ? "perc" : "cperc") << ','
         << r.n << ',' << csv_num(r.level) << ',' << csv_num(kind == 0 ? r.coverage_perc : r.coverage_cperc) << ','
         << csv_num(r.bias_se_ratio) << '\n';
    }
  }
}

}  // namespace mixent
