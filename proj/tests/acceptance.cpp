// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass criterion numbers as arguments to run a subset.
// Simulation-cell results are also written to acceptance_results.csv in the
// working directory.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mixent/mixent.hpp"

using namespace mixent;
using CS = CovarianceStructure;

namespace {

// Tolerances, fixed here rather than configurable.
constexpr double kOracleTol = 5e-5;  // four decimal places
constexpr double kAlphaLo = 0.8037;
constexpr double kAlphaHi = 0.8237;
constexpr double kTable1EstimateTol = 0.02;
constexpr double kTable1SeTol = 0.02;
constexpr double kTable1EndpointTol = 0.04;
constexpr double kWlb4CoverageMax = 0.75;
constexpr double kWlbCoverageTol = 0.035;
constexpr double kGaussianCoverageMin = 0.92;
constexpr double kDominanceMargin = 0.02;
constexpr double kChiSqCoverageTol = 0.05;

constexpr std::uint64_t kSeed = 20240101;
constexpr std::size_t kReps = 200;
constexpr std::size_t kChiSqReps = 100;
constexpr std::size_t kB = 500;

const std::vector<BootstrapMethod> kMethods = {Nonparametric{}, Parametric{}, WLB{1.0}, WLB{4.0}, WLB{0.8137}};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail] ";
    }
    detail << what << "; ";
  }
};

std::string num(double v, int prec = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<SimulationResult> all_rows;

std::vector<SimulationResult> simulate(const TrueDistribution& dist, std::vector<std::size_t> sizes,
                                       std::size_t n_reps) {
  ExperimentGrid g;
  g.distributions = {dist};
  g.methods = kMethods;
  g.sizes = std::move(sizes);
  g.levels = {0.95};
  g.n_reps = n_reps;
  g.B = kB;
  g.seed = kSeed;
  g.threads = worker_count();
  auto rows = run_matrix(g);
  all_rows.insert(all_rows.end(), rows.begin(), rows.end());
  return rows;
}

const SimulationResult& row(const std::vector<SimulationResult>& rows, std::size_t n, const std::string& method) {
  for (const auto& r : rows)
    if (r.n == n && r.method == method) return r;
  throw std::runtime_error("missing cell " + method + " n=" + std::to_string(n));
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const std::vector<std::pair<std::string, double>> table = {
      {"gaussian", 1.4189}, {"t(3)", 1.7735},           {"mixed_gaussian", 2.0519},
      {"laplace", 2.3863},  {"bivariate_gaussian", 2.9916}, {"chisq(5,10)", 24.2309}};
  for (const auto& [label, expected] : table) {
    const double h = true_entropy(parse_distribution(label));
    // chisq: the tabulated 24.2309 truncates 24.230951, so allow the
    // rounding interval either side of the fourth decimal.
    const double tol = label == "chisq(5,10)" ? 1e-4 : kOracleTol;
    o.check(std::abs(h - expected) <= tol, label + " " + num(h, 6) + " vs " + num(expected));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const RngStream rng(kSeed, 0);
  const double a = calibrate_alpha(CalibrationTarget{}, rng);
  const double b = calibrate_alpha(CalibrationTarget{}, rng);
  o.check(a >= kAlphaLo && a <= kAlphaHi, "alpha " + num(a, 5) + " in [0.8037, 0.8237]");
  o.check(a == b, "repeat run identical");
  return o;
}

Outcome criterion3(const std::vector<SimulationResult>& t3) {
  Outcome o;
  const auto& r = row(t3, 100, "WLB(0.8137)");
  o.check(std::abs(r.mean_estimate - 1.7565) <= kTable1EstimateTol, "estimate " + num(r.mean_estimate) + " vs 1.7565");
  o.check(std::abs(r.mean_se - 0.1124) <= kTable1SeTol, "SE " + num(r.mean_se) + " vs 0.1124");
  o.check(std::abs(r.mean_cperc_interval.first - 1.5690) <= kTable1EndpointTol,
          "centered lower " + num(r.mean_cperc_interval.first) + " vs 1.5690");
  o.check(std::abs(r.mean_cperc_interval.second - 2.0056) <= kTable1EndpointTol,
          "centered upper " + num(r.mean_cperc_interval.second) + " vs 2.0056");
  return o;
}

Outcome criterion4(const std::vector<SimulationResult>& t3) {
  Outcome o;
  const std::array<std::size_t, 4> sizes = {100, 200, 500, 1000};
  const std::array<double, 4> paper = {0.939, 0.951, 0.966, 0.953};
  int dominated = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::size_t n = sizes[i];
    const double w4 = row(t3, n, "WLB(4)").coverage_cperc;
    const double wc = row(t3, n, "WLB(0.8137)").coverage_cperc;
    const double bs = row(t3, n, "BS").coverage_cperc;
    const double pb = row(t3, n, "PB").coverage_cperc;
    const double w1 = row(t3, n, "WLB(1)").coverage_cperc;
    o.check(w4 <= kWlb4CoverageMax, "n=" + std::to_string(n) + " WLB(4) " + num(w4, 3) + " <= 0.75");
    o.check(std::abs(wc - paper[i]) <= kWlbCoverageTol,
            "n=" + std::to_string(n) + " WLB(0.8137) " + num(wc, 3) + " vs " + num(paper[i], 3));
    const bool dom = wc >= bs && wc >= pb && wc >= w1;
    dominated += dom;
    o.detail << "n=" << n << " BS/PB/WLB(1) " << num(bs, 3) << "/" << num(pb, 3) << "/" << num(w1, 3) << "; ";
  }
  o.check(dominated >= 3, "WLB(0.8137) >= BS, PB, WLB(1) at " + std::to_string(dominated) + "/4 sizes");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto rows = simulate(GaussianDist{}, {1000}, kReps);
  for (const auto& m : kMethods) {
    const auto label = method_label(m);
    const double c = row(rows, 1000, label).coverage_cperc;
    if (label == "WLB(4)")
      o.check(c <= kWlb4CoverageMax, label + " " + num(c, 3) + " <= 0.75");
    else
      o.check(c >= kGaussianCoverageMin, label + " " + num(c, 3) + " >= 0.92");
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto rows = simulate(MixedGaussianDist{}, {100}, kReps);
  for (const std::string label : {"BS", "PB", "WLB(1)", "WLB(0.8137)"}) {
    const auto& r = row(rows, 100, label);
    o.check(r.coverage_cperc - r.coverage_perc >= kDominanceMargin,
            label + " centered " + num(r.coverage_cperc, 3) + " vs percentile " + num(r.coverage_perc, 3));
  }
  return o;
}

// Property suite --------------------------------------------------------------

Matrix two_clusters(std::size_t n_each, int d, RngStream rng, double sep) {
  Matrix x(static_cast<Eigen::Index>(2 * n_each), d);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (int j = 0; j < d; ++j) x(i, j) = rng.normal() + (i < static_cast<Eigen::Index>(n_each) ? -sep : sep);
  return x;
}

MixtureModel random_mixture(RngStream& rng, int d, int G) {
  Vector w(G);
  for (int k = 0; k < G; ++k) w[k] = 0.2 + rng.uniform();
  w /= w.sum();
  std::vector<Vector> means;
  std::vector<Matrix> covs;
  for (int k = 0; k < G; ++k) {
    Vector m(d);
    for (int j = 0; j < d; ++j) m[j] = 3.0 * rng.normal();
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
    means.push_back(m);
    covs.push_back(a * a.transpose() / d + 0.2 * Matrix::Identity(d, d));
  }
  return {w, means, covs, d == 1 ? CS::UnivariateVarying : CS::FullVarying};
}

bool em_monotone() {
  const RngStream root(11, 0);
  for (int inst = 0; inst < 50; ++inst) {
    const RngStream rs = root.substream(inst);
    RngStream pick = rs.substream(0);
    const int d = 1 + static_cast<int>(pick.below(3));
    const int G = 1 + static_cast<int>(pick.below(4));
    const CS s = d == 1 ? (pick.below(2) ? CS::UnivariateEqual : CS::UnivariateVarying)
                        : kAllStructures[2 + pick.below(5)];
    const Matrix x = two_clusters(60 + 20 * pick.below(5), d, rs.substream(1), 1.5);
    RngStream wr = rs.substream(2);
    const auto w = gen_weights(DirichletWLB{0.8137}, static_cast<std::size_t>(x.rows()), wr);
    RngStream init = rs.substream(3);
    try {
      const double floor = covariance_floor(x, FitConfig{});
      const auto start = m_step_weighted(detail::kmeanspp_assignment(x, w, G, init), x, w, s, floor);
      const auto em = run_em(x, w, start, FitConfig{}, floor);
      for (std::size_t t = 1; t < em.trace.size(); ++t)
        if (em.trace[t] < em.trace[t - 1] - 1e-8 * (1.0 + std::abs(em.trace[t - 1]))) return false;
    } catch (const CollapseError&) {
    }
  }
  return true;
}

bool weight_scaling() {
  const Matrix x = two_clusters(100, 2, RngStream(12, 0), 1.5);
  RngStream wr(13, 0);
  const auto w = gen_weights(DirichletWLB{1.0}, 200, wr);
  const auto a = fit_em(x, w, 2, CS::DiagonalVarying, FitConfig{}, RngStream(14, 0));
  const auto b = fit_em(x, w.scaled(3.7), 2, CS::DiagonalVarying, FitConfig{}, RngStream(14, 0));
  for (int k = 0; k < 2; ++k) {
    if (std::abs(a.weights()[k] - b.weights()[k]) > 1e-9) return false;
    if ((a.means()[k] - b.means()[k]).cwiseAbs().maxCoeff() > 1e-9) return false;
    if ((a.covariances()[k] - b.covariances()[k]).cwiseAbs().maxCoeff() > 1e-9) return false;
  }
  return std::abs(weighted_entropy_estimate(a, x, w) - weighted_entropy_estimate(a, x, w.scaled(3.7))) < 1e-12;
}

bool multinomial_equivalence() {
  const Matrix x = two_clusters(50, 1, RngStream(15, 0), 2.0);
  RngStream wr(16, 0);
  const auto w = gen_weights(MultinomialBS{}, 100, wr);
  const auto m = fit_em(x, w, 2, CS::UnivariateVarying, FitConfig{}, RngStream(17, 0));
  Matrix expanded(100, 1);
  int r = 0;
  for (int i = 0; i < 100; ++i)
    for (int c = 0; c < static_cast<int>(w[i]); ++c) expanded(r++, 0) = x(i, 0);
  if (r != 100) return false;
  const double loglik = m.log_density(expanded).sum();
  return std::abs(m.loglik() - loglik) <= 1e-9 * std::abs(loglik) &&
         std::abs(weighted_entropy_estimate(m, x, w) - entropy_estimate(m, expanded)) <= 1e-12;
}

bool bounds_bracket() {
  RngStream rng(4, 0);
  for (int t = 0; t < 20; ++t) {
    const int d = 1 + static_cast<int>(rng.below(3));
    const int G = 1 + static_cast<int>(rng.below(4));
    const auto m = random_mixture(rng, d, G);
    const Vector logf = m.log_density(m.sample(200000, rng));
    const double h = -logf.mean();
    const double se = std::sqrt((logf.array() + h).square().sum() / (logf.size() - 1) / logf.size());
    const auto [lo, hi] = entropy_bounds_gaussian(m);
    if (lo > h + 3.0 * se || hi < h - 3.0 * se) return false;
  }
  return true;
}

bool interval_identities() {
  RngStream rng(21, 0);
  for (int t = 0; t < 20; ++t) {
    BootstrapDistribution d;
    d.point_estimate = rng.normal();
    for (int b = 0; b < 50 + t; ++b) d.replicates.push_back(rng.normal() + 0.3);
    for (double level : {0.8, 0.9, 0.95}) {
      const auto p = percentile_interval(d, level);
      const auto c = centered_percentile_interval(d, level);
      if (std::abs(c.lower + p.upper - 2.0 * d.point_estimate) > 1e-12) return false;
      if (std::abs(c.upper + p.lower - 2.0 * d.point_estimate) > 1e-12) return false;
      if (std::abs(c.width() - p.width()) > 1e-12) return false;
    }
  }
  return true;
}

bool quantile_unit_vectors() {
  for (int n = 2; n <= 9; ++n) {
    for (int j = 1; j < n; ++j) {
      std::vector<double> s(n, 0.0);
      std::fill(s.begin() + j, s.end(), 1.0);
      for (int i = 0; i <= 40; ++i) {
        const double q = i / 40.0;
        const double h = (n - 1) * q;
        if (std::abs(quantile(s, q) - std::clamp(h - j + 1, 0.0, 1.0)) > 1e-12) return false;
      }
    }
  }
  return true;
}

bool thread_determinism() {
  const Matrix x = two_clusters(75, 1, RngStream(22, 0), 2.0);
  FitConfig c;
  c.G_range = {1, 2, 3};
  const auto base = select_model(x, WeightVector::unit(150), c, RngStream(23, 0));
  for (const auto& m : kMethods) {
    BootstrapOptions one;
    BootstrapOptions many;
    many.threads = 4;
    const auto a = bootstrap_entropy(x, base, m, 30, c, RngStream(24, 0), one);
    const auto b = bootstrap_entropy(x, base, m, 30, c, RngStream(24, 0), many);
    if (a.replicates != b.replicates) return false;
  }
  ExperimentGrid g;
  g.distributions = {GaussianDist{}};
  g.methods = {Nonparametric{}, WLB{0.8137}};
  g.sizes = {40};
  g.n_reps = 4;
  g.B = 10;
  g.fit.G_range = {1, 2};
  std::ostringstream s1;
  std::ostringstream s3;
  write_results_csv(s1, run_matrix(g));
  g.threads = 3;
  write_results_csv(s3, run_matrix(g));
  return s1.str() == s3.str();
}

Outcome criterion7() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  o.check(em_monotone(), "EM monotone on 50 instances");
  o.check(weight_scaling(), "weight-scaling invariance");
  o.check(multinomial_equivalence(), "multinomial equivalence");
  o.check(bounds_bracket(), "bounds bracket Monte Carlo entropy on 20 mixtures");
  o.check(interval_identities(), "interval reflection and width identities");
  o.check(quantile_unit_vectors(), "type-7 quantile unit vectors");
  o.check(thread_determinism(), "thread-count determinism");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(secs < 120.0, "runtime " + num(secs, 1) + " s < 120 s");
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto rows = simulate(IndepChiSqDist{}, {100, 500}, kChiSqReps);
  const std::map<std::string, std::array<double, 2>> paper = {{"BS", {0.971, 0.937}},
                                                             {"PB", {0.985, 0.937}},
                                                             {"WLB(1)", {0.969, 0.951}},
                                                             {"WLB(4)", {0.588, 0.628}},
                                                             {"WLB(0.8137)", {0.985, 0.954}}};
  const std::array<std::size_t, 2> sizes = {100, 500};
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    o.detail << "n=" << sizes[i] << " estimate " << num(row(rows, sizes[i], "BS").mean_estimate)
             << " (truth 24.2310); ";
    for (const auto& [label, cov] : paper) {
      const double c = row(rows, sizes[i], label).coverage_cperc;
      o.check(std::abs(c - cov[i]) <= kChiSqCoverageTol,
              "n=" + std::to_string(sizes[i]) + " " + label + " " + num(c, 3) + " vs " + num(cov[i], 3));
    }
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto want = [&](int c) { return wanted.empty() || wanted.count(c) > 0; };

  bool all_pass = true;
  auto report = [&](int id, const std::string& name, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << ", " << num(secs, 1)
              << " s): " << o.detail.str() << std::endl;
  };

  if (want(1)) report(1, "analytic entropy oracles", criterion1);
  if (want(2)) report(2, "alpha calibration", criterion2);
  if (want(7)) report(7, "property suite", criterion7);
  if (want(3) || want(4)) {
    std::vector<SimulationResult> t3;
    std::string error;
    const auto start = std::chrono::steady_clock::now();
    try {
      t3 = simulate(StudentTDist{3.0}, {100, 200, 500, 1000}, kReps);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "t(3) grid: " << num(secs, 1) << " s on " << worker_count() << " thread(s)" << std::endl;
    auto from_grid = [&](auto fn) {
      return [&, fn] {
        if (!error.empty()) throw std::runtime_error(error);
        return fn(t3);
      };
    };
    if (want(3)) report(3, "t(3) point statistics", from_grid(criterion3));
    if (want(4)) report(4, "t(3) coverage ordering", from_grid(criterion4));
  }
  if (want(5)) report(5, "Gaussian cell coverage", criterion5);
  if (want(6)) report(6, "centered vs percentile", criterion6);
  if (want(8)) report(8, "10-d chi-square cell", criterion8);

  if (!all_rows.empty()) {
    std::ofstream out("acceptance_results.csv");
    write_results_csv(out, all_rows);
  }
  return all_pass ? 0 : 1;
}
