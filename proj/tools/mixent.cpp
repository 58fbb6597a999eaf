// mixent: command-line front end.
//
//   mixent [--seed N] [--threads T] [--output-dir DIR] <command> ...
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure,
// 5 simulation finished but at least one cell errored.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mixent/mixent.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitCellErrors = 5;

struct Globals {
  std::uint64_t seed = 20240101;
  unsigned threads = 1;
  std::string output_dir = ".";
};

struct InputOptions {
  std::string csv_path;
  std::vector<std::string> columns;
  std::string group_by;
  bool log_returns = false;
};

struct FitOptions {
  int G_max = 5;
  std::vector<std::string> structures;  // empty: defaults for the data dimension
  int n_init = 5;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("csv", in.csv_path, "Input CSV (header row required)")->required();
  cmd->add_option("--columns", in.columns, "Columns to analyze (default: all but the group column)")
      ->delimiter(',');
  cmd->add_option("--group-by", in.group_by, "Column whose values split the rows into groups");
  cmd->add_flag("--log-returns", in.log_returns, "Convert price columns to log-returns first");
}

void add_fit_options(CLI::App* cmd, FitOptions& fit) {
  cmd->add_option("--G-max", fit.G_max, "Largest component count tried by BIC")->check(CLI::PositiveNumber);
  cmd->add_option("--structures", fit.structures, "Candidate covariance structures (E,V,EII,VII,VVI,EEE,VVV)")
      ->delimiter(',');
  cmd->add_option("--n-init", fit.n_init, "EM starts per candidate")->check(CLI::PositiveNumber);
}

mixent::Dataset load(const InputOptions& in) {
  mixent::CsvOptions opts;
  opts.columns = in.columns;
  if (!in.group_by.empty()) opts.group_by = in.group_by;
  opts.log_returns = in.log_returns;
  return mixent::read_csv_file(in.csv_path, opts);
}

mixent::FitConfig make_fit_config(const FitOptions& fit, int d) {
  mixent::FitConfig cfg;
  cfg.n_init = fit.n_init;
  cfg.G_range.clear();
  for (int g = 1; g <= fit.G_max; ++g) cfg.G_range.push_back(g);
  if (fit.structures.empty()) {
    cfg.structures = mixent::default_structures(d);
  } else {
    cfg.structures.clear();
    for (const auto& s : fit.structures) cfg.structures.push_back(mixent::parse_structure(s));
  }
  cfg.validate();
  return cfg;
}

std::vector<std::pair<std::string, mixent::Matrix>> checked_groups(const mixent::Dataset& ds) {
  auto groups = mixent::split_groups(ds);
  for (const auto& [label, rows] : groups) {
    if (rows.rows() < 2) {
      throw mixent::DataError(label.empty() ? std::string("need at least two rows")
                                            : "group '" + label + "' has fewer than two rows");
    }
  }
  return groups;
}

// Each group draws from its own stream, keyed by the label, so adding or
// reordering groups does not change another group's numbers.
mixent::RngStream group_stream(const Globals& g, const std::string& label) {
  return mixent::RngStream(g.seed, 0).substream(mixent::label_hash(label));
}

void write_file(const Globals& g, const std::string& name, const std::string& content) {
  fs::create_directories(g.output_dir);
  std::ofstream out(fs::path(g.output_dir) / name, std::ios::binary);
  if (!out) throw mixent::DataError("cannot write '" + (fs::path(g.output_dir) / name).string() + "'");
  out << content;
}

json model_summary(const mixent::MixtureModel& m) {
  return {{"G", m.G()},
          {"structure", std::string(mixent::structure_name(m.structure()))},
          {"bic", m.bic()},
          {"loglik", m.loglik()},
          {"n_params", m.n_params()}};
}

int cmd_estimate(const Globals& g, const InputOptions& in, const FitOptions& fit) {
  const auto ds = load(in);
  const auto cfg = make_fit_config(fit, static_cast<int>(ds.rows.cols()));
  json report = json::array();
  for (const auto& [label, rows] : checked_groups(ds)) {
    const auto rng = group_stream(g, label);
    const auto model = mixent::select_model(rows, mixent::WeightVector::unit(static_cast<std::size_t>(rows.rows())),
                                            cfg, rng);
    const auto est = mixent::estimate_entropy(model, rows);
    json entry = {{"group", label},
                  {"n", rows.rows()},
                  {"entropy", est.value},
                  {"lower_bound", est.lower_bound},
                  {"upper_bound", est.upper_bound},
                  {"model", mixent::model_to_json(model)}};
    entry["selected"] = model_summary(model);
    report.push_back(std::move(entry));
  }
  const std::string text = report.dump(2) + "\n";
  write_file(g, "estimate.json", text);
  std::cout << text;
  return kExitOk;
}

struct BootstrapArgs {
  std::string method = "wlb";
  double alpha = mixent::kCalibratedAlpha;
  std::size_t B = 999;
  double level = 0.95;
  bool reselect = false;
};

int cmd_bootstrap(const Globals& g, const InputOptions& in, const FitOptions& fit, const BootstrapArgs& args) {
  const auto method = mixent::parse_method(args.method, args.alpha);
  if (!(args.level > 0.0 && args.level < 1.0)) throw mixent::DomainError("--level must lie in (0, 1)");
  if (args.B < 2) throw mixent::DomainError("-B must be >= 2");
  const auto ds = load(in);
  const auto cfg = make_fit_config(fit, static_cast<int>(ds.rows.cols()));
  mixent::BootstrapOptions opts;
  opts.threads = g.threads;
  opts.reselect = args.reselect;

  json report = json::array();
  std::ostringstream reps;
  const bool grouped = !ds.groups.empty();
  reps << (grouped ? "group,replicate,entropy\n" : "replicate,entropy\n");
  for (const auto& [label, rows] : checked_groups(ds)) {
    const auto rng = group_stream(g, label);
    const auto model = mixent::select_model(rows, mixent::WeightVector::unit(static_cast<std::size_t>(rows.rows())),
                                            cfg, rng.substream(0));
    const auto dist = mixent::bootstrap_entropy(rows, model, method, args.B, cfg, rng.substream(1), opts);
    json entry = mixent::bootstrap_summary_json(dist, {args.level});
    entry["group"] = label;
    entry["n"] = rows.rows();
    entry["selected"] = model_summary(model);
    report.push_back(std::move(entry));
    for (std::size_t b = 0; b < dist.replicates.size(); ++b) {
      if (grouped) reps << label << ',';
      reps << b + 1 << ',' << mixent::format_double(dist.replicates[b]) << '\n';
    }
  }
  const std::string text = report.dump(2) + "\n";
  write_file(g, "bootstrap.json", text);
  write_file(g, "replicates.csv", reps.str());
  std::cout << text;
  return kExitOk;
}

struct CalibrateArgs {
  mixent::CalibrationTarget target;
  std::size_t curve_points = 41;
  double curve_lo = 0.25;
  double curve_hi = 4.0;
};

int cmd_calibrate(const Globals& g, const CalibrateArgs& args) {
  const mixent::RngStream rng(g.seed, 0);
  const double alpha = mixent::calibrate_alpha(args.target, rng);
  std::vector<double> grid;
  if (args.curve_points < 2 || !(args.curve_lo > 0.0) || !(args.curve_lo < args.curve_hi))
    throw mixent::DomainError("curve grid needs >= 2 points and 0 < curve-lo < curve-hi");
  for (std::size_t i = 0; i < args.curve_points; ++i)
    grid.push_back(args.curve_lo +
                   (args.curve_hi - args.curve_lo) * static_cast<double>(i) / static_cast<double>(args.curve_points - 1));
  const auto curve = mixent::calibration_curve(grid, args.target.n, args.target.n_mc, rng);
  std::ostringstream csv;
  csv << "alpha,expected_median\n";
  for (const auto& [a, m] : curve) csv << mixent::format_double(a) << ',' << mixent::format_double(m) << '\n';
  const json report = {{"alpha", alpha},
                       {"target_median", args.target.target_median},
                       {"n", args.target.n},
                       {"n_mc", args.target.n_mc},
                       {"bracket", {args.target.lo, args.target.hi}},
                       {"tol", args.target.tol},
                       {"seed", g.seed}};
  write_file(g, "calibration.json", report.dump(2) + "\n");
  write_file(g, "calibration_curve.csv", csv.str());
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_simulate(Globals g, const std::string& config_path, bool seed_given, bool threads_given) {
  std::ifstream in(config_path);
  if (!in) throw mixent::DomainError("cannot open config '" + config_path + "'");
  auto grid = mixent::experiment_grid_from_config(mixent::KeyValueConfig::parse(in));
  if (seed_given) grid.seed = g.seed;
  if (threads_given) grid.threads = g.threads;
  const auto rows = mixent::run_matrix(grid);
  std::ostringstream results;
  std::ostringstream curves;
  mixent::write_results_csv(results, rows);
  mixent::write_coverage_curves_csv(curves, rows);
  write_file(g, "results.csv", results.str());
  write_file(g, "coverage_curves.csv", curves.str());
  std::size_t errored = 0;
  for (const auto& r : rows)
    if (r.status != "ok") ++errored;
  std::cout << json{{"rows", rows.size()}, {"errored_rows", errored}, {"seed", grid.seed}}.dump() << "\n";
  return mixent::any_errors(rows) ? kExitCellErrors : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy estimation with Gaussian mixtures and bootstrap uncertainty"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Master seed; identical invocations give identical outputs");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", g.output_dir, "Directory for output files");

  InputOptions est_in;
  FitOptions est_fit;
  auto* estimate = app.add_subcommand("estimate", "Fit a GMM by BIC and report its entropy");
  add_input_options(estimate, est_in);
  add_fit_options(estimate, est_fit);

  InputOptions bs_in;
  FitOptions bs_fit;
  BootstrapArgs bs_args;
  auto* bootstrap = app.add_subcommand("bootstrap", "Bootstrap distribution and intervals of the entropy");
  add_input_options(bootstrap, bs_in);
  add_fit_options(bootstrap, bs_fit);
  bootstrap->add_option("--method", bs_args.method, "bs, pb or wlb");
  bootstrap->add_option("--alpha", bs_args.alpha, "Dirichlet concentration for wlb");
  bootstrap->add_option("-B,--replicates", bs_args.B, "Bootstrap replicates");
  bootstrap->add_option("--level", bs_args.level, "Interval level");
  bootstrap->add_flag("--reselect", bs_args.reselect, "Re-run BIC selection on every replicate");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Solve for the Dirichlet alpha matching a median target");
  calibrate->add_option("--target", cal.target.target_median, "Target expected median of mean-scaled weights");
  calibrate->add_option("--lo", cal.target.lo, "Lower end of the alpha bracket");
  calibrate->add_option("--hi", cal.target.hi, "Upper end of the alpha bracket");
  calibrate->add_option("--n", cal.target.n, "Weights per draw");
  calibrate->add_option("--n-mc", cal.target.n_mc, "Monte Carlo draws per evaluation");
  calibrate->add_option("--tol", cal.target.tol, "Bracket width at which bisection stops");
  calibrate->add_option("--curve-points", cal.curve_points, "Grid points in calibration_curve.csv");
  calibrate->add_option("--curve-lo", cal.curve_lo, "Smallest alpha on the curve grid");
  calibrate->add_option("--curve-hi", cal.curve_hi, "Largest alpha on the curve grid");

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run a simulation grid from a config file");
  simulate->add_option("config", config_path, "Experiment config (key = value)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*estimate) return cmd_estimate(g, est_in, est_fit);
    if (*bootstrap) return cmd_bootstrap(g, bs_in, bs_fit, bs_args);
    if (*calibrate) return cmd_calibrate(g, cal);
    if (*simulate)
      return cmd_simulate(g, config_path, app.count("--seed") > 0, app.count("--threads") > 0);
  } catch (const mixent::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const mixent::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const mixent::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
