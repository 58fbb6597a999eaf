#pragma once

// JSON and CSV serialization of models and bootstrap results.

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "mixent/entropy.hpp"
#include "mixent/gmm.hpp"
#include "mixent/resample.hpp"

namespace mixent {

/// Stable field names: d, G, structure, weights, means, covariances
/// (row-major, one flat array per component), loglik, n_params, bic, n.
inline nlohmann::json model_to_json(const MixtureModel& m) {
  nlohmann::json j;
  j["d"] = m.d();
  j["G"] = m.G();
  j["structure"] = std::string(structure_name(m.structure()));
  j["weights"] = std::vector<double>(m.weights().begin(), m.weights().end());
  auto& means = j["means"] = nlohmann::json::array();
  auto& covs = j["covariances"] = nlohmann::json::array();
  for (int k = 0; k < m.G(); ++k) {
    means.push_back(std::vector<double>(m.means()[k].begin(), m.means()[k].end()));
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.d() * m.d()));
    for (int r = 0; r < m.d(); ++r)
      for (int c = 0; c < m.d(); ++c) flat.push_back(m.covariances()[k](r, c));
    covs.push_back(std::move(flat));
  }
  j["loglik"] = m.loglik();
  j["n_params"] = m.n_params();
  j["bic"] = m.bic();
  j["n"] = m.n_obs();
  return j;
}

inline MixtureModel model_from_json(const nlohmann::json& j) {
  try {
    const int d = j.at("d").get<int>();
    const auto w = j.at("weights").get<std::vector<double>>();
    const auto means_in = j.at("means").get<std::vector<std::vector<double>>>();
    const auto covs_in = j.at("covariances").get<std::vector<std::vector<double>>>();
    Vector weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    std::vector<Vector> means;
    std::vector<Matrix> covs;
    for (const auto& m : means_in) {
      if (static_cast<int>(m.size()) != d) throw DimensionError("model_from_json: mean length != d");
      means.push_back(Eigen::Map<const Vector>(m.data(), d));
    }
    for (const auto& c : covs_in) {
      if (static_cast<int>(c.size()) != d * d) throw DimensionError("model_from_json: covariance size != d*d");
      covs.push_back(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          c.data(), d, d));
    }
    MixtureModel model(std::move(weights), std::move(means), std::move(covs),
                       parse_structure(j.at("structure").get<std::string>()));
    if (j.contains("n") && j.at("n").get<std::size_t>() > 0 && j.contains("loglik") && j.at("loglik").is_number())
      return model.with_fit(j.at("loglik").get<double>(), j.at("n").get<std::size_t>());
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model_from_json: ") + e.what());
  }
}

inline nlohmann::json interval_to_json(const IntervalEstimate& iv) {
  return {{"lower", iv.lower}, {"upper", iv.upper}, {"level", iv.level}};
}

/// Point estimate, bias, SE and both interval kinds at each level.
inline nlohmann::json bootstrap_summary_json(const BootstrapDistribution& dist, const std::vector<double>& levels) {
  nlohmann::json j;
  j["method"] = method_label(dist.method);
  j["B"] = dist.B();
  j["point_estimate"] = dist.point_estimate;
  j["bias"] = bootstrap_bias(dist);
  j["se"] = dist.B() >= 2 ? nlohmann::json(bootstrap_se(dist)) : nlohmann::json(nullptr);
  j["n_collapsed_retries"] = dist.n_collapsed_retries;
  j["n_failed"] = dist.n_failed;
  auto& intervals = j["intervals"] = nlohmann::json::array();
  for (double level : levels) {
    intervals.push_back({{"level", level},
                         {"percentile", interval_to_json(percentile_interval(dist, level))},
                         {"centered_percentile", interval_to_json(centered_percentile_interval(dist, level))}});
  }
  return j;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// One replicate per row: replicate,entropy.
inline void write_replicates_csv(std::ostream& os, const BootstrapDistribution& dist) {
  os << "replicate,entropy\n";
  for (std::size_t b = 0; b < dist.replicates.size(); ++b) os << b + 1 << ',' << format_double(dist.replicates[b]) << '\n';
}

}  // namespace mixent
