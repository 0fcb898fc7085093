#pragma once

// JSON system descriptions consumed by the kcontract tool.
//
//   {
//     "kind": "lurie" | "network",
//     "A": [[..]], "B": [[..]], "C": [[..]],        // lurie
//     "alpha": 0.5, "W": [[..]],                   // network
//     "nonlinearity": {
//       "family": "scaled_tanh" | "linear" | "piecewise_table",
//       "gain": 0.07, "dim": 10,                   // scaled_tanh
//       "K": [[..]],                               // linear
//       "knots": [..], "values": [..], "dim": 2,   // piecewise_table
//       "bounds": {"jac_norm": 1.0, "jac_topk_sq": {"2": 0.5}}
//     },
//     "analysis": {
//       "k": 2,
//       "P": [[..]] | "scalar-search",
//       "eta1": .., "eta2": ..,                    // optional, with a P matrix
//       "tolerances": {"psd_rel": 1e-9, ...}
//     }
//   }

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kcontract/certify.hpp"
#include "kcontract/systems.hpp"

namespace kcontract::cli {

struct NonlinearityConfig {
  std::string family;
  double gain = 0.0;
  int dim = 0;
  Matrix linear_gain;
  std::vector<double> knots;
  std::vector<double> values;
  DeclaredBounds bounds;
};

struct AnalysisConfig {
  int k = 1;
  /// Set for a user-supplied P; empty means scalar search.
  std::optional<Matrix> p;
  std::optional<double> eta1;
  std::optional<double> eta2;
  Tolerances tolerances;
};

struct SystemConfig {
  std::string kind;
  Matrix a, b, c;
  double alpha = 0.0;
  Matrix w;
  NonlinearityConfig nonlinearity;
  AnalysisConfig analysis;
};

bool operator==(const SystemConfig& lhs, const SystemConfig& rhs);

/// Schema and dimension validation happen here; errors are Errc::parse.
SystemConfig parse_config(const nlohmann::json& j);
SystemConfig load_config(const std::string& path);
nlohmann::json to_json(const SystemConfig& cfg);

Nonlinearity build_nonlinearity(const NonlinearityConfig& cfg);
/// default_dim applies when the config leaves "dim" out.
Nonlinearity build_nonlinearity(const NonlinearityConfig& cfg, int default_dim);
LurieSystem build_lurie(const SystemConfig& cfg);
NetworkSystem build_network(const SystemConfig& cfg);
int system_dimension(const SystemConfig& cfg);

/// Matrix from a JSON file (nested arrays, or {"matrix": ...}) or CSV.
Matrix load_matrix(const std::string& path);

}  // namespace kcontract::cli
