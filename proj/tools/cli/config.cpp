#include "cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kcontract/error.hpp"
#include "kcontract/serialize.hpp"

namespace kcontract::cli {

namespace {

using nlohmann::json;

bool same(const Matrix& x, const Matrix& y) {
  return x.rows() == y.rows() && x.cols() == y.cols() && (x.size() == 0 || x == y);
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw Error(Errc::parse, "unknown key '" + key + "' in " + where);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw Error(Errc::parse, std::string("missing '") + key + "' in " + where);
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(Errc::parse, std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw Error(Errc::parse, std::string(what) + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw Error(Errc::parse, std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

NonlinearityConfig parse_nonlinearity(const json& j) {
  if (!j.is_object()) throw Error(Errc::parse, "nonlinearity must be an object");
  NonlinearityConfig cfg;
  const json& family = require(j, "family", "nonlinearity");
  if (!family.is_string()) throw Error(Errc::parse, "nonlinearity family must be a string");
  cfg.family = family.get<std::string>();
  if (cfg.family == "scaled_tanh") {
    reject_unknown(j, {"family", "gain", "dim", "bounds"}, "nonlinearity");
    cfg.gain = number(require(j, "gain", "nonlinearity"), "gain");
    if (j.contains("dim")) cfg.dim = integer(j["dim"], "dim");
  } else if (cfg.family == "linear") {
    reject_unknown(j, {"family", "K", "bounds"}, "nonlinearity");
    cfg.linear_gain = matrix_from_json(require(j, "K", "nonlinearity"), "K");
  } else if (cfg.family == "piecewise_table") {
    reject_unknown(j, {"family", "knots", "values", "dim", "bounds"}, "nonlinearity");
    cfg.knots = numbers(require(j, "knots", "nonlinearity"), "knots");
    cfg.values = numbers(require(j, "values", "nonlinearity"), "values");
    if (j.contains("dim")) cfg.dim = integer(j["dim"], "dim");
  } else {
    throw Error(Errc::parse, "unknown nonlinearity family '" + cfg.family + "'");
  }
  if (j.contains("bounds")) {
    const json& b = j["bounds"];
    if (!b.is_object()) throw Error(Errc::parse, "bounds must be an object");
    reject_unknown(b, {"jac_norm", "jac_topk_sq"}, "bounds");
    if (b.contains("jac_norm")) cfg.bounds.jac_norm = number(b["jac_norm"], "jac_norm");
    if (b.contains("jac_topk_sq")) {
      if (!b["jac_topk_sq"].is_object()) throw Error(Errc::parse, "jac_topk_sq must map k to a bound");
      for (const auto& [key, value] : b["jac_topk_sq"].items()) {
        int k = 0;
        try {
          std::size_t used = 0;
          k = std::stoi(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
          throw Error(Errc::parse, "jac_topk_sq keys must be integers, got '" + key + "'");
        }
        cfg.bounds.jac_topk_sq[k] = number(value, "jac_topk_sq entry");
      }
    }
  }
  return cfg;
}

json nonlinearity_to_json(const NonlinearityConfig& cfg) {
  json j{{"family", cfg.family}};
  if (cfg.family == "scaled_tanh") {
    j["gain"] = cfg.gain;
    if (cfg.dim > 0) j["dim"] = cfg.dim;
  } else if (cfg.family == "linear") {
    j["K"] = matrix_to_json(cfg.linear_gain);
  } else {
    j["knots"] = cfg.knots;
    j["values"] = cfg.values;
    if (cfg.dim > 0) j["dim"] = cfg.dim;
  }
  if (!cfg.bounds.empty()) {
    json b = json::object();
    if (cfg.bounds.jac_norm) b["jac_norm"] = *cfg.bounds.jac_norm;
    if (!cfg.bounds.jac_topk_sq.empty()) {
      json m = json::object();
      for (const auto& [k, v] : cfg.bounds.jac_topk_sq) m[std::to_string(k)] = v;
      b["jac_topk_sq"] = m;
    }
    j["bounds"] = b;
  }
  return j;
}

AnalysisConfig parse_analysis(const json& j) {
  AnalysisConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) throw Error(Errc::parse, "analysis must be an object");
  reject_unknown(j, {"k", "P", "eta1", "eta2", "tolerances"}, "analysis");
  if (j.contains("k")) cfg.k = integer(j["k"], "k");
  if (j.contains("P")) {
    const json& p = j["P"];
    if (p.is_string()) {
      if (p.get<std::string>() != "scalar-search")
        throw Error(Errc::parse, "P must be a matrix or \"scalar-search\"");
    } else {
      cfg.p = matrix_from_json(p, "P");
    }
  }
  if (j.contains("eta1")) cfg.eta1 = number(j["eta1"], "eta1");
  if (j.contains("eta2")) cfg.eta2 = number(j["eta2"], "eta2");
  if (cfg.eta1.has_value() != cfg.eta2.has_value())
    throw Error(Errc::parse, "eta1 and eta2 must be given together");
  if (cfg.eta1 && !cfg.p) throw Error(Errc::parse, "eta1/eta2 need an explicit P matrix");
  if (j.contains("tolerances")) cfg.tolerances = tolerances_from_json(j["tolerances"]);
  return cfg;
}

json analysis_to_json(const AnalysisConfig& cfg) {
  json j{{"k", cfg.k}};
  j["P"] = cfg.p ? matrix_to_json(*cfg.p) : json("scalar-search");
  if (cfg.eta1) j["eta1"] = *cfg.eta1;
  if (cfg.eta2) j["eta2"] = *cfg.eta2;
  if (!(cfg.tolerances == Tolerances{})) j["tolerances"] = kcontract::to_json(cfg.tolerances);
  return j;
}

}  // namespace

bool operator==(const SystemConfig& lhs, const SystemConfig& rhs) {
  const auto& ln = lhs.nonlinearity;
  const auto& rn = rhs.nonlinearity;
  const auto& la = lhs.analysis;
  const auto& ra = rhs.analysis;
  const bool p_equal = la.p.has_value() == ra.p.has_value() && (!la.p || same(*la.p, *ra.p));
  return lhs.kind == rhs.kind && same(lhs.a, rhs.a) && same(lhs.b, rhs.b) && same(lhs.c, rhs.c) &&
         lhs.alpha == rhs.alpha && same(lhs.w, rhs.w) && ln.family == rn.family && ln.gain == rn.gain &&
         ln.dim == rn.dim && same(ln.linear_gain, rn.linear_gain) && ln.knots == rn.knots &&
         ln.values == rn.values && ln.bounds == rn.bounds && la.k == ra.k && p_equal &&
         la.eta1 == ra.eta1 && la.eta2 == ra.eta2 && la.tolerances == ra.tolerances;
}

SystemConfig parse_config(const json& j) {
  if (!j.is_object()) throw Error(Errc::parse, "config must be a JSON object");
  SystemConfig cfg;
  const json& kind = require(j, "kind", "config");
  if (!kind.is_string()) throw Error(Errc::parse, "kind must be a string");
  cfg.kind = kind.get<std::string>();
  if (cfg.kind == "lurie") {
    reject_unknown(j, {"kind", "A", "B", "C", "nonlinearity", "analysis"}, "config");
    cfg.a = matrix_from_json(require(j, "A", "config"), "A");
    cfg.b = matrix_from_json(require(j, "B", "config"), "B");
    cfg.c = matrix_from_json(require(j, "C", "config"), "C");
  } else if (cfg.kind == "network") {
    reject_unknown(j, {"kind", "alpha", "W", "nonlinearity", "analysis"}, "config");
    cfg.alpha = number(require(j, "alpha", "config"), "alpha");
    cfg.w = matrix_from_json(require(j, "W", "config"), "W");
  } else {
    throw Error(Errc::parse, "kind must be \"lurie\" or \"network\"");
  }
  cfg.nonlinearity = parse_nonlinearity(require(j, "nonlinearity", "config"));
  cfg.analysis = parse_analysis(j.contains("analysis") ? j["analysis"] : json());

  // Dimension consistency is part of loading.
  try {
    const int n = system_dimension(cfg);
    if (cfg.analysis.k < 1 || cfg.analysis.k > n)
      throw Error(Errc::parse, "analysis.k must lie in [1, " + std::to_string(n) + "]");
    if (cfg.analysis.p && (cfg.analysis.p->rows() != n || cfg.analysis.p->cols() != n))
      throw Error(Errc::parse, "P must be n x n");
    if (cfg.kind == "network" && cfg.analysis.p)
      throw Error(Errc::parse, "analysis.P applies to Lurie systems; networks use the scalar search");
    if (cfg.kind == "lurie")
      build_lurie(cfg);
    else
      build_network(cfg);
  } catch (const Error& e) {
    if (e.code() == Errc::parse) throw;
    throw Error(Errc::parse, e.what());
  }
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::parse, "malformed JSON in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

json to_json(const SystemConfig& cfg) {
  json j{{"kind", cfg.kind}};
  if (cfg.kind == "lurie") {
    j["A"] = matrix_to_json(cfg.a);
    j["B"] = matrix_to_json(cfg.b);
    j["C"] = matrix_to_json(cfg.c);
  } else {
    j["alpha"] = cfg.alpha;
    j["W"] = matrix_to_json(cfg.w);
  }
  j["nonlinearity"] = nonlinearity_to_json(cfg.nonlinearity);
  j["analysis"] = analysis_to_json(cfg.analysis);
  return j;
}

Nonlinearity build_nonlinearity(const NonlinearityConfig& cfg, int default_dim) {
  const int dim = cfg.dim > 0 ? cfg.dim : default_dim;
  Nonlinearity phi = [&] {
    if (cfg.family == "scaled_tanh") return Nonlinearity::scaled_tanh(cfg.gain, dim);
    if (cfg.family == "linear") return Nonlinearity::linear(cfg.linear_gain);
    return Nonlinearity::piecewise_table(cfg.knots, cfg.values, dim);
  }();
  return cfg.bounds.empty() ? phi : phi.with_bounds(cfg.bounds);
}

Nonlinearity build_nonlinearity(const NonlinearityConfig& cfg) { return build_nonlinearity(cfg, cfg.dim); }

int system_dimension(const SystemConfig& cfg) {
  return static_cast<int>(cfg.kind == "lurie" ? cfg.a.rows() : cfg.w.rows());
}

LurieSystem build_lurie(const SystemConfig& cfg) {
  if (cfg.kind != "lurie") throw Error(Errc::wrong_structure, "config is not a Lurie system");
  return LurieSystem(cfg.a, cfg.b, cfg.c,
                     build_nonlinearity(cfg.nonlinearity, static_cast<int>(cfg.c.rows())));
}

NetworkSystem build_network(const SystemConfig& cfg) {
  if (cfg.kind != "network") throw Error(Errc::wrong_structure, "config is not a network system");
  return NetworkSystem(cfg.alpha, cfg.w, build_nonlinearity(cfg.nonlinearity, static_cast<int>(cfg.w.rows())));
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw Error(Errc::parse, "'" + path + "' is empty");

  if (text[first] == '[' || text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(Errc::parse, "malformed JSON in '" + path + "': " + e.what());
    }
    if (j.is_object()) {
      if (!j.contains("matrix")) throw Error(Errc::parse, "expected a \"matrix\" key");
      return matrix_from_json(j["matrix"], "matrix");
    }
    return matrix_from_json(j, "matrix");
  }

  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(Errc::parse, "bad CSV cell '" + cell + "' in '" + path + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(Errc::parse, "ragged CSV in '" + path + "'");
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  if (!m.allFinite()) throw Error(Errc::parse, "non-finite entries in '" + path + "'");
  return m;
}

}  // namespace kcontract::cli
