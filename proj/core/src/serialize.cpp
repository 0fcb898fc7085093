#include "kcontract/serialize.hpp"

#include <string>

#include "kcontract/error.hpp"

namespace kcontract {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, const char* what) {
  const std::string name(what);
  if (!j.is_array() || j.empty()) throw Error(Errc::parse, name + " must be a nonempty array");
  if (!j.front().is_array()) {
    Matrix col(static_cast<Eigen::Index>(j.size()), 1);
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) throw Error(Errc::parse, name + " entries must be numbers");
      col(static_cast<Eigen::Index>(i), 0) = j[i].get<double>();
    }
    return col;
  }
  const std::size_t cols = j.front().size();
  if (cols == 0) throw Error(Errc::parse, name + " rows must be nonempty");
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols) throw Error(Errc::parse, name + " is ragged");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) throw Error(Errc::parse, name + " entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  if (!m.allFinite()) throw Error(Errc::parse, name + " has non-finite entries");
  return m;
}

nlohmann::json to_json(const Tolerances& tol) {
  return {{"psd_rel", tol.psd_rel},
          {"strict_rel", tol.strict_rel},
          {"gain_rel", tol.gain_rel},
          {"sampled_slack", tol.sampled_slack}};
}

Tolerances tolerances_from_json(const nlohmann::json& j, Tolerances base) {
  if (j.is_null()) return base;
  if (!j.is_object()) throw Error(Errc::parse, "tolerances must be an object");
  auto read = [&](const char* key, double& slot) {
    if (!j.contains(key)) return;
    if (!j[key].is_number() || !(j[key].get<double>() >= 0.0))
      throw Error(Errc::parse, std::string("tolerance ") + key + " must be a nonnegative number");
    slot = j[key].get<double>();
  };
  for (const auto& [key, _] : j.items()) {
    if (key != "psd_rel" && key != "strict_rel" && key != "gain_rel" && key != "sampled_slack")
      throw Error(Errc::parse, "unknown tolerance '" + key + "'");
  }
  read("psd_rel", base.psd_rel);
  read("strict_rel", base.strict_rel);
  read("gain_rel", base.gain_rel);
  read("sampled_slack", base.sampled_slack);
  return base;
}

nlohmann::json to_json(const Certificate& cert) {
  nlohmann::json margins = nlohmann::json::object();
  for (const auto& [name, value] : cert.margins) margins[name] = value;
  nlohmann::json scaling = nlohmann::json::object();
  if (cert.scaling.dimension() > 0) {
    scaling["Q"] = matrix_to_json(cert.scaling.q());
    scaling["P"] = matrix_to_json(cert.scaling.p());
  }
  return {{"passed", cert.passed},
          {"k", cert.k},
          {"eta1", cert.eta1},
          {"eta2", cert.eta2},
          {"rate_bound", cert.rate_bound},
          {"scaling", std::move(scaling)},
          {"margins", std::move(margins)},
          {"assumptions", cert.assumptions},
          {"tolerances", to_json(cert.tolerances)}};
}

nlohmann::json to_json(const ScalarSearchResult& r) {
  return {{"gamma", r.gamma}, {"p", r.p}, {"eta1", r.eta1}, {"eta2", r.eta2}, {"feasible", r.feasible}};
}

}  // namespace kcontract
