#pragma once

#include <nlohmann/json.hpp>

#include "kcontract/certify.hpp"

namespace kcontract {

/// Row-major nested arrays.
nlohmann::json matrix_to_json(const Matrix& m);
/// Accepts nested arrays of numbers, or a flat array as a column vector.
/// Throws Errc::parse on ragged or non-numeric input.
Matrix matrix_from_json(const nlohmann::json& j, const char* what);

nlohmann::json to_json(const Tolerances& tol);
Tolerances tolerances_from_json(const nlohmann::json& j, Tolerances base = {});

/// passed, k, eta1, eta2, rate_bound, scaling {Q, P}, margins, assumptions,
/// plus the tolerance block.
nlohmann::json to_json(const Certificate& cert);
nlohmann::json to_json(const ScalarSearchResult& r);

}  // namespace kcontract
