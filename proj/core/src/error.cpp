#include "kcontract/error.hpp"

namespace kcontract {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::invalid_tuple: return "invalid-tuple";
    case Errc::invalid_rank: return "invalid-rank";
    case Errc::invalid_order: return "invalid-order";
    case Errc::capacity: return "capacity";
    case Errc::shape: return "shape";
    case Errc::non_finite: return "non-finite";
    case Errc::singular_scaling: return "singular-scaling";
    case Errc::not_positive_definite: return "not-positive-definite";
    case Errc::not_symmetric: return "not-symmetric";
    case Errc::unbounded_nonlinearity: return "unbounded-nonlinearity";
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::wrong_structure: return "wrong-structure";
    case Errc::no_feasible_gamma: return "no-feasible-gamma";
    case Errc::divergence: return "divergence";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::parse: return "parse";
  }
  return "unknown";
}

}  // namespace kcontract
