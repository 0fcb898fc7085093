#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kcontract {

enum class Errc {
  invalid_dimension,
  invalid_tuple,
  invalid_rank,
  invalid_order,
  capacity,
  shape,
  non_finite,
  singular_scaling,
  not_positive_definite,
  not_symmetric,
  unbounded_nonlinearity,
  invalid_parameter,
  wrong_structure,
  no_feasible_gamma,
  divergence,
  insufficient_data,
  parse,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised by the integrators when the state norm leaves the divergence guard.
class DivergenceError : public Error {
 public:
  DivergenceError(double escape_time, const std::string& what)
      : Error(Errc::divergence, what), escape_time_(escape_time) {}

  double escape_time() const noexcept { return escape_time_; }

 private:
  double escape_time_;
};

}  // namespace kcontract
