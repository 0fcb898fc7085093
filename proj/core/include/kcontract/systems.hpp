#pragma once

// Lurie systems  x' = A x - B phi(t, C x)  (no feedthrough) and networked
// systems  x' = -alpha x + W f(x), with feedback nonlinearities that carry
// exact Jacobians and certified Jacobian bounds.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kcontract/compound.hpp"

namespace kcontract {

class Nonlinearity;

/// y -> gain * tanh(y), component-wise.
struct ScaledTanh {
  double gain = 0.0;
  int dim = 0;
};

/// y -> K y.
struct LinearGain {
  Matrix gain;
};

/// Component-wise piecewise-linear interpolation through (knots, values),
/// held constant outside the knot range. Simulation only: it has no analytic
/// Jacobian bound, so certification needs declared bounds.
struct PiecewiseTable {
  std::vector<double> knots;
  std::vector<double> values;
  int dim = 0;
};

/// y -> -(1/gamma) W f(y): the feedback that turns a network into a Lurie
/// system with (A, B, C) = (-alpha I, gamma I, I).
struct NetworkFeedback {
  Matrix weights;
  double gamma = 1.0;
  std::shared_ptr<const Nonlinearity> inner;
};

/// User-supplied bounds, trusted as facts and echoed into certificates.
struct DeclaredBounds {
  /// L with ||J_phi(t, y)||_2 <= L for all t, y.
  std::optional<double> jac_norm;
  /// k -> bound on sup sum_{i<=k} sigma_i^2(J_phi).
  std::map<int, double> jac_topk_sq;

  bool empty() const noexcept { return !jac_norm && jac_topk_sq.empty(); }
  friend bool operator==(const DeclaredBounds&, const DeclaredBounds&) = default;
};

class Nonlinearity {
 public:
  using Family = std::variant<ScaledTanh, LinearGain, PiecewiseTable, NetworkFeedback>;

  static Nonlinearity scaled_tanh(double gain, int dim);
  static Nonlinearity linear(Matrix gain);
  static Nonlinearity piecewise_table(std::vector<double> knots, std::vector<double> values, int dim);
  static Nonlinearity network_feedback(Matrix weights, double gamma, Nonlinearity inner);

  Nonlinearity with_bounds(DeclaredBounds bounds) const;

  int input_dim() const noexcept { return input_dim_; }
  int output_dim() const noexcept { return output_dim_; }
  const Family& family() const noexcept { return family_; }
  const DeclaredBounds& declared() const noexcept { return declared_; }
  std::string_view family_name() const noexcept;

  /// phi(t, y). Built-in families ignore t.
  Vector evaluate(double t, const Vector& y) const;
  /// d phi / d y at (t, y), output_dim x input_dim.
  Matrix jacobian(double t, const Vector& y) const;

  /// Smallest known L with ||J_phi||_2 <= L everywhere (analytic or declared).
  std::optional<double> norm_bound() const;
  /// Set when the Jacobian does not depend on (t, y).
  std::optional<Matrix> constant_jacobian() const;
  /// Declared bounds rendered as human-readable assumptions.
  std::vector<std::string> assumptions() const;

 private:
  Nonlinearity(Family family, int input_dim, int output_dim)
      : family_(std::move(family)), input_dim_(input_dim), output_dim_(output_dim) {}

  Family family_;
  int input_dim_ = 0;
  int output_dim_ = 0;
  DeclaredBounds declared_;
};

/// Certified upper bound on sup_{t,y} sum_{i<=k} sigma_i^2(J_phi(t, y)).
/// Throws Errc::unbounded_nonlinearity when no analytic or declared bound exists.
double jacobian_gain_bounds(const Nonlinearity& phi, int k);

class LurieSystem {
 public:
  LurieSystem(Matrix a, Matrix b, Matrix c, Nonlinearity phi);

  const Matrix& a() const noexcept { return a_; }
  const Matrix& b() const noexcept { return b_; }
  const Matrix& c() const noexcept { return c_; }
  const Nonlinearity& phi() const noexcept { return phi_; }
  int dimension() const noexcept { return static_cast<int>(a_.rows()); }

 private:
  Matrix a_, b_, c_;
  Nonlinearity phi_;
};

class NetworkSystem {
 public:
  NetworkSystem(double alpha, Matrix weights, Nonlinearity activation);

  double alpha() const noexcept { return alpha_; }
  const Matrix& weights() const noexcept { return w_; }
  const Nonlinearity& activation() const noexcept { return f_; }
  int dimension() const noexcept { return static_cast<int>(w_.rows()); }

 private:
  double alpha_;
  Matrix w_;
  Nonlinearity f_;
};

/// A - B J_phi(t, C x) C.
Matrix jacobian_closed_loop(const LurieSystem& sys, double t, const Vector& x);
/// -alpha I + W J_f(x).
Matrix network_jacobian(const NetworkSystem& net, double t, const Vector& x);

/// (A, B, C) = (-alpha I, gamma I, I) with phi(y) = -(1/gamma) W f(y).
LurieSystem network_to_lurie(const NetworkSystem& net, double gamma);

Vector evaluate_field(const LurieSystem& sys, double t, const Vector& x);
Vector evaluate_field(const NetworkSystem& net, double t, const Vector& x);

/// Type-erased vector field with Jacobian, as consumed by the integrators.
struct Dynamics {
  int dimension = 0;
  std::function<Vector(double, const Vector&)> field;
  std::function<Matrix(double, const Vector&)> jacobian;
};

Dynamics make_dynamics(const LurieSystem& sys);
Dynamics make_dynamics(const NetworkSystem& net);

}  // namespace kcontract
