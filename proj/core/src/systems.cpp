#include "kcontract/systems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kcontract/error.hpp"
#include "kcontract/measures.hpp"

namespace kcontract {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_length(const Vector& v, int n, const char* what) {
  if (v.size() != n)
    throw Error(Errc::shape, std::string(what) + " has length " + std::to_string(v.size()) +
                                 ", expected " + std::to_string(n));
}

// Index of the segment [knots[i], knots[i+1]) holding y, or -1 / size-1 outside.
std::ptrdiff_t segment_of(const std::vector<double>& knots, double y) {
  if (y < knots.front()) return -1;
  if (y >= knots.back()) return static_cast<std::ptrdiff_t>(knots.size()) - 1;
  const auto it = std::upper_bound(knots.begin(), knots.end(), y);
  return std::distance(knots.begin(), it) - 1;
}

double table_value(const PiecewiseTable& t, double y) {
  const std::ptrdiff_t s = segment_of(t.knots, y);
  if (s < 0) return t.values.front();
  if (s >= static_cast<std::ptrdiff_t>(t.knots.size()) - 1) return t.values.back();
  const auto i = static_cast<std::size_t>(s);
  const double w = (y - t.knots[i]) / (t.knots[i + 1] - t.knots[i]);
  return (1.0 - w) * t.values[i] + w * t.values[i + 1];
}

double table_slope(const PiecewiseTable& t, double y) {
  const std::ptrdiff_t s = segment_of(t.knots, y);
  if (s < 0 || s >= static_cast<std::ptrdiff_t>(t.knots.size()) - 1) return 0.0;
  const auto i = static_cast<std::size_t>(s);
  return (t.values[i + 1] - t.values[i]) / (t.knots[i + 1] - t.knots[i]);
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Nonlinearity Nonlinearity::scaled_tanh(double gain, int dim) {
  if (!std::isfinite(gain)) throw Error(Errc::non_finite, "tanh gain must be finite");
  if (dim < 1) throw Error(Errc::shape, "nonlinearity dimension must be positive");
  return Nonlinearity(ScaledTanh{gain, dim}, dim, dim);
}

Nonlinearity Nonlinearity::linear(Matrix gain) {
  if (gain.size() == 0) throw Error(Errc::shape, "linear gain must be nonempty");
  require_finite(gain, "linear gain");
  const int in = static_cast<int>(gain.cols());
  const int out = static_cast<int>(gain.rows());
  return Nonlinearity(LinearGain{std::move(gain)}, in, out);
}

Nonlinearity Nonlinearity::piecewise_table(std::vector<double> knots, std::vector<double> values,
                                           int dim) {
  if (dim < 1) throw Error(Errc::shape, "nonlinearity dimension must be positive");
  if (knots.size() < 2 || knots.size() != values.size())
    throw Error(Errc::invalid_parameter, "table needs at least two knots and one value per knot");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i]) || !std::isfinite(values[i]))
      throw Error(Errc::non_finite, "table entries must be finite");
    if (i > 0 && knots[i - 1] >= knots[i])
      throw Error(Errc::invalid_parameter, "table knots must be strictly increasing");
  }
  return Nonlinearity(PiecewiseTable{std::move(knots), std::move(values), dim}, dim, dim);
}

Nonlinearity Nonlinearity::network_feedback(Matrix weights, double gamma, Nonlinearity inner) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(Errc::invalid_parameter, "gamma must be positive");
  require_finite(weights, "W");
  if (weights.cols() != inner.output_dim())
    throw Error(Errc::shape, "W columns must match activation output dimension");
  const int in = inner.input_dim();
  const int out = static_cast<int>(weights.rows());
  return Nonlinearity(
      NetworkFeedback{std::move(weights), gamma, std::make_shared<const Nonlinearity>(std::move(inner))},
      in, out);
}

Nonlinearity Nonlinearity::with_bounds(DeclaredBounds bounds) const {
  if (bounds.jac_norm && !(*bounds.jac_norm >= 0.0))
    throw Error(Errc::invalid_parameter, "declared Jacobian norm bound must be nonnegative");
  for (const auto& [k, v] : bounds.jac_topk_sq) {
    if (k < 1) throw Error(Errc::invalid_parameter, "declared top-k bound needs k >= 1");
    if (!(v >= 0.0)) throw Error(Errc::invalid_parameter, "declared top-k bound must be nonnegative");
  }
  Nonlinearity copy = *this;
  copy.declared_ = std::move(bounds);
  return copy;
}

std::string_view Nonlinearity::family_name() const noexcept {
  return std::visit(overloaded{[](const ScaledTanh&) { return std::string_view("scaled_tanh"); },
                               [](const LinearGain&) { return std::string_view("linear"); },
                               [](const PiecewiseTable&) { return std::string_view("piecewise_table"); },
                               [](const NetworkFeedback&) { return std::string_view("network_feedback"); }},
                    family_);
}

Vector Nonlinearity::evaluate(double t, const Vector& y) const {
  require_length(y, input_dim_, "nonlinearity input");
  return std::visit(
      overloaded{[&](const ScaledTanh& f) -> Vector { return f.gain * y.array().tanh().matrix(); },
                 [&](const LinearGain& f) -> Vector { return f.gain * y; },
                 [&](const PiecewiseTable& f) -> Vector {
                   Vector out(y.size());
                   for (Eigen::Index i = 0; i < y.size(); ++i) out(i) = table_value(f, y(i));
                   return out;
                 },
                 [&](const NetworkFeedback& f) -> Vector {
                   return -(f.weights * f.inner->evaluate(t, y)) / f.gamma;
                 }},
      family_);
}

Matrix Nonlinearity::jacobian(double t, const Vector& y) const {
  require_length(y, input_dim_, "nonlinearity input");
  return std::visit(
      overloaded{[&](const ScaledTanh& f) -> Matrix {
                   const Eigen::ArrayXd th = y.array().tanh();
                   const Vector sech2 = (1.0 - th.square()).matrix();
                   return (f.gain * sech2).asDiagonal();
                 },
                 [&](const LinearGain& f) -> Matrix { return f.gain; },
                 [&](const PiecewiseTable& f) -> Matrix {
                   Vector slopes(y.size());
                   for (Eigen::Index i = 0; i < y.size(); ++i) slopes(i) = table_slope(f, y(i));
                   return slopes.asDiagonal();
                 },
                 [&](const NetworkFeedback& f) -> Matrix {
                   return -(f.weights * f.inner->jacobian(t, y)) / f.gamma;
                 }},
      family_);
}

std::optional<double> Nonlinearity::norm_bound() const {
  const std::optional<double> analytic = std::visit(
      overloaded{[](const ScaledTanh& f) -> std::optional<double> { return std::abs(f.gain); },
                 [](const LinearGain& f) -> std::optional<double> { return norm2(f.gain); },
                 [](const PiecewiseTable&) -> std::optional<double> { return std::nullopt; },
                 [](const NetworkFeedback& f) -> std::optional<double> {
                   const auto inner = f.inner->norm_bound();
                   if (!inner) return std::nullopt;
                   return norm2(f.weights) * *inner / f.gamma;
                 }},
      family_);
  if (analytic && declared_.jac_norm) return std::min(*analytic, *declared_.jac_norm);
  return analytic ? analytic : declared_.jac_norm;
}

std::optional<Matrix> Nonlinearity::constant_jacobian() const {
  return std::visit(overloaded{[](const LinearGain& f) -> std::optional<Matrix> { return f.gain; },
                               [](const NetworkFeedback& f) -> std::optional<Matrix> {
                                 const auto inner = f.inner->constant_jacobian();
                                 if (!inner) return std::nullopt;
                                 return Matrix(-(f.weights * *inner) / f.gamma);
                               },
                               [](const auto&) -> std::optional<Matrix> { return std::nullopt; }},
                    family_);
}

std::vector<std::string> Nonlinearity::assumptions() const {
  std::vector<std::string> out;
  if (declared_.jac_norm)
    out.push_back("declared ||J_phi||_2 <= " + format_real(*declared_.jac_norm));
  for (const auto& [k, v] : declared_.jac_topk_sq)
    out.push_back("declared sup sum_{i<=" + std::to_string(k) + "} sigma_i^2(J_phi) <= " +
                  format_real(v));
  if (const auto* fb = std::get_if<NetworkFeedback>(&family_)) {
    for (auto& a : fb->inner->assumptions()) out.push_back("activation: " + a);
  }
  return out;
}

double jacobian_gain_bounds(const Nonlinearity& phi, int k) {
  if (k < 1) throw Error(Errc::invalid_order, "k must be positive");
  // Singular values beyond min(rows, cols) are zero.
  const int k_eff = std::min({k, phi.input_dim(), phi.output_dim()});

  std::optional<double> best;
  auto offer = [&](double v) { best = best ? std::min(*best, v) : v; };

  std::visit(overloaded{[&](const ScaledTanh& f) { offer(k_eff * f.gain * f.gain); },
                        [&](const LinearGain& f) { offer(top_k_singular_sq_sum(f.gain, k_eff)); },
                        [&](const PiecewiseTable&) {},
                        [&](const NetworkFeedback& f) {
                          // sum sigma_i^2(W J_f) <= sum sigma_i^2(W) sigma_i^2(J_f)
                          //                      <= L_f^2 sum sigma_i^2(W)
                          const auto inner = f.inner->norm_bound();
                          if (!inner) return;
                          const int kw = std::min<int>(
                              k_eff, static_cast<int>(std::min(f.weights.rows(), f.weights.cols())));
                          offer(top_k_singular_sq_sum(f.weights, kw) * (*inner) * (*inner) /
                                (f.gamma * f.gamma));
                        }},
             phi.family());

  const DeclaredBounds& declared = phi.declared();
  if (declared.jac_norm) offer(k_eff * (*declared.jac_norm) * (*declared.jac_norm));
  if (const auto it = declared.jac_topk_sq.find(k); it != declared.jac_topk_sq.end()) offer(it->second);

  if (!best)
    throw Error(Errc::unbounded_nonlinearity,
                std::string(phi.family_name()) +
                    " nonlinearity has no analytic Jacobian bound; declare jac_norm or jac_topk_sq[" +
                    std::to_string(k) + "]");
  return *best;
}

LurieSystem::LurieSystem(Matrix a, Matrix b, Matrix c, Nonlinearity phi)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), phi_(std::move(phi)) {
  if (a_.rows() != a_.cols() || a_.rows() == 0) throw Error(Errc::shape, "A must be square");
  require_finite(a_, "A");
  require_finite(b_, "B");
  require_finite(c_, "C");
  const auto n = a_.rows();
  if (b_.rows() != n) throw Error(Errc::shape, "B must have n rows");
  if (c_.cols() != n) throw Error(Errc::shape, "C must have n columns");
  if (b_.cols() != phi_.output_dim())
    throw Error(Errc::shape, "B columns must equal nonlinearity output dimension");
  if (c_.rows() != phi_.input_dim())
    throw Error(Errc::shape, "C rows must equal nonlinearity input dimension");
}

NetworkSystem::NetworkSystem(double alpha, Matrix weights, Nonlinearity activation)
    : alpha_(alpha), w_(std::move(weights)), f_(std::move(activation)) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
    throw Error(Errc::invalid_parameter, "alpha must be positive");
  if (w_.rows() != w_.cols() || w_.rows() == 0) throw Error(Errc::shape, "W must be square");
  require_finite(w_, "W");
  if (f_.input_dim() != w_.rows() || f_.output_dim() != w_.rows())
    throw Error(Errc::shape, "activation must map R^n to R^n");
}

Matrix jacobian_closed_loop(const LurieSystem& sys, double t, const Vector& x) {
  require_length(x, sys.dimension(), "state");
  return sys.a() - sys.b() * sys.phi().jacobian(t, sys.c() * x) * sys.c();
}

Matrix network_jacobian(const NetworkSystem& net, double t, const Vector& x) {
  require_length(x, net.dimension(), "state");
  const auto n = net.dimension();
  return -net.alpha() * Matrix::Identity(n, n) + net.weights() * net.activation().jacobian(t, x);
}

LurieSystem network_to_lurie(const NetworkSystem& net, double gamma) {
  if (!(gamma > 0.0)) throw Error(Errc::invalid_parameter, "gamma must be positive");
  const auto n = net.dimension();
  const Matrix id = Matrix::Identity(n, n);
  return LurieSystem(-net.alpha() * id, gamma * id, id,
                     Nonlinearity::network_feedback(net.weights(), gamma, net.activation()));
}

Vector evaluate_field(const LurieSystem& sys, double t, const Vector& x) {
  require_length(x, sys.dimension(), "state");
  return sys.a() * x - sys.b() * sys.phi().evaluate(t, sys.c() * x);
}

Vector evaluate_field(const NetworkSystem& net, double t, const Vector& x) {
  require_length(x, net.dimension(), "state");
  return -net.alpha() * x + net.weights() * net.activation().evaluate(t, x);
}

Dynamics make_dynamics(const LurieSystem& sys) {
  auto shared = std::make_shared<const LurieSystem>(sys);
  return Dynamics{sys.dimension(),
                  [shared](double t, const Vector& x) { return evaluate_field(*shared, t, x); },
                  [shared](double t, const Vector& x) { return jacobian_closed_loop(*shared, t, x); }};
}

Dynamics make_dynamics(const NetworkSystem& net) {
  auto shared = std::make_shared<const NetworkSystem>(net);
  return Dynamics{net.dimension(),
                  [shared](double t, const Vector& x) { return evaluate_field(*shared, t, x); },
                  [shared](double t, const Vector& x) { return network_jacobian(*shared, t, x); }};
}

}  // namespace kcontract
