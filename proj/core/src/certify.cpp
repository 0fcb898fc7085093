#include "kcontract/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kcontract/error.hpp"

namespace kcontract {

namespace {

constexpr char kSampledTag[] = "non-rigorous:";

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_order_for(const LurieSystem& sys, int k) {
  if (k < 1 || k > sys.dimension())
    throw Error(Errc::invalid_order, "k=" + std::to_string(k) + " outside [1, " +
                                         std::to_string(sys.dimension()) + "]");
}

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

struct GainSup {
  double value = 0.0;
  bool rigorous = true;
  std::size_t samples = 0;
};

// sum_{i<=k} lambda_i(M^T (J^T J - I) M) at a fixed Jacobian.
double gain_expression(const Matrix& jac, const Matrix& m, int k) {
  const Matrix inner = jac.transpose() * jac - identity(jac.cols());
  const Matrix g = m.transpose() * inner * m;
  return top_k_eig_sum(0.5 * (g + g.transpose()), k);
}

GainSup gain_sup(const LurieSystem& sys, int k, const ScalingQ& q, const CheckOptions& opts) {
  const Matrix m = sys.c() * q.q_inverse();
  const Nonlinearity& phi = sys.phi();
  if (!opts.gain_samples.empty()) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [t, y] : opts.gain_samples) worst = std::max(worst, gain_expression(phi.jacobian(t, y), m, k));
    return GainSup{worst, false, opts.gain_samples.size()};
  }
  return GainSup{gain_condition_sup(sys, k, q), true, 0};
}

std::vector<std::string> gain_assumptions(const LurieSystem& sys, const GainSup& sup) {
  std::vector<std::string> out = sys.phi().assumptions();
  if (!sup.rigorous)
    out.push_back(std::string(kSampledTag) + " gain supremum estimated from " +
                  std::to_string(sup.samples) + " sampled (t, y) points");
  return out;
}

}  // namespace

bool Certificate::rigorous() const {
  return std::none_of(assumptions.begin(), assumptions.end(),
                      [](const std::string& a) { return a.rfind(kSampledTag, 0) == 0; });
}

Matrix riccati_matrix(const LurieSystem& sys, int k, const ScalingQ& q, double eta1) {
  require_order_for(sys, k);
  if (q.dimension() != sys.dimension()) throw Error(Errc::shape, "scaling dimension mismatch");
  const Matrix& qm = q.q();
  const Matrix& qi = q.q_inverse();
  const Matrix pk = multiplicative_compound(q.p(), k).body;
  const Matrix qk = multiplicative_compound(qm, k).body;
  const Matrix ak = additive_compound(sys.a(), k).body;
  const Matrix input_part = qm * sys.b() * sys.b().transpose() * qm;
  const Matrix output_part = qi * sys.c().transpose() * sys.c() * qi;
  // The additive compound is linear, so the two terms share one evaluation.
  const Matrix coupling = additive_compound(input_part + output_part, k).body;
  return pk * ak + ak.transpose() * pk + eta1 * pk + qk * coupling * qk;
}

double gain_condition_sup(const LurieSystem& sys, int k, const ScalingQ& q) {
  require_order_for(sys, k);
  const Nonlinearity& phi = sys.phi();
  const Matrix m = sys.c() * q.q_inverse();
  if (const auto constant = phi.constant_jacobian()) return gain_expression(*constant, m, k);

  const Matrix gram = m.transpose() * m;
  std::optional<double> best;
  auto offer = [&](double v) { best = best ? std::min(*best, v) : v; };

  // J^T J <= L^2 I, and congruence plus the top-k sum preserve the order.
  // For scaled tanh this is attained at y = 0.
  if (const auto l = phi.norm_bound()) offer(top_k_eig_sum((*l * *l - 1.0) * gram, k));

  // Ky Fan: topk(X - G) <= topk(X) + topk(-G), with
  // topk(M^T J^T J M) <= sigma_1^2(M) sup sum sigma_i^2(J).
  try {
    const double beta = jacobian_gain_bounds(phi, k);
    const double s1 = norm2(m);
    offer(s1 * s1 * beta + top_k_eig_sum(-gram, k));
  } catch (const Error& e) {
    if (e.code() != Errc::unbounded_nonlinearity) throw;
  }

  if (!best)
    throw Error(Errc::unbounded_nonlinearity,
                std::string(phi.family_name()) +
                    " nonlinearity has no certified Jacobian bound; declare jac_norm or jac_topk_sq");
  return *best;
}

std::pair<double, double> best_etas(const LurieSystem& sys, int k, const Matrix& p,
                                    const CheckOptions& opts) {
  require_order_for(sys, k);
  const ScalingQ q = symmetric_sqrt(p);
  const Matrix base = riccati_matrix(sys, k, q, 0.0);
  // base + eta1 Q^(k) Q^(k) <= 0  <=>  eta1 <= -lambda_max((Q^-1)^(k) base (Q^-1)^(k)).
  const Matrix qik = multiplicative_compound(q.q_inverse(), k).body;
  const double eta1 = -lambda_max_sym(qik * base * qik);
  const double eta2 = -gain_sup(sys, k, q, opts).value;
  return {eta1, eta2};
}

Certificate check_theorem1(const LurieSystem& sys, int k, const Matrix& p, double eta1, double eta2,
                           const CheckOptions& opts) {
  require_order_for(sys, k);
  if (!std::isfinite(eta1) || !std::isfinite(eta2))
    throw Error(Errc::non_finite, "eta1 and eta2 must be finite");
  const Tolerances& tol = opts.tol;

  Certificate cert;
  cert.k = k;
  cert.eta1 = eta1;
  cert.eta2 = eta2;
  cert.rate_bound = 0.5 * (eta1 + eta2);
  cert.tolerances = tol;
  cert.scaling = symmetric_sqrt(p);

  const Matrix riccati = riccati_matrix(sys, k, cert.scaling, eta1);
  const double lmax = lambda_max_sym(riccati);
  const double riccati_tol = tol.psd_rel * (1.0 + norm2(riccati));
  cert.margins["riccati_slack"] = -lmax;
  const bool riccati_ok = lmax <= riccati_tol;

  const GainSup sup = gain_sup(sys, k, cert.scaling, opts);
  cert.margins["gain_gap"] = -eta2 - sup.value;
  const bool gain_ok = sup.value + eta2 <= tol.gain_rel * (1.0 + std::abs(eta2));

  cert.assumptions = gain_assumptions(sys, sup);
  cert.passed = riccati_ok && gain_ok && eta1 + eta2 > 0.0;
  return cert;
}

Certificate certify_with_p(const LurieSystem& sys, int k, const Matrix& p, const CheckOptions& opts) {
  const auto [eta1, eta2] = best_etas(sys, k, p, opts);
  return check_theorem1(sys, k, p, eta1, eta2, opts);
}

Certificate search_scalar_p(const LurieSystem& sys, int k, const Tolerances& tol) {
  require_order_for(sys, k);
  const Eigen::Index n = sys.dimension();
  const Matrix sym_a = sys.a() + sys.a().transpose();
  const Matrix bb = sys.b() * sys.b().transpose();
  const Matrix cc = sys.c().transpose() * sys.c();

  // For P = p I the riccati condition reads topk(A + A^T + p B B^T + C^T C / p) + eta1 <= 0.
  auto objective = [&](double log_p) {
    const double p = std::exp(log_p);
    const double eta1 = -top_k_eig_sum(sym_a + p * bb + cc / p, k);
    const double eta2 = -gain_condition_sup(sys, k, symmetric_sqrt(p * identity(n)));
    return eta1 + eta2;
  };

  constexpr double kLo = -6.0 * 2.302585092994046;  // ln 1e-6
  constexpr double kHi = 6.0 * 2.302585092994046;
  constexpr int kGrid = 241;
  const double step = (kHi - kLo) / (kGrid - 1);
  int best_i = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double v = objective(kLo + i * step);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }

  // Golden-section refinement inside the neighbouring grid cells.
  double a = kLo + std::max(0, best_i - 1) * step;
  double b = kLo + std::min(kGrid - 1, best_i + 1) * step;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    }
  }
  double log_p = 0.5 * (a + b);
  if (objective(log_p) < best_v) log_p = kLo + best_i * step;

  const double p = std::exp(log_p);
  CheckOptions opts;
  opts.tol = tol;
  Certificate cert = certify_with_p(sys, k, p * identity(n), opts);
  cert.assumptions.push_back("P = p I with p = " + format_real(p) + " chosen by scalar search");
  return cert;
}

AriResult check_ari_k1(const LurieSystem& sys, const Matrix& p, const Tolerances& tol) {
  const ScalingQ q = symmetric_sqrt(p);
  if (q.dimension() != sys.dimension()) throw Error(Errc::shape, "P dimension mismatch");
  const Matrix& pm = q.p();
  const Matrix r = pm * sys.a() + sys.a().transpose() * pm +
                   pm * sys.b() * sys.b().transpose() * pm + sys.c().transpose() * sys.c();
  const double lmax = lambda_max_sym(r);
  return AriResult{lmax <= -tol.strict_rel * (1.0 + norm2(r)), -lmax};
}

Certificate check_scalar_remark(const LurieSystem& sys, int k, double p, double eta1,
                                const Tolerances& tol) {
  require_order_for(sys, k);
  const Eigen::Index n = sys.dimension();
  if (sys.c().rows() != n || sys.c() != identity(n))
    throw Error(Errc::wrong_structure, "scalar-P condition needs C = I");
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(Errc::invalid_parameter, "p must be positive");
  if (!std::isfinite(eta1)) throw Error(Errc::non_finite, "eta1 must be finite");

  Certificate cert;
  cert.k = k;
  cert.tolerances = tol;
  cert.scaling = symmetric_sqrt(p * identity(n));

  const Matrix riccati = riccati_matrix(sys, k, cert.scaling, eta1);
  const double lmax = lambda_max_sym(riccati);
  const bool riccati_ok = lmax <= tol.psd_rel * (1.0 + norm2(riccati));

  // 2 mu(J^[k]) <= -eta1 - k/p + (1/p) sup sum sigma_i^2(J_phi)
  const double bound = jacobian_gain_bounds(sys.phi(), k);
  cert.eta1 = eta1;
  cert.eta2 = (k - bound) / p;
  cert.rate_bound = 0.5 * (cert.eta1 + cert.eta2);
  cert.margins["riccati_slack"] = -lmax;
  cert.margins["scalar_gap"] = k + eta1 * p - bound;
  cert.assumptions = sys.phi().assumptions();
  cert.passed = riccati_ok && k + eta1 * p - bound > 0.0;
  return cert;
}

NetworkCondition network_condition(const NetworkSystem& net, int k) {
  if (k < 1 || k > net.dimension())
    throw Error(Errc::invalid_order, "k=" + std::to_string(k) + " outside [1, " +
                                         std::to_string(net.dimension()) + "]");
  const auto l = net.activation().norm_bound();
  if (!l)
    throw Error(Errc::unbounded_nonlinearity,
                std::string(net.activation().family_name()) +
                    " activation has no Jacobian norm bound; declare jac_norm");
  NetworkCondition cond;
  cond.value = (*l) * (*l) * top_k_singular_sq_sum(net.weights(), k);
  cond.threshold = net.alpha() * net.alpha() * k;
  cond.holds = cond.value < cond.threshold;
  return cond;
}

ScalarSearchResult find_scalar_gamma_p(const NetworkSystem& net, int k, const Tolerances& tol) {
  const NetworkCondition cond = network_condition(net, k);
  const double lower = std::sqrt(cond.value / k);
  if (!(lower < net.alpha()))
    throw Error(Errc::no_feasible_gamma, "gamma interval (" + format_real(lower) + ", " +
                                             format_real(net.alpha()) + ") is empty");
  ScalarSearchResult out;
  out.gamma = 0.5 * (lower + net.alpha());
  // p = 1/gamma maximizes k (2 alpha - gamma^2 p - 1/p).
  out.p = 1.0 / out.gamma;
  out.eta1 = 2.0 * k * (net.alpha() - out.gamma);
  out.eta2 = out.gamma * (k - cond.value / (out.gamma * out.gamma));

  CheckOptions opts;
  opts.tol = tol;
  const LurieSystem lurie = network_to_lurie(net, out.gamma);
  const Eigen::Index n = net.dimension();
  out.feasible = out.gamma > 0.0 && out.gamma < net.alpha() && out.p > 0.0 &&
                 check_theorem1(lurie, k, out.p * identity(n), out.eta1, out.eta2, opts).passed;
  return out;
}

Certificate check_network_k_contraction(const NetworkSystem& net, int k, const Tolerances& tol) {
  const NetworkCondition cond = network_condition(net, k);
  if (!cond.holds) {
    Certificate cert;
    cert.k = k;
    cert.tolerances = tol;
    cert.scaling = ScalingQ::identity(net.dimension());
    cert.margins["network_gap"] = cond.gap();
    cert.assumptions = net.activation().assumptions();
    return cert;
  }
  const ScalarSearchResult search = find_scalar_gamma_p(net, k, tol);
  CheckOptions opts;
  opts.tol = tol;
  const Eigen::Index n = net.dimension();
  Certificate cert = check_theorem1(network_to_lurie(net, search.gamma), k, search.p * identity(n),
                                    search.eta1, search.eta2, opts);
  cert.margins["network_gap"] = cond.gap();
  cert.assumptions.push_back("Lurie form with gamma = " + format_real(search.gamma) +
                             ", P = p I with p = " + format_real(search.p));
  cert.passed = cert.passed && search.feasible;
  return cert;
}

double lemma1_gap(const Matrix& m, const Matrix& n, int k) {
  if (n.rows() != m.cols() || n.cols() != m.rows())
    throw Error(Errc::shape, "gap needs M (n x m) and N (m x n)");
  const Matrix lhs = -m * n - n.transpose() * m.transpose() - n.transpose() * n;
  const Matrix diff = additive_compound(m * m.transpose(), k).body - additive_compound(lhs, k).body;
  const Matrix sym = 0.5 * (diff + diff.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double sampled_mu_bound(const LurieSystem& sys, int k, const ScalingQ& q,
                        const std::vector<std::pair<double, Vector>>& samples) {
  require_order_for(sys, k);
  if (samples.empty()) throw Error(Errc::invalid_parameter, "need at least one sample");
  const Matrix qk = multiplicative_compound(q.q(), k).body;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [t, x] : samples)
    worst = std::max(worst, mu2_scaled(additive_compound(jacobian_closed_loop(sys, t, x), k).body, qk));
  return worst;
}

}  // namespace kcontract
