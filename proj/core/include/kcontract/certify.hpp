#pragma once

// Sufficient conditions for k-contraction of Lurie systems and of networks
// x' = -alpha x + W f(x).
//
// A Lurie system x' = A x - B phi(t, C x) is k-contractive with rate
// (eta1 + eta2) / 2 in the norm |z| = |Q^(k) z|_2 when, for P = Q Q with
// Q symmetric positive definite,
//
//   P^(k) A^[k] + (A^[k])^T P^(k) + eta1 P^(k)
//       + Q^(k) ((Q B B^T Q)^[k] + (Q^-1 C^T C Q^-1)^[k]) Q^(k)  <= 0      (riccati)
//
//   sup_{t,y} sum_{i<=k} lambda_i(Q^-1 C^T (J_phi^T J_phi - I) C Q^-1)  <= -eta2  (gain)
//
// and eta1 + eta2 > 0. The supremum in the gain condition is discharged only
// through certified Jacobian bounds unless sampling is requested explicitly.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kcontract/measures.hpp"
#include "kcontract/systems.hpp"

namespace kcontract {

struct Tolerances {
  /// Riccati "<= 0" holds when lambda_max <= psd_rel * (1 + ||M||_2).
  double psd_rel = 1e-9;
  /// The k = 1 ARI "< 0" needs lambda_max <= -strict_rel * (1 + ||R||_2).
  double strict_rel = 1e-9;
  /// Gain "<= -eta2" holds when sup + eta2 <= gain_rel * (1 + |eta2|).
  double gain_rel = 1e-9;
  /// Slack allowed when comparing sampled measures against a certified rate.
  double sampled_slack = 1e-8;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct Certificate {
  bool passed = false;
  int k = 0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double rate_bound = 0.0;
  ScalingQ scaling;
  /// riccati_slack: -lambda_max of the riccati matrix (>= -tolerance when met)
  /// gain_gap:      -eta2 - sup of the gain expression
  /// scalar_gap:    k + eta1 p - sup sum sigma_i^2(J_phi)   (scalar P, C = I)
  /// network_gap:   alpha^2 k - L^2 sum sigma_i^2(W)
  std::map<std::string, double> margins;
  std::vector<std::string> assumptions;
  Tolerances tolerances;

  /// False when any step relied on sampled rather than certified bounds.
  bool rigorous() const;
};

struct ScalarSearchResult {
  double gamma = 0.0;
  double p = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  bool feasible = false;
};

struct AriResult {
  bool holds = false;
  /// -lambda_max(P A + A^T P + P B B^T P + C^T C).
  double margin = 0.0;
};

/// L^2 sum_{i<=k} sigma_i^2(W) against alpha^2 k.
struct NetworkCondition {
  double value = 0.0;
  double threshold = 0.0;
  bool holds = false;
  double gap() const noexcept { return threshold - value; }
};

/// Options for the Riccati certificate check. Non-empty gain_samples switch the
/// gain supremum to an empirical maximum over the listed (t, y) points; the
/// resulting certificate is marked non-rigorous.
struct CheckOptions {
  Tolerances tol;
  std::vector<std::pair<double, Vector>> gain_samples;
};

/// The riccati matrix for given Q and eta1.
Matrix riccati_matrix(const LurieSystem& sys, int k, const ScalingQ& q, double eta1);

/// Upper bound on sup_{t,y} sum_{i<=k} lambda_i(Q^-1 C^T (J^T J - I) C Q^-1).
/// Exact for constant Jacobians and for scaled tanh; otherwise the smaller of
/// the norm-bound and Ky Fan estimates.
double gain_condition_sup(const LurieSystem& sys, int k, const ScalingQ& q);

/// Largest eta1 meeting the riccati condition and largest eta2 meeting the
/// gain condition for the given P.
std::pair<double, double> best_etas(const LurieSystem& sys, int k, const Matrix& p,
                                    const CheckOptions& opts = {});

Certificate check_theorem1(const LurieSystem& sys, int k, const Matrix& p, double eta1, double eta2,
                           const CheckOptions& opts = {});

/// check_theorem1 with best_etas.
Certificate certify_with_p(const LurieSystem& sys, int k, const Matrix& p,
                           const CheckOptions& opts = {});

/// Searches P = p I over a log grid for the largest eta1 + eta2 and
/// certifies the winner.
Certificate search_scalar_p(const LurieSystem& sys, int k, const Tolerances& tol = {});

/// Strict k = 1 algebraic Riccati inequality P A + A^T P + P B B^T P + C^T C < 0.
AriResult check_ari_k1(const LurieSystem& sys, const Matrix& p, const Tolerances& tol = {});

/// Scalar P = p I with C = I: passes iff sup sum sigma_i^2(J_phi) < k + eta1 p
/// and eta1 meets the riccati condition.
Certificate check_scalar_remark(const LurieSystem& sys, int k, double p, double eta1,
                                const Tolerances& tol = {});

NetworkCondition network_condition(const NetworkSystem& net, int k);

Certificate check_network_k_contraction(const NetworkSystem& net, int k, const Tolerances& tol = {});

/// gamma is the midpoint of (sqrt(L^2 sum sigma_i^2(W) / k), alpha), p = 1/gamma.
/// Throws Errc::no_feasible_gamma when the interval is empty.
ScalarSearchResult find_scalar_gamma_p(const NetworkSystem& net, int k, const Tolerances& tol = {});

/// lambda_min((M M^T)^[k] - (-M N - N^T M^T - N^T N)^[k]); nonnegative for all M, N.
double lemma1_gap(const Matrix& m, const Matrix& n, int k);

/// max over samples of mu_{2,Q^(k)}(J(t, x)^[k]).
double sampled_mu_bound(const LurieSystem& sys, int k, const ScalingQ& q,
                        const std::vector<std::pair<double, Vector>>& samples);

}  // namespace kcontract
