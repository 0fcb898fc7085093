#pragma once

// Matrix measures (logarithmic norms) for the L2 and scaled L2 norms, the
// symmetric positive-definite square root, and top-k spectral sums.

#include "kcontract/compound.hpp"

namespace kcontract {

namespace tol {
/// Relative asymmetry tolerated before a matrix is treated as symmetric.
inline constexpr double kSymmetry = 1e-9;
/// Largest condition number accepted for a norm-scaling matrix.
inline constexpr double kScalingCondition = 1e12;
/// Smallest eigenvalue ratio lambda_min / lambda_max accepted as positive definite.
inline constexpr double kPositiveDefinite = 1e-12;
}  // namespace tol

/// Symmetric positive-definite Q together with P = Q Q.
class ScalingQ {
 public:
  ScalingQ() = default;

  /// Identity scaling of dimension n.
  static ScalingQ identity(int n);

  const Matrix& q() const noexcept { return q_; }
  const Matrix& p() const noexcept { return p_; }
  const Matrix& q_inverse() const noexcept { return q_inv_; }
  int dimension() const noexcept { return static_cast<int>(q_.rows()); }

 private:
  friend ScalingQ symmetric_sqrt(const Matrix& p);
  ScalingQ(Matrix q, Matrix p, Matrix q_inv)
      : q_(std::move(q)), p_(std::move(p)), q_inv_(std::move(q_inv)) {}

  Matrix q_;
  Matrix p_;
  Matrix q_inv_;
};

/// mu_2(A) = lambda_max(A + A^T) / 2.
double mu2(const Matrix& a);

/// mu_2(H A H^-1); the measure induced by |x|_{2,H} = |Hx|_2.
double mu2_scaled(const Matrix& a, const Matrix& h);

/// Unique SPD square root via eigendecomposition.
ScalingQ symmetric_sqrt(const Matrix& p);

/// Eigenvalues of a symmetric matrix, largest first. Asymmetry up to
/// tol::kSymmetry (relative) is symmetrized away; more throws not_symmetric.
Vector symmetric_eigenvalues(const Matrix& s);

/// Singular values, largest first.
Vector singular_values(const Matrix& a);

/// Sum of the k largest eigenvalues of a symmetric S. Equals lambda_max(S^[k]).
double top_k_eig_sum(const Matrix& s, int k);

/// Sum of the k largest squared singular values.
double top_k_singular_sq_sum(const Matrix& a, int k);

/// Largest eigenvalue of (S + S^T) / 2, no symmetry check.
double lambda_max_sym(const Matrix& s);

/// Spectral norm.
double norm2(const Matrix& a);

}  // namespace kcontract
