#pragma once

// Multiplicative and additive compound matrices.
//
// For A in R^{n x m} and 1 <= k <= min(n, m), the multiplicative compound
// A^(k) is the C(n,k) x C(m,k) matrix of all order-k minors, rows and columns
// ordered lexicographically (see indexsets.hpp). The additive compound A^[k]
// of a square A is d/de (I + eA)^(k) at e = 0.

#include <Eigen/Dense>

#include "kcontract/indexsets.hpp"

namespace kcontract {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct CompoundMatrix {
  int base_rows = 0;
  int base_cols = 0;
  int order = 0;
  Matrix body;
};

/// Throws Errc::non_finite if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, const char* what);

/// Determinant of the submatrix of `a` picked by 1-based row/column tuples.
/// Cofactor expansion for k <= 3, partial-pivot LU above.
double minor_of(const Matrix& a, std::span<const int> rows, std::span<const int> cols);

CompoundMatrix multiplicative_compound(const Matrix& a, int k);

/// Closed-form evaluation: diagonal entries are sums of the selected diagonal
/// of A; entries whose index sets differ in one slot carry +-a_{ij}.
CompoundMatrix additive_compound(const Matrix& a, int k);

/// Central difference [(I+eA)^(k) - (I-eA)^(k)] / (2e). Test oracle for
/// additive_compound; shares no code with it beyond the minors.
CompoundMatrix finite_diff_additive(const Matrix& a, int k, double eps);

/// k-volume of the parallelotope spanned by the columns of X (n x k): the
/// Euclidean norm of the column vector X^(k).
double volume_parallelotope(const Matrix& x);

}  // namespace kcontract
