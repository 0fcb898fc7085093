#include "kcontract/measures.hpp"

#include <cmath>
#include <string>

#include "kcontract/error.hpp"

namespace kcontract {

namespace {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw Error(Errc::shape, std::string(what) + " must be square and nonempty, got " +
                                 std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

Matrix symmetrized(const Matrix& s, const char* what) {
  require_square(s, what);
  require_finite(s, what);
  const double scale = 1.0 + s.cwiseAbs().maxCoeff();
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::kSymmetry * scale)
    throw Error(Errc::not_symmetric, std::string(what) + " asymmetry " + std::to_string(asym) +
                                         " exceeds tolerance");
  return 0.5 * (s + s.transpose());
}

}  // namespace

ScalingQ ScalingQ::identity(int n) {
  const Matrix id = Matrix::Identity(n, n);
  return ScalingQ(id, id, id);
}

double lambda_max_sym(const Matrix& s) {
  require_square(s, "matrix");
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(sym.rows() - 1);
}

double mu2(const Matrix& a) {
  require_square(a, "mu2 argument");
  require_finite(a, "mu2 argument");
  return lambda_max_sym(a);
}

double mu2_scaled(const Matrix& a, const Matrix& h) {
  require_square(a, "mu2 argument");
  require_square(h, "scaling matrix");
  if (a.rows() != h.rows()) throw Error(Errc::shape, "scaling matrix dimension mismatch");
  require_finite(h, "scaling matrix");
  const Vector sv = singular_values(h);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > tol::kScalingCondition)
    throw Error(Errc::singular_scaling, "scaling matrix is numerically singular (condition " +
                                            std::to_string(smin > 0.0 ? sv(0) / smin : INFINITY) +
                                            ")");
  const Matrix h_inv = h.partialPivLu().solve(Matrix::Identity(h.rows(), h.cols()));
  return mu2(h * a * h_inv);
}

ScalingQ symmetric_sqrt(const Matrix& p) {
  const Matrix sym = symmetrized(p, "P");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  const Vector& ev = solver.eigenvalues();
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  if (!(hi > 0.0) || lo <= tol::kPositiveDefinite * hi)
    throw Error(Errc::not_positive_definite,
                "P is not positive definite (eigenvalues in [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "])");
  const Matrix& v = solver.eigenvectors();
  const Vector root = ev.cwiseSqrt();
  Matrix q = v * root.asDiagonal() * v.transpose();
  Matrix q_inv = v * root.cwiseInverse().asDiagonal() * v.transpose();
  q = 0.5 * (q + q.transpose()).eval();
  q_inv = 0.5 * (q_inv + q_inv.transpose()).eval();
  return ScalingQ(std::move(q), sym, std::move(q_inv));
}

Vector symmetric_eigenvalues(const Matrix& s) {
  const Matrix sym = symmetrized(s, "symmetric argument");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

Vector singular_values(const Matrix& a) {
  if (a.size() == 0) throw Error(Errc::shape, "empty matrix");
  require_finite(a, "matrix");
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

double top_k_eig_sum(const Matrix& s, int k) {
  const Vector ev = symmetric_eigenvalues(s);
  if (k < 1 || k > ev.size())
    throw Error(Errc::invalid_order, "k=" + std::to_string(k) + " outside [1, " +
                                         std::to_string(ev.size()) + "]");
  return ev.head(k).sum();
}

double top_k_singular_sq_sum(const Matrix& a, int k) {
  const Vector sv = singular_values(a);
  if (k < 1 || k > sv.size())
    throw Error(Errc::invalid_order, "k=" + std::to_string(k) + " outside [1, " +
                                         std::to_string(sv.size()) + "]");
  return sv.head(k).squaredNorm();
}

double norm2(const Matrix& a) { return singular_values(a)(0); }

}  // namespace kcontract
