#include "kcontract/compound.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "kcontract/error.hpp"

namespace kcontract {

namespace {

std::string dims(const Matrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_order(const Matrix& a, int k) {
  const Eigen::Index limit = std::min(a.rows(), a.cols());
  if (limit < 1) throw Error(Errc::shape, "empty matrix");
  if (k < 1 || k > limit)
    throw Error(Errc::invalid_order,
                "order " + std::to_string(k) + " outside [1, " + std::to_string(limit) + "] for " +
                    dims(a) + " matrix");
}

std::vector<int> first_tuple(int k) {
  std::vector<int> t(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) t[static_cast<std::size_t>(i)] = i + 1;
  return t;
}

// Pascal table binom[v][j] = C(v, j) for v <= n, j <= k.
class BinomialTable {
 public:
  BinomialTable(int n, int k)
      : stride_(static_cast<std::size_t>(k) + 1),
        table_((static_cast<std::size_t>(n) + 1) * stride_, 0) {
    for (int v = 0; v <= n; ++v) {
      at(v, 0) = 1;
      for (int j = 1; j <= std::min(v, k); ++j)
        at(v, j) = at(v - 1, j - 1) + (j <= v - 1 ? at(v - 1, j) : 0);
    }
  }

  std::uint64_t operator()(int v, int j) const {
    return table_[static_cast<std::size_t>(v) * stride_ + static_cast<std::size_t>(j)];
  }

 private:
  std::uint64_t& at(int v, int j) {
    return table_[static_cast<std::size_t>(v) * stride_ + static_cast<std::size_t>(j)];
  }

  std::size_t stride_;
  std::vector<std::uint64_t> table_;
};

std::uint64_t lex_rank(std::span<const int> t, int n, const BinomialTable& binom) {
  const int k = static_cast<int>(t.size());
  std::uint64_t r = 0;
  int prev = 0;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < t[static_cast<std::size_t>(i)]; ++v) r += binom(n - v, k - i - 1);
    prev = t[static_cast<std::size_t>(i)];
  }
  return r;
}

}  // namespace

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!m.allFinite()) throw Error(Errc::non_finite, std::string(what) + " has NaN or Inf entries");
}

double minor_of(const Matrix& a, std::span<const int> rows, std::span<const int> cols) {
  const std::size_t k = rows.size();
  auto e = [&](std::size_t i, std::size_t j) { return a(rows[i] - 1, cols[j] - 1); };
  switch (k) {
    case 1:
      return e(0, 0);
    case 2:
      return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
    case 3:
      return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
             e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
             e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
    default:
      break;
  }
  // Row-major k x k scratch, LU with partial pivoting.
  std::vector<double> lu(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) lu[i * k + j] = e(i, j);
  double det = 1.0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    double best = std::abs(lu[col * k + col]);
    for (std::size_t r = col + 1; r < k; ++r) {
      const double cand = std::abs(lu[r * k + col]);
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t j = 0; j < k; ++j) std::swap(lu[pivot * k + j], lu[col * k + j]);
      det = -det;
    }
    const double diag = lu[col * k + col];
    det *= diag;
    for (std::size_t r = col + 1; r < k; ++r) {
      const double factor = lu[r * k + col] / diag;
      if (factor == 0.0) continue;
      for (std::size_t j = col + 1; j < k; ++j) lu[r * k + j] -= factor * lu[col * k + j];
    }
  }
  return det;
}

CompoundMatrix multiplicative_compound(const Matrix& a, int k) {
  require_order(a, k);
  require_finite(a, "compound input");
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const std::size_t rows = checked_index_count(n, k);
  const std::size_t cols = checked_index_count(m, k);

  CompoundMatrix out{n, m, k, Matrix(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols))};
  std::vector<int> row_tuple = first_tuple(k);
  Eigen::Index i = 0;
  do {
    std::vector<int> col_tuple = first_tuple(k);
    Eigen::Index j = 0;
    do {
      out.body(i, j++) = minor_of(a, row_tuple, col_tuple);
    } while (next_combination(col_tuple, m));
    ++i;
  } while (next_combination(row_tuple, n));
  return out;
}

CompoundMatrix additive_compound(const Matrix& a, int k) {
  if (a.rows() != a.cols())
    throw Error(Errc::shape, "additive compound needs a square matrix, got " + dims(a));
  require_order(a, k);
  require_finite(a, "compound input");
  const int n = static_cast<int>(a.rows());
  const std::size_t r = checked_index_count(n, k);
  const BinomialTable binom(n, k);

  CompoundMatrix out{n, n, k, Matrix::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r))};
  std::vector<int> row_tuple = first_tuple(k);
  std::vector<int> swapped(static_cast<std::size_t>(k));
  Eigen::Index i = 0;
  do {
    double trace = 0.0;
    for (int idx : row_tuple) trace += a(idx - 1, idx - 1);
    out.body(i, i) = trace;

    // Replace slot s of the row tuple by each value v it does not contain.
    for (int s = 0; s < k; ++s) {
      const int dropped = row_tuple[static_cast<std::size_t>(s)];
      for (int v = 1; v <= n; ++v) {
        bool present = false;
        for (int e : row_tuple) present = present || e == v;
        if (present) continue;

        int t = 0;
        std::size_t w = 0;
        bool placed = false;
        for (int q = 0; q < k; ++q) {
          const int e = row_tuple[static_cast<std::size_t>(q)];
          if (q == s) continue;
          if (!placed && v < e) {
            t = static_cast<int>(w);
            swapped[w++] = v;
            placed = true;
          }
          swapped[w++] = e;
        }
        if (!placed) {
          t = static_cast<int>(w);
          swapped[w++] = v;
        }
        const auto j = static_cast<Eigen::Index>(lex_rank(swapped, n, binom));
        const double sign = ((s + t) % 2 == 0) ? 1.0 : -1.0;
        out.body(i, j) = sign * a(dropped - 1, v - 1);
      }
    }
    ++i;
  } while (next_combination(row_tuple, n));
  return out;
}

CompoundMatrix finite_diff_additive(const Matrix& a, int k, double eps) {
  if (a.rows() != a.cols())
    throw Error(Errc::shape, "additive compound needs a square matrix, got " + dims(a));
  if (!(eps > 0.0)) throw Error(Errc::invalid_parameter, "finite-difference step must be positive");
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const CompoundMatrix plus = multiplicative_compound(id + eps * a, k);
  const CompoundMatrix minus = multiplicative_compound(id - eps * a, k);
  return CompoundMatrix{plus.base_rows, plus.base_cols, k, (plus.body - minus.body) / (2.0 * eps)};
}

double volume_parallelotope(const Matrix& x) {
  if (x.cols() < 1 || x.cols() > x.rows())
    throw Error(Errc::shape, "parallelotope needs 1 <= k <= n edge vectors, got " + dims(x));
  return multiplicative_compound(x, static_cast<int>(x.cols())).body.norm();
}

}  // namespace kcontract
