#include <algorithm>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include <kcontract/compound.hpp>
#include <kcontract/error.hpp>

#include "random.hpp"

namespace kc = kcontract;
using kc::Matrix;
using kctest::Rng;

namespace {

using Complex = std::complex<double>;

std::vector<Complex> eigenvalues(const Matrix& a) {
  Eigen::EigenSolver<Matrix> es(a, false);
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

// All k-fold products (or sums) of the base eigenvalues.
std::vector<Complex> kfold(const std::vector<Complex>& base, int k, bool product) {
  const int n = static_cast<int>(base.size());
  std::vector<Complex> out;
  for (const auto& t : kc::enumerate_qkn(k, n)) {
    Complex acc = product ? Complex(1.0) : Complex(0.0);
    for (int e : t.entries()) acc = product ? acc * base[e - 1] : acc + base[e - 1];
    out.push_back(acc);
  }
  return out;
}

// Greedy nearest matching; returns the largest pairing distance.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (const Complex& x : a) {
    auto best = std::min_element(b.begin(), b.end(), [&](const Complex& u, const Complex& v) {
      return std::abs(u - x) < std::abs(v - x);
    });
    worst = std::max(worst, std::abs(*best - x));
    b.erase(best);
  }
  return worst;
}

// Independent of minor_of: determinant by Eigen's full-pivot LU.
double det_by_selection(const Matrix& a, const kc::IndexTuple& r, const kc::IndexTuple& c) {
  Matrix sub(r.size(), c.size());
  for (int i = 0; i < r.size(); ++i)
    for (int j = 0; j < c.size(); ++j) sub(i, j) = a(r[i] - 1, c[j] - 1);
  return sub.fullPivLu().determinant();
}

kc::Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const kc::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected kcontract::Error";
  return kc::Errc::parse;
}

}  // namespace

TEST(Multiplicative, WorkedExample) {
  Matrix a(3, 2);
  a << 4, 5, -1, 4, 0, 3;
  const auto c = kc::multiplicative_compound(a, 2);
  ASSERT_EQ(c.body.rows(), 3);
  ASSERT_EQ(c.body.cols(), 1);
  EXPECT_DOUBLE_EQ(c.body(0, 0), 21.0);
  EXPECT_DOUBLE_EQ(c.body(1, 0), 12.0);
  EXPECT_DOUBLE_EQ(c.body(2, 0), -3.0);
  EXPECT_EQ(c.base_rows, 3);
  EXPECT_EQ(c.base_cols, 2);
  EXPECT_EQ(c.order, 2);
}

TEST(Multiplicative, IdentityMapsToIdentity) {
  for (int n = 1; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) {
      const auto c = kc::multiplicative_compound(Matrix::Identity(n, n), k);
      const auto r = static_cast<Eigen::Index>(kc::binomial(n, k));
      EXPECT_EQ(c.body, Matrix::Identity(r, r));
    }
}

TEST(Multiplicative, FullOrderIsDeterminant) {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  const auto c = kc::multiplicative_compound(a, 2);
  ASSERT_EQ(c.body.size(), 1);
  EXPECT_DOUBLE_EQ(c.body(0, 0), -2.0);
}

TEST(Multiplicative, EntriesMatchDeterminantOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 7), m = rng.integer(1, 7);
    const Matrix a = rng.matrix(n, m);
    for (int k = 1; k <= std::min(n, m); ++k) {
      const auto c = kc::multiplicative_compound(a, k);
      const auto rows = kc::enumerate_qkn(k, n);
      const auto cols = kc::enumerate_qkn(k, m);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
          ASSERT_NEAR(c.body(i, j), det_by_selection(a, rows[i], cols[j]), 1e-10);
    }
  }
}

TEST(Multiplicative, Errors) {
  EXPECT_EQ(error_code([] { kc::multiplicative_compound(Matrix::Identity(3, 2), 3); }),
            kc::Errc::invalid_order);
  EXPECT_EQ(error_code([] { kc::multiplicative_compound(Matrix::Identity(3, 3), 0); }),
            kc::Errc::invalid_order);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = NAN;
  EXPECT_EQ(error_code([&] { kc::multiplicative_compound(bad, 1); }), kc::Errc::non_finite);
  const auto saved = kc::compound_capacity();
  kc::set_compound_capacity(10);
  EXPECT_EQ(error_code([] { kc::multiplicative_compound(Matrix::Identity(6, 6), 3); }),
            kc::Errc::capacity);
  kc::set_compound_capacity(saved);
}

TEST(Additive, ScalarMultipleOfIdentity) {
  for (int n = 1; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) {
      const double p = 1.75;
      const auto c = kc::additive_compound(p * Matrix::Identity(n, n), k);
      const auto r = static_cast<Eigen::Index>(kc::binomial(n, k));
      EXPECT_LT((c.body - k * p * Matrix::Identity(r, r)).norm(), 1e-14);
    }
}

TEST(Additive, Diagonal) {
  const Matrix d = Eigen::Vector3d(1, 2, 3).asDiagonal();
  const auto c = kc::additive_compound(d, 2);
  EXPECT_EQ(c.body, Matrix(Eigen::Vector3d(3, 4, 5).asDiagonal()));
}

TEST(Additive, FullOrderIsTrace) {
  Rng rng(3);
  for (int n = 1; n <= 6; ++n) {
    const Matrix a = rng.matrix(n, n);
    const auto c = kc::additive_compound(a, n);
    ASSERT_EQ(c.body.size(), 1);
    EXPECT_NEAR(c.body(0, 0), a.trace(), 1e-13);
  }
}

TEST(Additive, OrderOneIsIdentityMap) {
  Rng rng(4);
  const Matrix a = rng.matrix(5, 5);
  EXPECT_EQ(kc::additive_compound(a, 1).body, a);
  EXPECT_EQ(kc::multiplicative_compound(a, 1).body, a);
}

TEST(Additive, Errors) {
  EXPECT_EQ(error_code([] { kc::additive_compound(Matrix::Zero(3, 2), 1); }), kc::Errc::shape);
  EXPECT_EQ(error_code([] { kc::additive_compound(Matrix::Zero(3, 3), 4); }), kc::Errc::invalid_order);
}

TEST(FiniteDifference, Examples) {
  const auto c = kc::finite_diff_additive(2.0 * Matrix::Identity(2, 2), 2, 1e-6);
  EXPECT_NEAR(c.body(0, 0), 4.0, 1e-6);
  const Matrix d = Eigen::Vector3d(1, 2, 3).asDiagonal();
  EXPECT_LT((kc::finite_diff_additive(d, 2, 1e-6).body - Matrix(Eigen::Vector3d(3, 4, 5).asDiagonal()))
                .cwiseAbs()
                .maxCoeff(),
            1e-5);
  EXPECT_TRUE(kc::finite_diff_additive(Matrix::Zero(4, 4), 2, 1e-6).body.isZero(0.0));
}

TEST(FiniteDifference, AgreesWithClosedForm) {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.integer(1, 6);
    const Matrix a = rng.matrix(n, n);
    for (int k = 1; k <= n; ++k) {
      const Matrix closed = kc::additive_compound(a, k).body;
      const Matrix fd = kc::finite_diff_additive(a, k, 1e-6).body;
      ASSERT_LT((closed - fd).cwiseAbs().maxCoeff(), 1e-5) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Properties, CauchyBinet) {
  Rng rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.integer(1, 6), m = rng.integer(1, 6), p = rng.integer(1, 6);
    const Matrix a = rng.matrix(n, m), b = rng.matrix(m, p);
    for (int k = 1; k <= std::min({n, m, p}); ++k) {
      const Matrix lhs = kc::multiplicative_compound(a * b, k).body;
      const Matrix rhs = kc::multiplicative_compound(a, k).body * kc::multiplicative_compound(b, k).body;
      ASSERT_LE((lhs - rhs).norm(), 1e-9 * (1.0 + rhs.norm()));
    }
  }
}

TEST(Properties, SpectrumMapping) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(2, 6);
    const Matrix a = rng.matrix(n, n);
    const auto base = eigenvalues(a);
    for (int k = 1; k <= n; ++k) {
      EXPECT_LT(multiset_distance(eigenvalues(kc::multiplicative_compound(a, k).body), kfold(base, k, true)),
                1e-7);
      EXPECT_LT(multiset_distance(eigenvalues(kc::additive_compound(a, k).body), kfold(base, k, false)),
                1e-7);
    }
  }
}

TEST(Properties, TransposeCommutes) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 6);
    const Matrix a = rng.matrix(n, n);
    for (int k = 1; k <= n; ++k) {
      EXPECT_LT((kc::multiplicative_compound(a.transpose(), k).body -
                 kc::multiplicative_compound(a, k).body.transpose())
                    .norm(),
                1e-12);
      EXPECT_EQ(kc::additive_compound(a.transpose(), k).body, kc::additive_compound(a, k).body.transpose());
    }
  }
}

TEST(Properties, InverseCommutes) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 6);
    const Matrix a = rng.invertible(n);
    for (int k = 1; k <= n; ++k) {
      const Matrix lhs = kc::multiplicative_compound(a, k).body.inverse();
      const Matrix rhs = kc::multiplicative_compound(a.inverse(), k).body;
      EXPECT_LT(kctest::rel_err(lhs, rhs), 1e-10);
    }
  }
}

TEST(Properties, AdditiveLinearity) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 6);
    const Matrix a = rng.matrix(n, n), b = rng.matrix(n, n);
    const double c = rng.uniform(-3.0, 3.0);
    for (int k = 1; k <= n; ++k) {
      const Matrix ak = kc::additive_compound(a, k).body;
      EXPECT_LT((kc::additive_compound(a + b, k).body - ak - kc::additive_compound(b, k).body).norm(), 1e-10);
      EXPECT_LT((kc::additive_compound(c * a, k).body - c * ak).norm(), 1e-10);
    }
  }
}

TEST(Properties, Similarity) {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(1, 5);
    const Matrix a = rng.matrix(n, n), t = rng.invertible(n);
    const Matrix tat = t * a * t.inverse();
    for (int k = 1; k <= n; ++k) {
      const Matrix tk = kc::multiplicative_compound(t, k).body;
      const Matrix tk_inv = tk.inverse();
      EXPECT_LT(kctest::rel_err(kc::multiplicative_compound(tat, k).body,
                                tk * kc::multiplicative_compound(a, k).body * tk_inv),
                1e-7);
      EXPECT_LT(kctest::rel_err(kc::additive_compound(tat, k).body,
                                tk * kc::additive_compound(a, k).body * tk_inv),
                1e-7);
    }
  }
}

TEST(Minor, LargeOrderUsesPivoting) {
  // Leading zero pivot forces row exchanges in the LU path.
  Matrix a(5, 5);
  a << 0, 1, 2, 3, 4, 1, 0, 1, 2, 3, 2, 1, 0, 1, 2, 3, 2, 1, 0, 1, 4, 3, 2, 1, 0;
  const std::vector<int> all{1, 2, 3, 4, 5};
  EXPECT_NEAR(kc::minor_of(a, all, all), a.determinant(), 1e-10);
  const std::vector<int> four{1, 2, 4, 5};
  const std::vector<int> cols{2, 3, 4, 5};
  EXPECT_NEAR(kc::minor_of(a, four, cols),
              det_by_selection(a, kc::IndexTuple(four, 5), kc::IndexTuple(cols, 5)), 1e-10);
}

TEST(Volume, Examples) {
  EXPECT_DOUBLE_EQ(kc::volume_parallelotope(Matrix::Identity(2, 2)), 1.0);
  Matrix x(3, 2);
  x << 1, 2, 2, 4, -1, -2;
  EXPECT_EQ(kc::volume_parallelotope(x), 0.0);
  EXPECT_EQ(error_code([] { kc::volume_parallelotope(Matrix::Identity(2, 3)); }), kc::Errc::shape);
}

TEST(Volume, GramDeterminant) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(1, 6);
    const int k = rng.integer(1, n);
    const Matrix x = rng.matrix(n, k);
    const double gram = std::sqrt((x.transpose() * x).determinant());
    EXPECT_LE(std::abs(kc::volume_parallelotope(x) - gram), 1e-10 * gram);
  }
}
