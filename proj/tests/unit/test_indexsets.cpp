#include <algorithm>
#include <cstdlib>
#include <vector>

#include <gtest/gtest.h>

#include <kcontract/error.hpp>
#include <kcontract/indexsets.hpp>

namespace kc = kcontract;

namespace {

std::vector<std::vector<int>> entries_of(const std::vector<kc::IndexTuple>& ts) {
  std::vector<std::vector<int>> out;
  for (const auto& t : ts) out.emplace_back(t.entries().begin(), t.entries().end());
  return out;
}

// Brute force: filter all bitmasks of [1, n] with k bits, then sort.
std::vector<std::vector<int>> brute_force_subsets(int k, int n) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> t;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) t.push_back(i + 1);
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t pascal(int n, int k) {
  std::vector<std::vector<std::uint64_t>> row(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    row[i].assign(static_cast<std::size_t>(i + 1), 1);
    for (int j = 1; j < i; ++j) row[i][j] = row[i - 1][j - 1] + row[i - 1][j];
  }
  return row[n][k];
}

template <class Fn>
kc::Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const kc::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected kcontract::Error";
  return kc::Errc::parse;
}

}  // namespace

TEST(Enumerate, Q23) {
  EXPECT_EQ(entries_of(kc::enumerate_qkn(2, 3)),
            (std::vector<std::vector<int>>{{1, 2}, {1, 3}, {2, 3}}));
}

TEST(Enumerate, Singletons) {
  EXPECT_EQ(entries_of(kc::enumerate_qkn(1, 4)), (std::vector<std::vector<int>>{{1}, {2}, {3}, {4}}));
}

TEST(Enumerate, TriplesOfFive) {
  const auto ts = entries_of(kc::enumerate_qkn(3, 5));
  ASSERT_EQ(ts.size(), 10u);
  EXPECT_EQ(ts.front(), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(ts.back(), (std::vector<int>{3, 4, 5}));
  EXPECT_EQ(ts, brute_force_subsets(3, 5));
}

TEST(Enumerate, MatchesBruteForceEverywhere) {
  for (int n = 1; n <= 9; ++n)
    for (int k = 1; k <= n; ++k) {
      const auto ts = entries_of(kc::enumerate_qkn(k, n));
      EXPECT_EQ(ts.size(), kc::binomial(n, k));
      EXPECT_EQ(ts, brute_force_subsets(k, n)) << "k=" << k << " n=" << n;
    }
}

TEST(Enumerate, InvalidDimensions) {
  EXPECT_EQ(error_code([] { kc::enumerate_qkn(0, 3); }), kc::Errc::invalid_dimension);
  EXPECT_EQ(error_code([] { kc::enumerate_qkn(4, 3); }), kc::Errc::invalid_dimension);
  EXPECT_EQ(error_code([] { kc::enumerate_qkn(1, 0); }), kc::Errc::invalid_dimension);
}

TEST(Rank, Examples) {
  EXPECT_EQ(kc::rank(kc::IndexTuple({1, 3}, 3), 3).rank, 1u);
  EXPECT_EQ(kc::rank(kc::IndexTuple({3, 4, 5}, 5), 5).rank, 9u);
  for (int n = 3; n <= 8; ++n) EXPECT_EQ(kc::rank(kc::IndexTuple({1, 2, 3}, n), n).rank, 0u);
}

TEST(Rank, MalformedTuples) {
  EXPECT_EQ(error_code([] { kc::IndexTuple({2, 1}, 3); }), kc::Errc::invalid_tuple);
  EXPECT_EQ(error_code([] { kc::IndexTuple({1, 1}, 3); }), kc::Errc::invalid_tuple);
  EXPECT_EQ(error_code([] { kc::IndexTuple({0, 2}, 3); }), kc::Errc::invalid_tuple);
  EXPECT_EQ(error_code([] { kc::IndexTuple({1, 4}, 3); }), kc::Errc::invalid_tuple);
  EXPECT_EQ(error_code([] { kc::IndexTuple({}, 3); }), kc::Errc::invalid_tuple);
  EXPECT_EQ(error_code([] { kc::rank(kc::IndexTuple({1, 2}, 3), 4); }), kc::Errc::invalid_tuple);
}

TEST(Unrank, Examples) {
  EXPECT_EQ(kc::unrank({0, 2, 3}), kc::IndexTuple({1, 2}, 3));
  EXPECT_EQ(kc::unrank({2, 2, 3}), kc::IndexTuple({2, 3}, 3));
  EXPECT_EQ(kc::unrank({9, 3, 5}), kc::IndexTuple({3, 4, 5}, 5));
}

TEST(Unrank, OutOfRange) {
  EXPECT_EQ(error_code([] { kc::unrank({3, 2, 3}); }), kc::Errc::invalid_rank);
  EXPECT_EQ(error_code([] { kc::unrank({0, 4, 3}); }), kc::Errc::invalid_rank);
}

TEST(RankUnrank, RoundTrip) {
  for (int n = 1; n <= 10; ++n)
    for (int k = 1; k <= n; ++k) {
      const auto ts = kc::enumerate_qkn(k, n);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const kc::LexIndex r = kc::rank(ts[i], n);
        ASSERT_EQ(r.rank, i);
        ASSERT_EQ(kc::unrank(r), ts[i]);
      }
    }
}

TEST(Binomial, Examples) {
  EXPECT_EQ(kc::binomial(10, 2), 45u);
  for (int n = 0; n < 20; ++n) EXPECT_EQ(kc::binomial(n, 0), 1u);
  EXPECT_EQ(kc::binomial(30, 15), 155117520u);
}

TEST(Binomial, MatchesPascal) {
  for (int n = 0; n <= 60; ++n)
    for (int k = 0; k <= n; ++k) ASSERT_EQ(kc::binomial(n, k), pascal(n, k)) << n << " " << k;
}

TEST(Binomial, OverflowIsCapacityError) {
  EXPECT_NO_THROW(kc::binomial(67, 33));
  EXPECT_EQ(error_code([] { kc::binomial(200, 100); }), kc::Errc::capacity);
  EXPECT_EQ(error_code([] { kc::binomial(3, 4); }), kc::Errc::invalid_dimension);
}

TEST(Capacity, CapRejectsLargeEnumerations) {
  const auto saved = kc::compound_capacity();
  kc::set_compound_capacity(100);
  EXPECT_EQ(error_code([] { kc::enumerate_qkn(3, 10); }), kc::Errc::capacity);
  EXPECT_EQ(kc::enumerate_qkn(2, 10).size(), 45u);
  kc::set_compound_capacity(saved);
  EXPECT_EQ(kc::enumerate_qkn(3, 10).size(), 120u);
}

TEST(NextCombination, StopsAtLast) {
  std::vector<int> t{3, 4, 5};
  EXPECT_FALSE(kc::next_combination(t, 5));
  EXPECT_EQ(t, (std::vector<int>{3, 4, 5}));
  std::vector<int> u{1, 4, 5};
  EXPECT_TRUE(kc::next_combination(u, 5));
  EXPECT_EQ(u, (std::vector<int>{2, 3, 4}));
}
