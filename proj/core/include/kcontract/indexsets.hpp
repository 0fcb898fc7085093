#pragma once

// Lexicographically ordered k-subsets of [1, n] and their ranks.
//
// Entry values are 1-based (a tuple (1,3) names the first and third rows),
// ranks are 0-based positions in the lexicographic enumeration. Compound
// matrices are addressed as body(rank(rows), rank(cols)).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kcontract {

/// Strictly increasing k-tuple with entries in [1, n].
class IndexTuple {
 public:
  /// Validates the invariants; throws Errc::invalid_tuple on violation.
  IndexTuple(std::vector<int> entries, int n);

  int size() const noexcept { return static_cast<int>(entries_.size()); }
  int universe() const noexcept { return n_; }
  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  std::span<const int> entries() const noexcept { return entries_; }

  bool contains(int value) const noexcept;

  friend bool operator==(const IndexTuple&, const IndexTuple&) = default;

 private:
  std::vector<int> entries_;
  int n_;
};

struct LexIndex {
  std::uint64_t rank = 0;
  int k = 0;
  int n = 0;

  friend bool operator==(const LexIndex&, const LexIndex&) = default;
};

/// Exact C(n, k). Throws Errc::invalid_dimension for k < 0, n < 0 or k > n
/// and Errc::capacity if the value does not fit in 64 bits.
std::uint64_t binomial(int n, int k);

/// Largest C(n, k) the library will materialize. Initialized from the
/// KCONTRACT_MAX_COMPOUND environment variable, default 1'000'000.
std::uint64_t compound_capacity() noexcept;
void set_compound_capacity(std::uint64_t cap) noexcept;

/// C(n, k) after the capacity check; throws Errc::capacity above the cap.
std::size_t checked_index_count(int n, int k);

/// All of Q_{k,n} in lexicographic order. Requires 1 <= k <= n.
std::vector<IndexTuple> enumerate_qkn(int k, int n);

/// Position of t in enumerate_qkn(t.size(), n).
LexIndex rank(const IndexTuple& t, int n);

/// Inverse of rank. Throws Errc::invalid_rank if r.rank >= C(n, k).
IndexTuple unrank(const LexIndex& r);

/// Advances a 1-based increasing tuple to its lexicographic successor in
/// place. Returns false (leaving the tuple untouched) at the last tuple.
bool next_combination(std::span<int> entries, int n) noexcept;

}  // namespace kcontract
