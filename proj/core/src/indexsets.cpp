#include "kcontract/indexsets.hpp"

#include <atomic>
#include <cstdlib>
#include <numeric>
#include <string>

#include "kcontract/error.hpp"

namespace kcontract {

namespace {

constexpr std::uint64_t kDefaultCapacity = 1'000'000;

std::uint64_t capacity_from_env() noexcept {
  const char* raw = std::getenv("KCONTRACT_MAX_COMPOUND");
  if (raw == nullptr || *raw == '\0') return kDefaultCapacity;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || value == 0) return kDefaultCapacity;
  return value;
}

std::atomic<std::uint64_t>& capacity_slot() noexcept {
  static std::atomic<std::uint64_t> slot{capacity_from_env()};
  return slot;
}

}  // namespace

IndexTuple::IndexTuple(std::vector<int> entries, int n) : entries_(std::move(entries)), n_(n) {
  if (n < 1) throw Error(Errc::invalid_tuple, "universe size must be positive");
  if (entries_.empty() || static_cast<int>(entries_.size()) > n)
    throw Error(Errc::invalid_tuple, "tuple length must lie in [1, n]");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < 1 || entries_[i] > n)
      throw Error(Errc::invalid_tuple, "entry " + std::to_string(entries_[i]) + " outside [1, " +
                                           std::to_string(n) + "]");
    if (i > 0 && entries_[i - 1] >= entries_[i])
      throw Error(Errc::invalid_tuple, "entries must be strictly increasing");
  }
}

bool IndexTuple::contains(int value) const noexcept {
  for (int e : entries_)
    if (e == value) return true;
  return false;
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n)
    throw Error(Errc::invalid_dimension,
                "binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") undefined");
  if (k > n - k) k = n - k;
  std::uint64_t acc = 1;
  for (int i = 1; i <= k; ++i) {
    // acc * (n - k + i) is divisible by i; split i across both factors first.
    const auto num = static_cast<std::uint64_t>(n - k + i);
    const auto den = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(acc, den);
    if (__builtin_mul_overflow(acc / g, num / (den / g), &acc))
      throw Error(Errc::capacity,
                  "binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") overflows 64 bits");
  }
  return acc;
}

std::uint64_t compound_capacity() noexcept { return capacity_slot().load(std::memory_order_relaxed); }

void set_compound_capacity(std::uint64_t cap) noexcept {
  capacity_slot().store(cap == 0 ? kDefaultCapacity : cap, std::memory_order_relaxed);
}

std::size_t checked_index_count(int n, int k) {
  const std::uint64_t count = binomial(n, k);
  if (count > compound_capacity())
    throw Error(Errc::capacity, "C(" + std::to_string(n) + ", " + std::to_string(k) +
                                    ") = " + std::to_string(count) + " exceeds compound capacity " +
                                    std::to_string(compound_capacity()));
  return static_cast<std::size_t>(count);
}

bool next_combination(std::span<int> entries, int n) noexcept {
  const int k = static_cast<int>(entries.size());
  int i = k - 1;
  while (i >= 0 && entries[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
  if (i < 0) return false;
  ++entries[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j)
    entries[static_cast<std::size_t>(j)] = entries[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

std::vector<IndexTuple> enumerate_qkn(int k, int n) {
  if (n < 1 || k < 1 || k > n)
    throw Error(Errc::invalid_dimension,
                "Q_{k,n} needs 1 <= k <= n, got k=" + std::to_string(k) + ", n=" + std::to_string(n));
  const std::size_t count = checked_index_count(n, k);
  std::vector<IndexTuple> out;
  out.reserve(count);
  std::vector<int> current(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) current[static_cast<std::size_t>(i)] = i + 1;
  do {
    out.emplace_back(current, n);
  } while (next_combination(current, n));
  return out;
}

LexIndex rank(const IndexTuple& t, int n) {
  if (t.universe() != n)
    throw Error(Errc::invalid_tuple, "tuple universe " + std::to_string(t.universe()) +
                                         " does not match n=" + std::to_string(n));
  const int k = t.size();
  std::uint64_t r = 0;
  int prev = 0;
  for (int i = 0; i < k; ++i) {
    // Tuples agreeing on slots < i but with a smaller value at slot i.
    for (int v = prev + 1; v < t[i]; ++v) r += binomial(n - v, k - i - 1);
    prev = t[i];
  }
  return LexIndex{r, k, n};
}

IndexTuple unrank(const LexIndex& r) {
  if (r.n < 1 || r.k < 1 || r.k > r.n)
    throw Error(Errc::invalid_rank,
                "invalid dimensions k=" + std::to_string(r.k) + ", n=" + std::to_string(r.n));
  if (r.rank >= binomial(r.n, r.k))
    throw Error(Errc::invalid_rank, "rank " + std::to_string(r.rank) + " >= C(" +
                                        std::to_string(r.n) + ", " + std::to_string(r.k) + ")");
  std::vector<int> entries;
  entries.reserve(static_cast<std::size_t>(r.k));
  std::uint64_t remaining = r.rank;
  int v = 1;
  for (int i = 0; i < r.k; ++i) {
    for (;; ++v) {
      const std::uint64_t block = binomial(r.n - v, r.k - i - 1);
      if (remaining < block) break;
      remaining -= block;
    }
    entries.push_back(v);
    ++v;
  }
  return IndexTuple(std::move(entries), r.n);
}

}  // namespace kcontract
