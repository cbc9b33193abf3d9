#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace sift {

// Exact binomial coefficient. Throws CapacityError if the value would not fit
// in 64 bits (n > 62 is rejected outright).
std::uint64_t binom(int n, int k);

// A subset of the universe {0, ..., n-1}. Members are kept sorted ascending
// with no duplicates; every algorithm in the library relies on this canonical
// order (it is what makes summations and tie-breaks reproducible).
class SubsetMask {
  public:
    SubsetMask() = default;
    explicit SubsetMask(int n) : n_(n) {}
    SubsetMask(int n, std::vector<int> members);

    int universe_size() const { return n_; }
    int size() const { return static_cast<int>(members_.size()); }
    bool empty() const { return members_.empty(); }
    bool full() const { return size() == n_; }
    const std::vector<int>& members() const { return members_; }
    bool contains(int i) const;

    // Bit representation, member i -> bit i. Requires n <= 64.
    std::uint64_t bits() const;
    static SubsetMask from_bits(int n, std::uint64_t bits);

    SubsetMask with(int i) const;     // copy with i inserted (no-op if present)
    SubsetMask without(int i) const;  // copy with i removed (no-op if absent)
    SubsetMask complement() const;

    bool operator==(const SubsetMask&) const = default;

  private:
    int n_ = 0;
    std::vector<int> members_;
};

// All size-k subsets of {0..n-1} in lexicographic order of their member
// lists. Requires 0 <= k <= n <= 24.
std::vector<SubsetMask> enumerate_subsets(int n, int k);

// Streaming form of the above for counts too large to materialize.
// Same order; `fn` receives each mask once.
void for_each_subset(int n, int k, const std::function<void(const SubsetMask&)>& fn);

}  // namespace sift
