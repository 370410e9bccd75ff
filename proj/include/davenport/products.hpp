#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "davenport/group.hpp"
#include "davenport/sequence.hpp"
#include "davenport/subset.hpp"

namespace davenport {

inline constexpr std::size_t kDefaultProductCacheCap = std::size_t(1) << 22;

// Memo table for pi over sub-multisets, keyed by the multiplicity vector.
// When full, new entries are rejected rather than evicted: correctness is
// unaffected, only speed.
class ProductCache {
 public:
  explicit ProductCache(std::size_t max_entries = kDefaultProductCacheCap)
      : cap_(max_entries) {}

  bool lookup(const Sequence& s, GroupSubset& out) const;
  void insert(const Sequence& s, const GroupSubset& pi);

  std::size_t size() const { return map_.size(); }
  std::size_t capacity() const { return cap_; }
  long long hits() const { return hits_; }
  long long misses() const { return misses_; }

 private:
  std::size_t cap_;
  mutable long long hits_ = 0, misses_ = 0;
  std::unordered_map<std::string, GroupSubset> map_;
};

// {a*b : a in A, b in B}.
GroupSubset product_set(const FiniteGroup& g, const GroupSubset& a,
                        const GroupSubset& b);

// {a*x : a in A} and {x*a : a in A}.
GroupSubset right_translate(const FiniteGroup& g, const GroupSubset& a, int x);
GroupSubset left_translate(const FiniteGroup& g, int x, const GroupSubset& a);

// pi(S): products of ALL terms of S over all orderings, via the memoized
// recurrence that peels the last factor.  Error(EmptySequence) when S = ().
// A caller-supplied cache may be shared across calls (one worker at a time);
// when absent a transient cache is used.
GroupSubset pi_set(const FiniteGroup& g, const Sequence& s,
                   ProductCache* cache = nullptr);

// Pi(S): union of pi(T) over all non-empty sub-multisets T | S, computed by
// one sweep over the divisor lattice of S (incremental subset-product fold
// when the group is abelian).  Pi(()) = {} without error.
GroupSubset all_subsequence_products(const FiniteGroup& g, const Sequence& s);

// 1 not in Pi(S); the empty sequence is product-one free.
bool is_product_one_free(const FiniteGroup& g, const Sequence& s);

// 1 in pi(S); Error(EmptySequence) when S = ().
bool is_product_one(const FiniteGroup& g, const Sequence& s);

// S is product-one and admits no factorization S = T·U with both T and U
// non-empty product-one subsequences.  Error(EmptySequence) when S = ().
bool is_minimal_product_one(const FiniteGroup& g, const Sequence& s);

// Image of A under G -> G/N as a dense set of left-coset indices.
GroupSubset bar_set(const Subgroup& n, const GroupSubset& a);

}  // namespace davenport
