#pragma once

#include <optional>
#include <vector>

#include "davenport/error.hpp"
#include "davenport/subset.hpp"

namespace davenport {

// Elements are dense indices into the Cayley table; the identity is always 0.
using GroupElement = int;

inline constexpr int kIdentity = 0;
inline constexpr int kDefaultClosureCap = 4096;

// A finite group given by its full multiplication table, with inverses,
// element orders, and commutativity/cyclicity flags precomputed.
class FiniteGroup {
 public:
  int order() const { return n_; }
  int mul(int a, int b) const { return table_[static_cast<size_t>(a) * n_ + b]; }
  int inverse(int a) const { return inverse_[a]; }
  int elem_order(int a) const { return elem_order_[a]; }
  bool abelian() const { return abelian_; }
  bool cyclic() const { return cyclic_; }

  // a^k for k >= 0.
  int power(int a, int k) const {
    int x = kIdentity;
    for (int i = 0; i < k; ++i) x = mul(x, a);
    return x;
  }

  // Row-major n*n table (handy for round-trip tests and file export).
  std::vector<std::vector<int>> table_rows() const {
    std::vector<std::vector<int>> rows(n_, std::vector<int>(n_));
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) rows[a][b] = mul(a, b);
    return rows;
  }

  friend FiniteGroup make_cyclic(int n);
  friend FiniteGroup make_dihedral(int m);
  friend FiniteGroup make_dicyclic(int m);
  friend FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);
  struct TableValidation;
  friend FiniteGroup from_cayley_table(const std::vector<std::vector<int>>& rows,
                                       TableValidation v);
  friend FiniteGroup from_permutation_generators(
      const std::vector<std::vector<int>>& gens, int closure_cap);

  struct TableValidation {
    // The associativity scan is n^3; callers with trusted tables may skip it.
    bool check_associativity = true;
  };

 private:
  FiniteGroup() = default;
  // Derives inverse_, elem_order_, abelian_, cyclic_ from a table already
  // known to be a group table with identity 0.
  void finalize();

  int n_ = 0;
  std::vector<int> table_;  // row-major: table_[a*n + b] = a*b
  std::vector<int> inverse_;
  std::vector<int> elem_order_;
  bool abelian_ = false;
  bool cyclic_ = false;
};

// C_n, n >= 1 (n == 1 is the trivial group).
FiniteGroup make_cyclic(int n);

// Dihedral group of order 2m (m >= 1): rotations r^i at indices 0..m-1,
// reflections s·r^i at indices m..2m-1.
FiniteGroup make_dihedral(int m);

// Dicyclic group of order 4m (m >= 1), presentation
// <a, b | a^(2m) = 1, b^2 = a^m, b^-1 a b = a^-1>:
// a^i at indices 0..2m-1, a^i·b at indices 2m..4m-1.  m == 2 gives Q8.
FiniteGroup make_dicyclic(int m);

// G x H with (g, h) at index g*|H| + h.
FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);

// Validates an arbitrary square table (closure, identity, associativity,
// inverses), re-indexing so the identity lands at 0.  Throws Error with
// NotClosed / NoIdentity / NotAssociative / NoInverse.
FiniteGroup from_cayley_table(const std::vector<std::vector<int>>& rows,
                              FiniteGroup::TableValidation v = {});

// Closure of permutation generators (each a bijection of [0, k) given in
// one-line notation) under composition.  Throws ClosureCapExceeded if the
// closure grows past closure_cap.  No generators yield the trivial group.
FiniteGroup from_permutation_generators(const std::vector<std::vector<int>>& gens,
                                        int closure_cap = kDefaultClosureCap);

// p(G): smallest prime divisor of |G|; Error(TrivialGroup) when |G| == 1.
int smallest_prime_divisor(const FiniteGroup& g);

// A subgroup N <= G along with the left-coset index of every group element.
// Coset 0 is N itself; cosets are numbered by first appearance in element
// index order, so the map is deterministic.
class Subgroup {
 public:
  const GroupSubset& members() const { return members_; }
  int order() const { return members_.size(); }
  int coset_count() const { return coset_count_; }
  int coset_of(int a) const { return coset_of_[a]; }
  bool contains(int a) const { return members_.test(a); }

  friend Subgroup subgroup_generated(const FiniteGroup& g, const GroupSubset& gens);

 private:
  GroupSubset members_;
  std::vector<int> coset_of_;
  int coset_count_ = 0;
};

// <gens>: the subgroup generated by a set of elements (the trivial subgroup
// for an empty set).
Subgroup subgroup_generated(const FiniteGroup& g, const GroupSubset& gens);

// [G, G], generated by all commutators a^-1 b^-1 a b.
Subgroup derived_subgroup(const FiniteGroup& g);

// Lowest-index element of order m, if any (m == 1 yields the identity).
std::optional<GroupElement> element_of_order(const FiniteGroup& g, int m);

}  // namespace davenport
