#include <random>
#include <string>
#include <utility>
#include <vector>

#include "davenport/group.hpp"
#include "davenport/products.hpp"
#include "davenport/sequence.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace davenport;
using testutil::error_code_of;

namespace {

std::vector<std::pair<std::string, FiniteGroup>> small_group_pool() {
  std::vector<std::pair<std::string, FiniteGroup>> out;
  for (int n = 2; n <= 8; ++n)
    out.emplace_back("C" + std::to_string(n), make_cyclic(n));
  out.emplace_back("C2xC2", direct_product(make_cyclic(2), make_cyclic(2)));
  out.emplace_back("C2xC4", direct_product(make_cyclic(2), make_cyclic(4)));
  out.emplace_back("C2xC2xC2",
                   direct_product(direct_product(make_cyclic(2), make_cyclic(2)),
                                  make_cyclic(2)));
  out.emplace_back("D6", make_dihedral(3));
  out.emplace_back("D8", make_dihedral(4));
  out.emplace_back("Q8", make_dicyclic(2));
  return out;
}

Sequence random_sequence(const FiniteGroup& g, std::mt19937& rng, int len) {
  Sequence s(g.order());
  std::uniform_int_distribution<int> pick(0, g.order() - 1);
  for (int i = 0; i < len; ++i) s.add(pick(rng));
  return s;
}

}  // namespace

TEST_CASE("sequence multiset operations") {
  Sequence s = Sequence::of(6, {1, 3, 1});
  CHECK(s.length() == 3);
  CHECK(s.universe_size() == 6);
  CHECK(s.multiplicity(1) == 2);
  CHECK(s.multiplicity(2) == 0);
  CHECK(s.max_multiplicity() == 2);
  CHECK(s.support() == std::vector<int>{1, 3});
  CHECK(s.expanded() == std::vector<int>{1, 1, 3});
  CHECK(s == Sequence::of(6, {1, 1, 3}));
  CHECK(s == Sequence::from_elements(6, {3, 1, 1}));

  Sequence p = Sequence::power(6, 2, 4);
  CHECK(p.length() == 4);
  CHECK(p.multiplicity(2) == 4);
  CHECK(p.to_literal() == "[2,2,2,2]");

  Sequence t = Sequence::of(6, {1, 3});
  CHECK(t.divides(s));
  CHECK_FALSE(s.divides(t));
  CHECK(s.concat(t) == Sequence::of(6, {1, 1, 1, 3, 3}));
  CHECK(s.minus(t) == Sequence::of(6, {1}));
  CHECK(Sequence::of(6, {1, 1, 2}).gcd_with(Sequence::of(6, {1, 2, 2})) ==
        Sequence::of(6, {1, 2}));

  Sequence e(6);
  CHECK(e.empty());
  CHECK(e.divides(s));
  CHECK(s.minus(s).empty());
}

TEST_CASE("sequence literals") {
  CHECK(Sequence::of(6, {1, 1, 3}).to_literal() == "[1,1,3]");
  CHECK(Sequence(6).to_literal() == "[]");
  CHECK(Sequence::parse_literal(6, "[1,1,3]") == Sequence::of(6, {1, 1, 3}));
  CHECK(Sequence::parse_literal(6, " [ 1 , 1 , 3 ] ") ==
        Sequence::of(6, {1, 1, 3}));
  CHECK(Sequence::parse_literal(6, "[]").empty());
  CHECK(Sequence::parse_literal(6, "[ ]").empty());
  Sequence s = Sequence::of(8, {0, 5, 5, 7});
  CHECK(Sequence::parse_literal(8, s.to_literal()) == s);

  for (const char* bad : {"", "1,2", "[1,2", "[1,,2]", "[-1]", "[1]x", "[a]",
                          "[1 2]", "[0000000012]"})
    CHECK(error_code_of([&] { Sequence::parse_literal(6, bad); }) ==
          ErrorCode::ParseError);
  // In-range syntax, out-of-range index.
  CHECK(error_code_of([] { Sequence::parse_literal(6, "[6]"); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("hand-checked products") {
  FiniteGroup c4 = make_cyclic(4);
  CHECK(pi_set(c4, Sequence::of(4, {1, 1})) == GroupSubset::single(4, 2));
  CHECK(all_subsequence_products(c4, Sequence::of(4, {1, 1})) ==
        GroupSubset::of(4, {1, 2}));

  FiniteGroup d6 = make_dihedral(3);
  CHECK(pi_set(d6, Sequence::of(6, {1, 3})) == GroupSubset::of(6, {4, 5}));
  CHECK(all_subsequence_products(d6, Sequence::of(6, {1, 3})) ==
        GroupSubset::of(6, {1, 3, 4, 5}));
  CHECK(pi_set(d6, Sequence::of(6, {1, 1, 1})) == GroupSubset::single(6, 0));
  CHECK(is_product_one(d6, Sequence::of(6, {1, 1, 1})));

  FiniteGroup q8 = make_dicyclic(2);
  CHECK(pi_set(q8, Sequence::of(8, {4, 4})) == GroupSubset::single(8, 2));

  // pi of a one-term sequence is that term.
  CHECK(pi_set(d6, Sequence::of(6, {4})) == GroupSubset::single(6, 4));
}

TEST_CASE("empty sequence edge cases") {
  FiniteGroup c6 = make_cyclic(6);
  Sequence e(6);
  CHECK(error_code_of([&] { pi_set(c6, e); }) == ErrorCode::EmptySequence);
  CHECK(error_code_of([&] { is_product_one(c6, e); }) ==
        ErrorCode::EmptySequence);
  CHECK(error_code_of([&] { is_minimal_product_one(c6, e); }) ==
        ErrorCode::EmptySequence);
  CHECK(all_subsequence_products(c6, e).empty());
  CHECK(is_product_one_free(c6, e));
}

TEST_CASE("minimal product-one examples") {
  FiniteGroup c4 = make_cyclic(4);
  CHECK(is_minimal_product_one(c4, Sequence::of(4, {1, 1, 2})));
  CHECK(is_minimal_product_one(c4, Sequence::of(4, {2, 2})));
  CHECK_FALSE(is_minimal_product_one(c4, Sequence::of(4, {1, 3, 2, 2})));
  CHECK_FALSE(is_minimal_product_one(c4, Sequence::of(4, {1})));
  CHECK(is_minimal_product_one(c4, Sequence::of(4, {0})));
  CHECK_FALSE(is_minimal_product_one(c4, Sequence::of(4, {0, 2, 2})));
}

TEST_CASE("translates, product sets, and coset images") {
  FiniteGroup d6 = make_dihedral(3);
  CHECK(product_set(d6, GroupSubset::single(6, 1), GroupSubset::single(6, 3)) ==
        GroupSubset::single(6, 5));
  CHECK(right_translate(d6, GroupSubset::of(6, {0, 1}), 3) ==
        GroupSubset::of(6, {3, 5}));
  CHECK(left_translate(d6, 3, GroupSubset::of(6, {0, 1})) ==
        GroupSubset::of(6, {3, 4}));

  Subgroup n = subgroup_generated(d6, GroupSubset::single(6, 3));
  GroupSubset bar = bar_set(n, GroupSubset::of(6, {0, 1, 5}));
  CHECK(bar.universe_size() == 3);
  CHECK(bar.to_string() == "{0,1}");
  CHECK(bar_set(n, GroupSubset(6)).empty());
}

TEST_CASE("product cache behavior") {
  FiniteGroup d6 = make_dihedral(3);
  Sequence s = Sequence::of(6, {1, 1, 3, 4});

  ProductCache cache;
  GroupSubset first = pi_set(d6, s, &cache);
  CHECK(first == oracles::brute_pi(d6, s));
  CHECK(cache.size() > 0);
  long long misses_after_first = cache.misses();
  long long hits_after_first = cache.hits();
  GroupSubset second = pi_set(d6, s, &cache);
  CHECK(second == first);
  CHECK(cache.misses() == misses_after_first);
  CHECK(cache.hits() > hits_after_first);

  // A full cache rejects inserts but stays correct.
  ProductCache tiny(1);
  CHECK(pi_set(d6, s, &tiny) == first);
  CHECK(tiny.size() <= 1);
  CHECK(tiny.capacity() == 1);
}

TEST_CASE("randomized agreement with brute-force enumeration") {
  auto pool = small_group_pool();
  std::mt19937 rng(20260825);
  // One cache per group: entries are keyed on sequence content, so a cache
  // must never be shared across groups.
  std::vector<ProductCache> caches(pool.size());
  int checked = 0;
  for (int it = 0; it < 600; ++it) {
    const auto& [id, g] = pool[it % pool.size()];
    std::uniform_int_distribution<int> len_pick(1, 6);
    Sequence s = random_sequence(g, rng, len_pick(rng));
    CAPTURE(id);
    CAPTURE(s.to_literal());

    GroupSubset pi = pi_set(g, s);
    GroupSubset pi_brute = oracles::brute_pi(g, s);
    CHECK(pi == pi_brute);
    CHECK(pi_set(g, s, &caches[it % pool.size()]) == pi_brute);

    GroupSubset big = all_subsequence_products(g, s);
    CHECK(big == oracles::brute_all_products(g, s));
    CHECK(pi.subset_of(big));

    CHECK(is_product_one_free(g, s) == oracles::brute_free(g, s));
    CHECK(is_product_one(g, s) == pi_brute.test(kIdentity));
    CHECK(is_minimal_product_one(g, s) == oracles::brute_minimal(g, s));

    if (g.abelian()) CHECK(pi.size() == 1);
    ++checked;
  }
  CHECK(checked == 600);
}

TEST_CASE("free extension matches the rotation criterion") {
  // For product-one-free S: S·e stays free iff e != 1 and e^-1 not in Pi(S).
  auto pool = small_group_pool();
  std::mt19937 rng(77);
  for (int it = 0; it < 200; ++it) {
    const auto& [id, g] = pool[it % pool.size()];
    std::uniform_int_distribution<int> pick(0, g.order() - 1);
    Sequence s(g.order());
    for (int tries = 0; tries < 20 && s.length() < 5; ++tries) {
      int e = pick(rng);
      Sequence t = s;
      t.add(e);
      if (is_product_one_free(g, t)) s = t;
    }
    int e = pick(rng);
    Sequence t = s;
    t.add(e);
    bool predicted =
        e != kIdentity &&
        !oracles::brute_all_products(g, s).test(g.inverse(e));
    CAPTURE(id);
    CAPTURE(s.to_literal());
    CAPTURE(e);
    CHECK(is_product_one_free(g, t) == predicted);
  }
}

TEST_CASE("pi lands in a single coset of the derived subgroup") {
  FiniteGroup q8 = make_dicyclic(2);
  Subgroup der = derived_subgroup(q8);
  std::mt19937 rng(5);
  for (int it = 0; it < 60; ++it) {
    std::uniform_int_distribution<int> len_pick(1, 6);
    Sequence s = random_sequence(q8, rng, len_pick(rng));
    CHECK(bar_set(der, pi_set(q8, s)).size() == 1);
  }
}

TEST_CASE("subsequence products grow with the sequence") {
  FiniteGroup d8 = make_dihedral(4);
  std::mt19937 rng(11);
  for (int it = 0; it < 60; ++it) {
    Sequence s = random_sequence(d8, rng, 3);
    Sequence t = random_sequence(d8, rng, 2);
    CHECK(all_subsequence_products(d8, s).subset_of(
        all_subsequence_products(d8, s.concat(t))));
  }
}
