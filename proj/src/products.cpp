#include "davenport/products.hpp"

#include <cstring>
#include <optional>

namespace davenport {

namespace {

// Cache key: (element, multiplicity) pairs over the support, as raw bytes.
std::string cache_key(const Sequence& s) {
  std::string key;
  key.reserve(16);
  for (int g = 0; g < s.universe_size(); ++g) {
    int m = s.multiplicity(g);
    if (m == 0) continue;
    uint16_t ge = static_cast<uint16_t>(g), me = static_cast<uint16_t>(m);
    char buf[4];
    std::memcpy(buf, &ge, 2);
    std::memcpy(buf + 2, &me, 2);
    key.append(buf, 4);
  }
  return key;
}

GroupSubset pi_rec(const FiniteGroup& g, Sequence& s, ProductCache& cache) {
  if (s.length() == 1) {
    for (int e = 0; e < s.universe_size(); ++e)
      if (s.multiplicity(e) > 0) return GroupSubset::single(g.order(), e);
    throw Error(ErrorCode::InternalError, "length-1 sequence with empty support");
  }
  GroupSubset memo;
  if (cache.lookup(s, memo)) return memo;

  // pi(S) = union over g in supp(S) of pi(S·g^[-1])·g  (peel the last factor)
  GroupSubset acc(g.order());
  for (int e : s.support()) {
    s.remove(e);
    GroupSubset sub = pi_rec(g, s, cache);
    s.add(e);
    acc |= right_translate(g, sub, e);
  }
  cache.insert(s, acc);
  return acc;
}

// Dense mixed-radix lattice over the sub-multisets of S: node i holds
// pi(multiset(i)); node 0 is the empty multiset (sentinel, pi unused).
struct PiLattice {
  std::vector<int> elems;
  std::vector<int> radix;
  std::vector<size_t> stride;
  size_t size = 1;
  std::vector<GroupSubset> pi;
  GroupSubset all;  // union of pi over non-empty nodes

  // nullopt when the lattice would exceed max_nodes (callers fall back to
  // the cache-bounded recursive path) or the support exceeds 64 elements.
  static std::optional<PiLattice> build(const FiniteGroup& g, const Sequence& s,
                                        size_t max_nodes) {
    PiLattice lat;
    lat.elems = s.support();
    size_t k = lat.elems.size();
    if (k > 64) return std::nullopt;
    lat.radix.resize(k);
    lat.stride.resize(k);
    for (size_t p = 0; p < k; ++p) {
      lat.stride[p] = lat.size;
      lat.radix[p] = s.multiplicity(lat.elems[p]) + 1;
      if (lat.size > max_nodes / static_cast<size_t>(lat.radix[p]) + 1)
        return std::nullopt;
      lat.size *= static_cast<size_t>(lat.radix[p]);
    }
    if (lat.size > max_nodes) return std::nullopt;

    int n = g.order();
    lat.pi.assign(lat.size, GroupSubset());
    lat.all = GroupSubset(n);
    std::vector<int> digit(k, 0);
    uint64_t supp = 0;
    for (size_t i = 1; i < lat.size; ++i) {
      // odometer step
      size_t p = 0;
      while (digit[p] + 1 == lat.radix[p]) {
        digit[p] = 0;
        supp &= ~(uint64_t(1) << p);
        ++p;
      }
      ++digit[p];
      supp |= uint64_t(1) << p;

      GroupSubset v(n);
      uint64_t m = supp;
      while (m) {
        size_t q = static_cast<size_t>(std::countr_zero(m));
        m &= m - 1;
        size_t sub = i - lat.stride[q];
        if (sub == 0)
          v.add(lat.elems[q]);  // pi of a singleton
        else
          v |= right_translate(g, lat.pi[sub], lat.elems[q]);
      }
      lat.pi[i] = std::move(v);
      lat.all |= lat.pi[i];
    }
    return lat;
  }
};

constexpr size_t kMaxDenseLatticeNodes = size_t(1) << 20;

// Recursive fallback for Pi when the dense lattice is too large: unions
// pi(T) over every non-empty T | S through a shared (capped) cache.
void union_subsequence_products(const FiniteGroup& g, const std::vector<int>& supp,
                                size_t pos, Sequence& t, const Sequence& s,
                                ProductCache& cache, GroupSubset& acc) {
  if (pos == supp.size()) {
    if (!t.empty()) acc |= pi_rec(g, t, cache);
    return;
  }
  int e = supp[pos];
  for (int m = 0; m <= s.multiplicity(e); ++m) {
    if (m > 0) t.add(e);
    union_subsequence_products(g, supp, pos + 1, t, s, cache, acc);
  }
  t.remove(e, s.multiplicity(e));
}

}  // namespace

bool ProductCache::lookup(const Sequence& s, GroupSubset& out) const {
  auto it = map_.find(cache_key(s));
  if (it == map_.end()) {
    ++misses_;
    return false;
  }
  ++hits_;
  out = it->second;
  return true;
}

void ProductCache::insert(const Sequence& s, const GroupSubset& pi) {
  if (map_.size() >= cap_) return;  // full: reject, do not evict
  map_.emplace(cache_key(s), pi);
}

GroupSubset product_set(const FiniteGroup& g, const GroupSubset& a,
                        const GroupSubset& b) {
  GroupSubset out(g.order());
  a.for_each([&](int x) { b.for_each([&](int y) { out.add(g.mul(x, y)); }); });
  return out;
}

GroupSubset right_translate(const FiniteGroup& g, const GroupSubset& a, int x) {
  GroupSubset out(g.order());
  a.for_each([&](int y) { out.add(g.mul(y, x)); });
  return out;
}

GroupSubset left_translate(const FiniteGroup& g, int x, const GroupSubset& a) {
  GroupSubset out(g.order());
  a.for_each([&](int y) { out.add(g.mul(x, y)); });
  return out;
}

GroupSubset pi_set(const FiniteGroup& g, const Sequence& s, ProductCache* cache) {
  if (s.empty())
    throw Error(ErrorCode::EmptySequence, "pi of the empty sequence is undefined");
  Sequence work = s;
  if (cache) return pi_rec(g, work, *cache);
  ProductCache local;
  return pi_rec(g, work, local);
}

GroupSubset all_subsequence_products(const FiniteGroup& g, const Sequence& s) {
  int n = g.order();
  if (s.empty()) return GroupSubset(n);

  if (g.abelian()) {
    // Order is irrelevant: fold one term at a time,
    // Pi(S·g) = Pi(S) ∪ Pi(S)·g ∪ {g}.
    GroupSubset acc(n);
    for (int e = 0; e < n; ++e)
      for (int k = 0; k < s.multiplicity(e); ++k) {
        GroupSubset shifted = right_translate(g, acc, e);
        acc |= shifted;
        acc.add(e);
      }
    return acc;
  }

  if (auto lat = PiLattice::build(g, s, kMaxDenseLatticeNodes)) return lat->all;

  GroupSubset acc(n);
  Sequence t(s.universe_size());
  ProductCache cache;
  auto supp = s.support();
  union_subsequence_products(g, supp, 0, t, s, cache, acc);
  return acc;
}

bool is_product_one_free(const FiniteGroup& g, const Sequence& s) {
  if (s.empty()) return true;
  return !all_subsequence_products(g, s).test(kIdentity);
}

bool is_product_one(const FiniteGroup& g, const Sequence& s) {
  return pi_set(g, s).test(kIdentity);
}

bool is_minimal_product_one(const FiniteGroup& g, const Sequence& s) {
  if (s.empty())
    throw Error(ErrorCode::EmptySequence,
                "minimality of the empty sequence is undefined");

  if (auto lat = PiLattice::build(g, s, kMaxDenseLatticeNodes)) {
    size_t full = lat->size - 1;
    if (full == 0) return false;  // unreachable: s non-empty
    if (!lat->pi[full].test(kIdentity)) return false;
    // A split is a proper non-empty T with both T and S·T^[-1] product-one;
    // the complement of node t is node full - t.
    for (size_t t = 1; t < full; ++t)
      if (lat->pi[t].test(kIdentity) && lat->pi[full - t].test(kIdentity))
        return false;
    return true;
  }

  // Fallback for very large lattices: memoized pi per sub-multiset.
  ProductCache cache;
  Sequence work = s;
  if (!pi_rec(g, work, cache).test(kIdentity)) return false;
  auto supp = s.support();
  // Enumerate proper non-empty T | S recursively.
  std::vector<int> counts(supp.size(), 0);
  struct Rec {
    const FiniteGroup& g;
    const Sequence& s;
    const std::vector<int>& supp;
    ProductCache& cache;
    bool split_found = false;
    void go(size_t pos, Sequence& t) {
      if (split_found) return;
      if (pos == supp.size()) {
        if (t.empty() || t.length() == s.length()) return;
        Sequence rest = s.minus(t);
        Sequence tw = t;
        if (pi_rec(g, tw, cache).test(kIdentity) &&
            pi_rec(g, rest, cache).test(kIdentity))
          split_found = true;
        return;
      }
      int e = supp[pos];
      for (int m = 0; m <= s.multiplicity(e) && !split_found; ++m) {
        if (m > 0) t.add(e);
        go(pos + 1, t);
      }
      t.remove(e, std::min(t.multiplicity(e), s.multiplicity(e)));
    }
  } rec{g, s, supp, cache};
  Sequence t(s.universe_size());
  rec.go(0, t);
  return !rec.split_found;
}

GroupSubset bar_set(const Subgroup& n, const GroupSubset& a) {
  GroupSubset out(n.coset_count());
  a.for_each([&](int x) { out.add(n.coset_of(x)); });
  return out;
}

}  // namespace davenport
