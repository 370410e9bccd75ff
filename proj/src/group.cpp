#include "davenport/group.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace davenport {

void FiniteGroup::finalize() {
  inverse_.assign(n_, -1);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (mul(a, b) == kIdentity && mul(b, a) == kIdentity) {
        inverse_[a] = b;
        break;
      }
    }
    if (inverse_[a] < 0)
      throw Error(ErrorCode::NoInverse,
                  "element " + std::to_string(a) + " has no two-sided inverse");
  }

  elem_order_.assign(n_, 0);
  for (int a = 0; a < n_; ++a) {
    int x = a, k = 1;
    while (x != kIdentity) {
      x = mul(x, a);
      ++k;
      if (k > n_)
        throw Error(ErrorCode::InternalError,
                    "element order exceeds group order");
    }
    elem_order_[a] = k;
  }

  abelian_ = true;
  for (int a = 0; a < n_ && abelian_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (mul(a, b) != mul(b, a)) {
        abelian_ = false;
        break;
      }

  cyclic_ = std::any_of(elem_order_.begin(), elem_order_.end(),
                        [&](int k) { return k == n_; });
}

FiniteGroup make_cyclic(int n) {
  if (n < 1) throw Error(ErrorCode::ParseError, "cyclic order must be >= 1");
  FiniteGroup g;
  g.n_ = n;
  g.table_.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.table_[static_cast<size_t>(a) * n + b] = (a + b) % n;
  g.finalize();
  return g;
}

FiniteGroup make_dihedral(int m) {
  if (m < 1) throw Error(ErrorCode::ParseError, "dihedral parameter must be >= 1");
  int n = 2 * m;
  FiniteGroup g;
  g.n_ = n;
  g.table_.resize(static_cast<size_t>(n) * n);
  auto idx = [&](bool refl, int i) { return (refl ? m : 0) + ((i % m) + m) % m; };
  for (int a = 0; a < n; ++a) {
    bool ar = a >= m;
    int ai = ar ? a - m : a;
    for (int b = 0; b < n; ++b) {
      bool br = b >= m;
      int bi = br ? b - m : b;
      int r;
      // r^i r^j = r^(i+j);  r^i (s r^j) = s r^(j-i);
      // (s r^i) r^j = s r^(i+j);  (s r^i)(s r^j) = r^(j-i).
      if (!ar && !br) r = idx(false, ai + bi);
      else if (!ar && br) r = idx(true, bi - ai);
      else if (ar && !br) r = idx(true, ai + bi);
      else r = idx(false, bi - ai);
      g.table_[static_cast<size_t>(a) * n + b] = r;
    }
  }
  g.finalize();
  return g;
}

FiniteGroup make_dicyclic(int m) {
  if (m < 1) throw Error(ErrorCode::ParseError, "dicyclic parameter must be >= 1");
  int two_m = 2 * m, n = 4 * m;
  FiniteGroup g;
  g.n_ = n;
  g.table_.resize(static_cast<size_t>(n) * n);
  auto idx = [&](bool hasb, int i) {
    return (hasb ? two_m : 0) + ((i % two_m) + two_m) % two_m;
  };
  for (int a = 0; a < n; ++a) {
    bool ab = a >= two_m;
    int ai = ab ? a - two_m : a;
    for (int b = 0; b < n; ++b) {
      bool bb = b >= two_m;
      int bi = bb ? b - two_m : b;
      int r;
      // a^i a^j = a^(i+j);  a^i (a^j b) = a^(i+j) b;
      // (a^i b) a^j = a^(i-j) b;  (a^i b)(a^j b) = a^(i-j+m).
      if (!ab && !bb) r = idx(false, ai + bi);
      else if (!ab && bb) r = idx(true, ai + bi);
      else if (ab && !bb) r = idx(true, ai - bi);
      else r = idx(false, ai - bi + m);
      g.table_[static_cast<size_t>(a) * n + b] = r;
    }
  }
  g.finalize();
  return g;
}

FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  int gn = g.order(), hn = h.order(), n = gn * hn;
  FiniteGroup out;
  out.n_ = n;
  out.table_.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    int ag = a / hn, ah = a % hn;
    for (int b = 0; b < n; ++b) {
      int bg = b / hn, bh = b % hn;
      out.table_[static_cast<size_t>(a) * n + b] =
          g.mul(ag, bg) * hn + h.mul(ah, bh);
    }
  }
  out.finalize();
  return out;
}

FiniteGroup from_cayley_table(const std::vector<std::vector<int>>& rows,
                              FiniteGroup::TableValidation v) {
  int n = static_cast<int>(rows.size());
  if (n == 0) throw Error(ErrorCode::NotClosed, "empty table");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(rows[a].size()) != n)
      throw Error(ErrorCode::NotClosed,
                  "row " + std::to_string(a) + " has " +
                      std::to_string(rows[a].size()) + " entries, expected " +
                      std::to_string(n));
    for (int b = 0; b < n; ++b)
      if (rows[a][b] < 0 || rows[a][b] >= n)
        throw Error(ErrorCode::NotClosed,
                    "entry (" + std::to_string(a) + "," + std::to_string(b) +
                        ") = " + std::to_string(rows[a][b]) +
                        " outside [0," + std::to_string(n) + ")");
  }

  int e = -1;
  for (int c = 0; c < n && e < 0; ++c) {
    bool ok = true;
    for (int a = 0; a < n; ++a)
      if (rows[c][a] != a || rows[a][c] != a) {
        ok = false;
        break;
      }
    if (ok) e = c;
  }
  if (e < 0) throw Error(ErrorCode::NoIdentity, "no two-sided identity");

  // Swap labels 0 <-> e so the identity sits at index 0.
  auto relabel = [&](int x) { return x == e ? 0 : (x == 0 ? e : x); };
  FiniteGroup g;
  g.n_ = n;
  g.table_.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      g.table_[static_cast<size_t>(relabel(a)) * n + relabel(b)] =
          relabel(rows[a][b]);

  if (v.check_associativity) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
            throw Error(ErrorCode::NotAssociative,
                        "(" + std::to_string(a) + "*" + std::to_string(b) +
                            ")*" + std::to_string(c) + " != " +
                            std::to_string(a) + "*(" + std::to_string(b) +
                            "*" + std::to_string(c) + ")");
  }

  g.finalize();  // throws NoInverse if needed
  return g;
}

FiniteGroup from_permutation_generators(const std::vector<std::vector<int>>& gens,
                                        int closure_cap) {
  if (gens.empty()) return make_cyclic(1);

  size_t k = gens[0].size();
  for (const auto& p : gens) {
    if (p.size() != k)
      throw Error(ErrorCode::ParseError, "generators act on different domains");
    std::vector<bool> seen(k, false);
    for (int x : p) {
      if (x < 0 || static_cast<size_t>(x) >= k || seen[x])
        throw Error(ErrorCode::ParseError, "generator is not a bijection");
      seen[x] = true;
    }
  }

  std::vector<int> identity(k);
  for (size_t i = 0; i < k; ++i) identity[i] = static_cast<int>(i);

  // (p*q)(x) = p(q(x))
  auto compose = [&](const std::vector<int>& p, const std::vector<int>& q) {
    std::vector<int> r(k);
    for (size_t i = 0; i < k; ++i) r[i] = p[q[i]];
    return r;
  };

  std::vector<std::vector<int>> elems{identity};
  std::map<std::vector<int>, int> index{{identity, 0}};
  std::queue<int> work;
  work.push(0);
  while (!work.empty()) {
    int cur = work.front();
    work.pop();
    for (const auto& gen : gens) {
      auto next = compose(elems[cur], gen);
      if (index.emplace(next, static_cast<int>(elems.size())).second) {
        elems.push_back(next);
        if (static_cast<int>(elems.size()) > closure_cap)
          throw Error(ErrorCode::ClosureCapExceeded,
                      "closure exceeds cap " + std::to_string(closure_cap));
        work.push(static_cast<int>(elems.size()) - 1);
      }
    }
  }

  int n = static_cast<int>(elems.size());
  FiniteGroup g;
  g.n_ = n;
  g.table_.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      g.table_[static_cast<size_t>(a) * n + b] = index.at(compose(elems[a], elems[b]));
  g.finalize();
  return g;
}

int smallest_prime_divisor(const FiniteGroup& g) {
  int n = g.order();
  if (n <= 1)
    throw Error(ErrorCode::TrivialGroup,
                "smallest prime divisor undefined for the trivial group");
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

Subgroup subgroup_generated(const FiniteGroup& g, const GroupSubset& gens) {
  int n = g.order();
  Subgroup sub;
  sub.members_ = GroupSubset(n);
  sub.members_.add(kIdentity);
  std::vector<int> list{kIdentity};
  gens.for_each([&](int x) {
    if (!sub.members_.test(x)) {
      sub.members_.add(x);
      list.push_back(x);
    }
  });

  // Close under multiplication; a finite closed subset containing 1 is a
  // subgroup (inverses arise as powers).
  for (size_t i = 0; i < list.size(); ++i)
    for (size_t j = 0; j < list.size(); ++j) {
      int p = g.mul(list[i], list[j]);
      if (!sub.members_.test(p)) {
        sub.members_.add(p);
        list.push_back(p);
      }
    }

  sub.coset_of_.assign(n, -1);
  sub.coset_count_ = 0;
  for (int a = 0; a < n; ++a) {
    if (sub.coset_of_[a] >= 0) continue;
    int c = sub.coset_count_++;
    sub.members_.for_each([&](int h) { sub.coset_of_[g.mul(a, h)] = c; });
  }
  return sub;
}

Subgroup derived_subgroup(const FiniteGroup& g) {
  int n = g.order();
  GroupSubset gens(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      gens.add(g.mul(g.mul(g.inverse(a), g.inverse(b)), g.mul(a, b)));
  return subgroup_generated(g, gens);
}

std::optional<GroupElement> element_of_order(const FiniteGroup& g, int m) {
  for (int a = 0; a < g.order(); ++a)
    if (g.elem_order(a) == m) return a;
  return std::nullopt;
}

}  // namespace davenport
