#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "davenport/error.hpp"

namespace davenport::oracles {

namespace {

// Calls f on every sub-multiset of s (including the empty one and s itself);
// stops early when f returns false.
bool for_each_submultiset(const Sequence& s,
                          const std::function<bool(const Sequence&)>& f) {
  std::vector<int> supp = s.support();
  std::vector<int> take(supp.size(), 0);
  for (;;) {
    Sequence t(s.universe_size());
    for (size_t i = 0; i < supp.size(); ++i) t.add(supp[i], take[i]);
    if (!f(t)) return false;
    size_t q = 0;
    while (q < supp.size() && take[q] == s.multiplicity(supp[q]))
      take[q++] = 0;
    if (q == supp.size()) return true;
    ++take[q];
  }
}

}  // namespace

GroupSubset brute_pi(const FiniteGroup& g, const Sequence& s) {
  if (s.empty())
    throw Error(ErrorCode::EmptySequence, "brute_pi of the empty sequence");
  GroupSubset out(g.order());
  std::vector<int> v = s.expanded();  // ascending, a valid permutation start
  if (g.abelian()) {
    int x = kIdentity;
    for (int e : v) x = g.mul(x, e);
    out.add(x);
    return out;
  }
  do {
    int x = kIdentity;
    for (int e : v) x = g.mul(x, e);
    out.add(x);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

GroupSubset brute_all_products(const FiniteGroup& g, const Sequence& s) {
  GroupSubset out(g.order());
  for_each_submultiset(s, [&](const Sequence& t) {
    if (!t.empty()) out |= brute_pi(g, t);
    return true;
  });
  return out;
}

bool brute_free(const FiniteGroup& g, const Sequence& s) {
  if (s.empty()) return true;
  return for_each_submultiset(s, [&](const Sequence& t) {
    return t.empty() || !brute_pi(g, t).test(kIdentity);
  });
}

bool brute_minimal(const FiniteGroup& g, const Sequence& s) {
  if (s.empty()) return false;
  if (!brute_pi(g, s).test(kIdentity)) return false;
  return for_each_submultiset(s, [&](const Sequence& t) {
    if (t.empty() || t.length() == s.length()) return true;
    return !(brute_pi(g, t).test(kIdentity) &&
             brute_pi(g, s.minus(t)).test(kIdentity));
  });
}

NaiveResult naive_small_davenport(const FiniteGroup& g, int hard_cap) {
  int n = g.order();
  if (hard_cap < 0) hard_cap = n;
  NaiveResult best;
  best.witness = Sequence(n);
  Sequence cur(n);
  std::function<void(int)> extend = [&](int min_elem) {
    if (cur.length() > best.value) {
      best.value = cur.length();
      best.witness = cur;
    }
    if (cur.length() >= hard_cap)
      throw Error(ErrorCode::InternalError,
                  "free sequence reached the hard cap");
    for (int e = min_elem; e < n; ++e) {
      cur.add(e);
      if (brute_free(g, cur)) extend(e);
      cur.remove(e);
    }
  };
  extend(1);
  return best;
}

NaiveResult naive_large_davenport(const FiniteGroup& g) {
  int n = g.order();
  NaiveResult best;
  best.value = 1;  // the identity alone
  best.witness = Sequence::of(n, {kIdentity});
  Sequence cur(n);
  // Minimal product-one sequences of length >= 2 never contain the identity
  // (it would split off), so elements 1..n-1 suffice.
  std::function<void(int)> extend = [&](int min_elem) {
    if (cur.length() > best.value && brute_minimal(g, cur)) {
      best.value = cur.length();
      best.witness = cur;
    }
    if (cur.length() >= n) return;  // D(G) <= |G|
    for (int e = min_elem; e < n; ++e) {
      cur.add(e);
      extend(e);
      cur.remove(e);
    }
  };
  extend(1);
  return best;
}

}  // namespace davenport::oracles
