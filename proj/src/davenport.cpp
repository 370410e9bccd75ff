#include "davenport/davenport.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <climits>
#include <thread>
#include <vector>

namespace davenport {

namespace {

using Clock = std::chrono::steady_clock;

template <int W>
struct Mask {
  std::array<uint64_t, W> w{};
  bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
  void set(int i) { w[i >> 6] |= uint64_t(1) << (i & 63); }
  Mask& operator|=(const Mask& o) {
    for (int k = 0; k < W; ++k) w[k] |= o.w[k];
    return *this;
  }
  template <class F>
  void for_each(F f) const {
    for (int k = 0; k < W; ++k) {
      uint64_t m = w[k];
      while (m) {
        f(k * 64 + std::countr_zero(m));
        m &= m - 1;
      }
    }
  }
};

// Shared pi lattice over the sub-multisets of the current DFS path, grown and
// truncated with stack discipline.  Node i stores pi(multiset(i)) as a bit
// mask; node 0 is the empty-multiset sentinel.  Because the DFS extends by
// non-decreasing element index, all copies of one element are adjacent, and a
// push only appends one contiguous slice of new nodes (the sub-multisets that
// use the new copy), each computed from earlier nodes by peeling a last
// factor.  A per-depth stack of Pi masks gives O(1) product-one-freeness
// tests for extensions: S·g stays free iff g != 1 and g^-1 not in Pi(S)
// (rotate any product-one ordering so g comes last).
template <int W>
class PathLattice {
 public:
  explicit PathLattice(const FiniteGroup& g)
      : g_(&g), n_(g.order()), rmul_(static_cast<size_t>(n_) * n_) {
    for (int e = 0; e < n_; ++e)
      for (int a = 0; a < n_; ++a)
        rmul_[static_cast<size_t>(e) * n_ + a] = g.mul(a, e);
    nodes_.resize(1);
    supp_.resize(1, 0);
    pi_stack_.push_back(Mask<W>{});
  }

  int depth() const { return static_cast<int>(path_.size()); }
  const Mask<W>& all_products() const { return pi_stack_.back(); }  // Pi(S)

  bool extension_stays_free(int e) const {
    return e != kIdentity && !all_products().test(g_->inverse(e));
  }

  // 1 in pi(S)?  The full multiset is the highest-index node.
  bool top_contains_identity() const { return nodes_.back().test(kIdentity); }

  void push(int e) {
    if (!path_.empty() && e < path_.back())
      throw Error(ErrorCode::InternalError, "non-canonical push");
    size_t old_size = nodes_.size();
    bool new_digit = digits_.empty() || digits_.back().elem != e;
    if (new_digit) {
      if (digits_.size() >= 64)
        throw Error(ErrorCode::InternalError,
                    "path lattice limited to 64 distinct elements");
      digits_.push_back({e, old_size, 2});
    } else {
      ++digits_.back().radix;
    }
    size_t slice = digits_.back().stride;  // = old_size for a new digit
    if (old_size + slice > (size_t(1) << 22))
      throw Error(ErrorCode::InternalError, "path lattice too large");
    nodes_.resize(old_size + slice);
    supp_.resize(old_size + slice);

    uint64_t ebit = uint64_t(1) << (digits_.size() - 1);
    size_t estride = digits_.back().stride;
    Mask<W> acc = pi_stack_.back();
    for (size_t i = old_size; i < old_size + slice; ++i) {
      supp_[i] = supp_[i - estride] | ebit;
      Mask<W> v{};
      uint64_t m = supp_[i];
      while (m) {
        size_t q = static_cast<size_t>(std::countr_zero(m));
        m &= m - 1;
        const Digit& d = digits_[q];
        size_t sub = i - d.stride;
        if (sub == 0) {
          v.set(d.elem);
        } else {
          const int* col = &rmul_[static_cast<size_t>(d.elem) * n_];
          nodes_[sub].for_each([&](int x) { v.set(col[x]); });
        }
      }
      nodes_[i] = v;
      acc |= v;
    }
    pi_stack_.push_back(acc);
    path_.push_back(e);
    new_digit_.push_back(new_digit);
  }

  void pop() {
    size_t slice = digits_.back().stride;
    if (new_digit_.back())
      slice = nodes_.size() / 2;  // new-digit slices double the lattice
    nodes_.resize(nodes_.size() - slice);
    supp_.resize(nodes_.size());
    if (new_digit_.back())
      digits_.pop_back();
    else
      --digits_.back().radix;
    new_digit_.pop_back();
    pi_stack_.pop_back();
    path_.pop_back();
  }

  // Proper non-empty T | S with 1 in pi(T) and 1 in pi(S·T^[-1])?
  // Complement of node t is node (size-1) - t in mixed-radix arithmetic.
  bool splittable() const {
    size_t full = nodes_.size() - 1;
    for (size_t t = 1; t < full; ++t)
      if (nodes_[t].test(kIdentity) && nodes_[full - t].test(kIdentity))
        return true;
    return false;
  }

  Sequence witness() const {
    Sequence s(n_);
    for (int e : path_) s.add(e);
    return s;
  }

 private:
  struct Digit {
    int elem;
    size_t stride;
    int radix;
  };
  const FiniteGroup* g_;
  int n_;
  std::vector<int> rmul_;  // rmul_[e*n + a] = a*e (transpose for gathers)
  std::vector<Mask<W>> nodes_;
  std::vector<uint64_t> supp_;  // per node: digit positions with nonzero digit
  std::vector<Digit> digits_;   // one per distinct path element, oldest first
  std::vector<int> path_;
  std::vector<bool> new_digit_;
  std::vector<Mask<W>> pi_stack_;  // Pi per depth (index = depth)
};

struct RootOutcome {
  int best = 0;
  Sequence witness;
  long long nodes = 0;
  bool cap_hit = false;
  bool reached_ceiling = false;
};

template <int W>
class SmallSearch {
 public:
  SmallSearch(const FiniteGroup& g, int ceiling, std::optional<long long> cap,
              std::atomic<int>* earliest_stop)
      : g_(g), lat_(g), n_(g.order()), ceiling_(ceiling), cap_(cap),
        earliest_stop_(earliest_stop) {}

  RootOutcome run_root(int root_elem, int root_index) {
    out_ = RootOutcome{};
    out_.witness = Sequence(n_);
    root_index_ = root_index;
    aborted_ = false;
    ++out_.nodes;
    lat_.push(root_elem);
    out_.reached_ceiling = dfs(root_elem);
    lat_.pop();
    return out_;
  }

 private:
  bool stopped_by_other() const {
    return earliest_stop_ &&
           earliest_stop_->load(std::memory_order_relaxed) < root_index_;
  }

  bool dfs(int min_elem) {
    int depth = lat_.depth();
    if (depth > out_.best) {
      out_.best = depth;
      out_.witness = lat_.witness();
    }
    if (depth >= ceiling_) return true;
    for (int e = min_elem; e < n_; ++e) {
      if (stopped_by_other()) {
        aborted_ = true;
        return false;
      }
      if (!lat_.extension_stays_free(e)) continue;
      if (cap_ && out_.nodes >= *cap_) {
        out_.cap_hit = true;
        return false;
      }
      ++out_.nodes;
      lat_.push(e);
      bool stop = dfs(e);
      lat_.pop();
      if (stop) return true;
      if (aborted_ || out_.cap_hit) return false;
    }
    return false;
  }

  const FiniteGroup& g_;
  PathLattice<W> lat_;
  int n_, ceiling_;
  std::optional<long long> cap_;
  std::atomic<int>* earliest_stop_;
  int root_index_ = 0;
  bool aborted_ = false;
  RootOutcome out_;
};

void atomic_min(std::atomic<int>& a, int v) {
  int cur = a.load(std::memory_order_relaxed);
  while (v < cur && !a.compare_exchange_weak(cur, v)) {
  }
}

template <int W>
DavenportResult small_impl(const FiniteGroup& g, const SearchConfig& cfg) {
  int n = g.order();
  int sound = g.cyclic() ? n - 1 : n / 2;
  int ceiling = sound;
  if (cfg.max_length) ceiling = std::clamp(*cfg.max_length, 0, sound);

  std::vector<int> roots;
  for (int e = 1; e < n; ++e) roots.push_back(e);

  std::vector<RootOutcome> outcomes(roots.size());
  std::atomic<int> earliest_stop{INT_MAX};

  if (ceiling > 0 && !roots.empty()) {
    auto work = [&](int worker_count) {
      std::atomic<size_t> next{0};
      auto body = [&] {
        SmallSearch<W> search(g, ceiling, cfg.node_cap, &earliest_stop);
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= roots.size()) break;
          // Roots numerically above a known ceiling-achiever cannot change
          // value or witness; skip them.  Lower roots must run to completion
          // so the first-in-canonical-order witness stays deterministic.
          if (earliest_stop.load(std::memory_order_relaxed) <
              static_cast<int>(i))
            continue;
          outcomes[i] = search.run_root(roots[i], static_cast<int>(i));
          if (outcomes[i].reached_ceiling)
            atomic_min(earliest_stop, static_cast<int>(i));
        }
      };
      if (worker_count <= 1) {
        body();
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < worker_count; ++t) pool.emplace_back(body);
        for (auto& t : pool) t.join();
      }
    };
    int workers = 1;
    if (cfg.parallel_roots) {
      workers = static_cast<int>(std::thread::hardware_concurrency());
      workers = std::clamp(workers, 1, static_cast<int>(roots.size()));
    }
    work(workers);
  }

  DavenportResult res;
  res.witness = Sequence(n);
  bool cap_hit = false;
  int stop_at = earliest_stop.load();
  for (size_t i = 0; i < roots.size(); ++i) {
    const RootOutcome& o = outcomes[i];
    res.nodes_expanded += o.nodes;
    // Outcomes past the earliest ceiling root may be partial (aborted); they
    // cannot beat the ceiling, so exclude them from witness selection.
    if (static_cast<int>(i) > stop_at) continue;
    cap_hit = cap_hit || o.cap_hit;
    if (o.best > res.value) {
      res.value = o.best;
      res.witness = o.witness;
    }
  }

  if (res.value >= sound) {
    res.status = SearchStatus::exact;  // met the published upper bound
  } else if (cap_hit) {
    res.status = SearchStatus::lower_bound_only;
  } else if (ceiling < sound && res.value == ceiling) {
    res.status = SearchStatus::lower_bound_only;  // truncated by max_length
  } else {
    res.status = SearchStatus::exact;
  }
  return res;
}

template <int W>
class LargeSearch {
 public:
  LargeSearch(const FiniteGroup& g, int ceiling)
      : g_(g), lat_(g), n_(g.order()), ceiling_(ceiling),
        abelian_(g.abelian()) {}

  void run(DavenportResult& res) {
    res_ = &res;
    done_ = false;
    for (int e = 1; e < n_ && !done_; ++e) visit(e);
  }

 private:
  void visit(int e) {
    ++res_->nodes_expanded;
    lat_.push(e);
    int depth = lat_.depth();
    if (lat_.top_contains_identity() && depth > res_->value &&
        !lat_.splittable()) {
      res_->value = depth;
      res_->witness = lat_.witness();
      if (depth >= ceiling_) done_ = true;
    }
    // In an abelian group no extension of a multiset that already contains a
    // product-one sub-multiset can be minimal: the offending sub-multiset
    // stays proper and its complement inherits sum zero.  No such pruning is
    // sound in general.
    bool prune = abelian_ && lat_.all_products().test(kIdentity);
    if (!prune && depth < ceiling_) {
      for (int f = e; f < n_ && !done_; ++f) visit(f);
    }
    lat_.pop();
  }

  const FiniteGroup& g_;
  PathLattice<W> lat_;
  int n_, ceiling_;
  bool abelian_;
  DavenportResult* res_ = nullptr;
  bool done_ = false;
};

template <int W>
DavenportResult large_impl(const FiniteGroup& g, const SearchConfig& cfg) {
  int n = g.order();
  int sound = g.cyclic() ? n : std::min(n, 2 * n / smallest_prime_divisor(g));
  int ceiling = sound;
  if (cfg.max_length) ceiling = std::clamp(*cfg.max_length, 0, sound);

  DavenportResult res;
  res.witness = Sequence(n);
  if (ceiling >= 1) {
    // The identity alone is minimal product-one; any longer sequence through
    // the identity splits off {1}, so the DFS skips element 0 entirely.
    res.value = 1;
    res.witness.add(kIdentity);
    res.nodes_expanded = 1;
    LargeSearch<W> search(g, ceiling);
    search.run(res);
  }

  if (res.value >= sound)
    res.status = SearchStatus::exact;
  else if (ceiling < sound && res.value == ceiling)
    res.status = SearchStatus::lower_bound_only;
  else
    res.status = SearchStatus::exact;
  return res;
}

template <class Impl1, class Impl2, class Impl4, class Impl8>
DavenportResult dispatch_by_width(const FiniteGroup& g, Impl1 i1, Impl2 i2,
                                  Impl4 i4, Impl8 i8) {
  int n = g.order();
  if (n <= 64) return i1();
  if (n <= 128) return i2();
  if (n <= 256) return i4();
  if (n <= 512) return i8();
  throw Error(ErrorCode::OrderCapExceeded,
              "search supports groups of order <= 512");
}

}  // namespace

DavenportResult small_davenport(const FiniteGroup& g, const SearchConfig& cfg) {
  auto t0 = Clock::now();
  DavenportResult res = dispatch_by_width(
      g, [&] { return small_impl<1>(g, cfg); },
      [&] { return small_impl<2>(g, cfg); },
      [&] { return small_impl<4>(g, cfg); },
      [&] { return small_impl<8>(g, cfg); });
  res.elapsed =
      std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0);

  // Independent revalidation through the public product ops.
  if (res.witness.length() != res.value ||
      !is_product_one_free(g, res.witness))
    throw Error(ErrorCode::InternalError,
                "small_davenport witness failed revalidation");
  return res;
}

DavenportResult large_davenport(const FiniteGroup& g, const SearchConfig& cfg) {
  if (g.order() > cfg.D_order_cap)
    throw Error(ErrorCode::OrderCapExceeded,
                "group order " + std::to_string(g.order()) +
                    " exceeds D search cap " + std::to_string(cfg.D_order_cap));
  auto t0 = Clock::now();
  DavenportResult res = dispatch_by_width(
      g, [&] { return large_impl<1>(g, cfg); },
      [&] { return large_impl<2>(g, cfg); },
      [&] { return large_impl<4>(g, cfg); },
      [&] { return large_impl<8>(g, cfg); });
  res.elapsed =
      std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0);

  if (res.witness.length() != res.value ||
      (res.value >= 1 && !is_minimal_product_one(g, res.witness)))
    throw Error(ErrorCode::InternalError,
                "large_davenport witness failed revalidation");
  return res;
}

std::optional<Sequence> extremal_construction(const FiniteGroup& g) {
  int n = g.order();
  if (n == 1)
    throw Error(ErrorCode::TrivialGroup,
                "construction undefined for the trivial group");
  if (g.cyclic())
    throw Error(ErrorCode::CyclicGroup,
                "construction defined for non-cyclic groups only");
  int p = smallest_prime_divisor(g);
  auto h = element_of_order(g, n / p);
  if (!h) return std::nullopt;

  Subgroup cyc = subgroup_generated(g, GroupSubset::single(n, *h));
  int outside = -1;
  for (int x = 0; x < n; ++x)
    if (!cyc.contains(x)) {
      outside = x;
      break;
    }
  if (outside < 0)
    throw Error(ErrorCode::InternalError,
                "<h> of order n/p covers a non-cyclic group");

  Sequence s(n);
  s.add(outside, p - 1);
  s.add(*h, n / p - 1);
  if (!is_product_one_free(g, s))
    throw Error(ErrorCode::InternalError,
                "construction failed product-one-freeness verification");
  return s;
}

int theorem_upper_bound(const FiniteGroup& g) {
  if (g.cyclic())
    throw Error(ErrorCode::CyclicGroup, "bound applies to non-cyclic groups");
  int n = g.order(), p = smallest_prime_divisor(g);
  return n / p + 9 * p * p - 10 * p;
}

int conjecture_upper_bound(const FiniteGroup& g) {
  if (g.cyclic())
    throw Error(ErrorCode::CyclicGroup, "bound applies to non-cyclic groups");
  int n = g.order(), p = smallest_prime_divisor(g);
  return n / p + p - 2;
}

const char* bound_flag_name(BoundFlag f) {
  switch (f) {
    case BoundFlag::pass: return "pass";
    case BoundFlag::fail: return "fail";
    case BoundFlag::not_applicable: return "n/a";
    case BoundFlag::violation_reported: return "VIOLATION-REPORTED";
  }
  return "?";
}

bool BoundsReport::any_failure() const {
  for (BoundFlag f : {flags.chain_lower, flags.chain_upper,
                      flags.abelian_equality, flags.cyclic_large, flags.ow,
                      flags.gryn, flags.theorem, flags.construction})
    if (f == BoundFlag::fail) return true;
  return false;
}

BoundsReport check_bounds(const FiniteGroup& g, const std::string& group_id,
                          const std::optional<DavenportResult>& d,
                          const std::optional<DavenportResult>& big_d) {
  BoundsReport r;
  r.group_id = group_id;
  r.n = g.order();

  std::optional<int> d_exact, D_exact;
  if (d) {
    r.d = d->value;
    r.d_status = d->status;
    r.nodes_expanded += d->nodes_expanded;
    r.elapsed_ms +=
        std::chrono::duration_cast<std::chrono::milliseconds>(d->elapsed).count();
    if (d->status == SearchStatus::exact) d_exact = d->value;
  }
  if (big_d) {
    r.D = big_d->value;
    r.nodes_expanded += big_d->nodes_expanded;
    r.elapsed_ms +=
        std::chrono::duration_cast<std::chrono::milliseconds>(big_d->elapsed)
            .count();
    if (big_d->status == SearchStatus::exact) D_exact = big_d->value;
  }
  if (!d_exact && !D_exact)
    throw Error(ErrorCode::NoExactValues,
                "check_bounds needs at least one exact input value");

  bool noncyclic = !g.cyclic();
  if (r.n >= 2) {
    r.p = smallest_prime_divisor(g);
    if (noncyclic) {
      r.theorem_bound = theorem_upper_bound(g);
      r.conjecture_bound = conjecture_upper_bound(g);
      r.ow_bound = r.n / 2;
      r.gryn_bound = 2 * r.n / *r.p;
      if (auto s = extremal_construction(g))
        r.construction_length = s->length();
    }
  }

  auto verdict = [](bool ok) { return ok ? BoundFlag::pass : BoundFlag::fail; };
  if (d_exact && D_exact) r.flags.chain_lower = verdict(*d_exact + 1 <= *D_exact);
  if (D_exact) r.flags.chain_upper = verdict(*D_exact <= r.n);
  if (g.abelian() && d_exact && D_exact)
    r.flags.abelian_equality = verdict(*d_exact + 1 == *D_exact);
  if (g.cyclic() && D_exact) r.flags.cyclic_large = verdict(*D_exact == r.n);
  if (noncyclic && d_exact) {
    r.flags.ow = verdict(*d_exact <= *r.ow_bound);
    r.flags.theorem = verdict(*d_exact <= *r.theorem_bound);
    r.flags.conjecture = *d_exact <= *r.conjecture_bound
                             ? BoundFlag::pass
                             : BoundFlag::violation_reported;
  }
  if (noncyclic && D_exact) r.flags.gryn = verdict(*D_exact <= *r.gryn_bound);
  if (r.construction_length && d_exact)
    r.flags.construction = verdict(*r.construction_length <= *d_exact);

  return r;
}

}  // namespace davenport
