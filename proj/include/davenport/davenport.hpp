#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "davenport/group.hpp"
#include "davenport/products.hpp"
#include "davenport/sequence.hpp"

namespace davenport {

struct SearchConfig {
  // Hard length ceiling (min'd with the sound published ceiling).
  std::optional<int> max_length;
  // Node-expansion budget per root branch; exhausting it anywhere downgrades
  // the result to a lower bound.  Budgeting per root keeps value and witness
  // independent of how roots are scheduled across workers.
  std::optional<long long> node_cap;
  // Evaluate root branches of the d(G) search on independent workers.
  bool parallel_roots = false;
  // large_davenport refuses groups above this order.
  int D_order_cap = 10;
  // check-bounds pipelines may switch the D computation off wholesale.
  bool enable_D_search = true;
};

enum class SearchStatus { exact, lower_bound_only };

struct DavenportResult {
  int value = 0;
  Sequence witness;  // first maximum-length witness in canonical DFS order
  SearchStatus status = SearchStatus::exact;
  long long nodes_expanded = 0;
  std::chrono::microseconds elapsed{0};
};

// d(G): longest product-one-free sequence, by canonical (non-decreasing
// element index) DFS with Pi-based pruning.  Ceiling: n-1 for cyclic G,
// floor(n/2) otherwise.  d of the trivial group is 0.
DavenportResult small_davenport(const FiniteGroup& g, const SearchConfig& cfg = {});

// D(G): longest minimal product-one sequence, by canonical enumeration up to
// the ceiling (n for cyclic G, min(n, 2n/p) otherwise).  D of the trivial
// group is 1.  Error(OrderCapExceeded) above cfg.D_order_cap.
DavenportResult large_davenport(const FiniteGroup& g, const SearchConfig& cfg = {});

// g^[p-1]·h^[n/p-1] where h is the lowest-index element of order n/p and g
// the lowest-index element outside <h>.  nullopt when no element of order
// n/p exists.  The sequence is verified product-one free before returning
// (Error(InternalError) otherwise).  Errors: TrivialGroup, CyclicGroup.
std::optional<Sequence> extremal_construction(const FiniteGroup& g);

// n/p + 9p^2 - 10p; non-cyclic groups only (Error(CyclicGroup)).
int theorem_upper_bound(const FiniteGroup& g);

// n/p + p - 2; non-cyclic groups only (Error(CyclicGroup)).
int conjecture_upper_bound(const FiniteGroup& g);

enum class BoundFlag { pass, fail, not_applicable, violation_reported };

const char* bound_flag_name(BoundFlag f);  // "pass"/"fail"/"n/a"/"VIOLATION-REPORTED"

// Audit row for one group.  Bound values that do not apply (e.g. the
// non-cyclic-only bounds on a cyclic group) are absent rather than
// meaningless numbers; the flags carry pass/fail/n-a per inequality.
struct BoundsReport {
  std::string group_id;
  int n = 0;
  std::optional<int> p;  // absent for the trivial group
  std::optional<int> d;
  std::optional<SearchStatus> d_status;
  std::optional<int> D;
  std::optional<int> construction_length;
  std::optional<int> theorem_bound;
  std::optional<int> conjecture_bound;
  std::optional<int> ow_bound;    // floor(n/2), non-cyclic only
  std::optional<int> gryn_bound;  // 2n/p, non-cyclic only

  struct Flags {
    BoundFlag chain_lower = BoundFlag::not_applicable;   // d+1 <= D
    BoundFlag chain_upper = BoundFlag::not_applicable;   // D <= n
    BoundFlag abelian_equality = BoundFlag::not_applicable;  // abelian: d+1 == D
    BoundFlag cyclic_large = BoundFlag::not_applicable;  // cyclic: D == n
    BoundFlag ow = BoundFlag::not_applicable;            // d <= floor(n/2)
    BoundFlag gryn = BoundFlag::not_applicable;          // D <= 2n/p
    BoundFlag theorem = BoundFlag::not_applicable;       // d <= n/p + 9p^2 - 10p
    BoundFlag construction = BoundFlag::not_applicable;  // construction length <= d
    // The open-conjecture check never *fails*; a violation is reported.
    BoundFlag conjecture = BoundFlag::not_applicable;    // d <= n/p + p - 2
  } flags;

  long long nodes_expanded = 0;
  long long elapsed_ms = 0;

  // True when any proven inequality (everything except `conjecture`) failed.
  bool any_failure() const;
  bool conjecture_violation() const {
    return flags.conjecture == BoundFlag::violation_reported;
  }
};

// Cross-checks whichever of d(G)/D(G) are supplied with exact status against
// every applicable bound.  Results with lower-bound-only status contribute
// their value to the report but no flag verdicts.  Error(NoExactValues) when
// neither input is exact.
BoundsReport check_bounds(const FiniteGroup& g, const std::string& group_id,
                          const std::optional<DavenportResult>& d,
                          const std::optional<DavenportResult>& big_d);

}  // namespace davenport
