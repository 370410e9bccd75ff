#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "davenport/group.hpp"
#include "davenport/products.hpp"
#include "davenport/sequence.hpp"

namespace davenport {

// Three-way outcome: a checker whose hypotheses do not hold reports
// not_applicable, never failure.
enum class Verdict { pass, fail, not_applicable };

const char* verdict_name(Verdict v);

// |Pi(S)| >= |S|^2 / 9 for squarefree product-one-free S, compared in
// integers as 9*|Pi(S)| >= |S|^2.  Empty, non-free, or repeated-term S is
// not applicable (with repetition the bound genuinely fails, e.g. 1^[10]
// over C16).
Verdict check_lemma_ksquared(const FiniteGroup& g, const Sequence& s);

// Kemperman: if 1 in A and B and ab = 1 only for a = b = 1, then
// |AB| >= |A| + |B| - 1.
Verdict check_kemperman(const FiniteGroup& g, const GroupSubset& a,
                        const GroupSubset& b);

// For product-one-free S = S_1·...·S_t: |Pi(S)| >= sum |Pi(S_i)|.
Verdict check_partition_superadditivity(const FiniteGroup& g,
                                        const std::vector<Sequence>& parts);

// For product-one-free non-empty S: |Pi(S)| >= |S|.
Verdict check_length_bound(const FiniteGroup& g, const Sequence& s);

// If A and B both meet N and |bar(B)| >= 2, then
// |bar(AB ∪ BA)| >= min{p(G), |bar(A)| + 1}.
Verdict check_subproduct(const FiniteGroup& g, const Subgroup& n,
                         const GroupSubset& a, const GroupSubset& b);

// For non-empty S over G \ N:
// |{bar(1)} ∪ bar(Pi(S))| >= min{p(G), |S| + 1}.
Verdict check_coset(const FiniteGroup& g, const Subgroup& n, const Sequence& s);

// Deterministic random-instance stream: identical spec => identical stream,
// and instance i is a pure function of (spec, i), so reports are independent
// of worker count.
struct RandomInstanceSpec {
  int min_order = 2;
  int max_order = 16;   // catalog filter
  int max_length = 10;  // sequence growth target range [1, max_length]
  int max_subset = 6;   // subset size target range [1, max_subset]
  uint64_t seed = 0;
  // Applicable instances to accumulate per suite; generation stops after
  // 64x this many draws even if the quota is unmet.
  long long instances = 1000;
  // Fraction (in percent) of draws steered to boundary shapes: lengths near
  // p-1, subsets straddling N.
  int boundary_bias_percent = 25;
};

struct LemmaViolation {
  std::string group_id;
  std::string instance;  // replayable literal, see replay_instance
};

struct LemmaReport {
  std::string lemma;           // "2.1".."2.6"
  long long instances_run = 0; // applicable instances checked
  std::vector<LemmaViolation> violations;
  uint64_t seed = 0;
  std::chrono::microseconds elapsed{0};

  bool passed() const { return violations.empty(); }
  // Deterministic serialization (no timing) used for rerun comparisons.
  std::string canonical_json() const;
};

std::vector<std::string> lemma_ids();  // {"2.1",...,"2.6"}

// Runs one lemma suite over the given (id, group) pool.  Violations are
// re-checked from their serialized form before being reported.  Errors:
// CatalogEmpty (empty pool), ParseError (unknown lemma id).
LemmaReport run_lemma_suite(
    const std::vector<std::pair<std::string, FiniteGroup>>& groups,
    const RandomInstanceSpec& spec, const std::string& lemma, int workers = 1);

// Re-runs one serialized instance (the LemmaViolation::instance format)
// against a group.  Literal grammar, by lemma:
//   2.1 / 2.4:  S=[1,1,3]
//   2.2:        A=[0,1];B=[0,2]
//   2.3:        parts=[[1,2],[3]]
//   2.5:        N=[0,3];A=[0,1];B=[0,2]   (N listed by its full member set)
//   2.6:        N=[0,3];S=[1,2]
Verdict replay_instance(const FiniteGroup& g, const std::string& lemma,
                        const std::string& instance);

}  // namespace davenport
