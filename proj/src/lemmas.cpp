#include "davenport/lemmas.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <thread>
#include <unordered_map>

namespace davenport {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "n/a";
  }
  return "?";
}

Verdict check_lemma_ksquared(const FiniteGroup& g, const Sequence& s) {
  if (s.empty()) return Verdict::not_applicable;
  // Distinct terms are part of the hypothesis: with repetition the bound is
  // simply false (1^[10] over C16 is free with |Pi| = 10 < 100/9).
  if (s.max_multiplicity() > 1) return Verdict::not_applicable;
  GroupSubset pi = all_subsequence_products(g, s);
  if (pi.test(kIdentity)) return Verdict::not_applicable;
  long long k = s.length();
  return 9LL * pi.size() >= k * k ? Verdict::pass : Verdict::fail;
}

Verdict check_kemperman(const FiniteGroup& g, const GroupSubset& a,
                        const GroupSubset& b) {
  if (!a.test(kIdentity) || !b.test(kIdentity)) return Verdict::not_applicable;
  bool trivial_only = true;
  a.for_each([&](int x) {
    if (x != kIdentity && b.test(g.inverse(x))) trivial_only = false;
  });
  if (!trivial_only) return Verdict::not_applicable;
  GroupSubset ab = product_set(g, a, b);
  return ab.size() >= a.size() + b.size() - 1 ? Verdict::pass : Verdict::fail;
}

Verdict check_partition_superadditivity(const FiniteGroup& g,
                                        const std::vector<Sequence>& parts) {
  if (parts.empty()) return Verdict::not_applicable;
  Sequence s(g.order());
  for (const Sequence& part : parts) {
    if (part.empty()) return Verdict::not_applicable;
    s = s.concat(part);
  }
  GroupSubset pi = all_subsequence_products(g, s);
  if (pi.test(kIdentity)) return Verdict::not_applicable;
  long long sum = 0;
  for (const Sequence& part : parts)
    sum += all_subsequence_products(g, part).size();
  return pi.size() >= sum ? Verdict::pass : Verdict::fail;
}

Verdict check_length_bound(const FiniteGroup& g, const Sequence& s) {
  if (s.empty()) return Verdict::not_applicable;
  GroupSubset pi = all_subsequence_products(g, s);
  if (pi.test(kIdentity)) return Verdict::not_applicable;
  return pi.size() >= s.length() ? Verdict::pass : Verdict::fail;
}

Verdict check_subproduct(const FiniteGroup& g, const Subgroup& n,
                         const GroupSubset& a, const GroupSubset& b) {
  if (a.empty() || b.empty()) return Verdict::not_applicable;
  if (!a.intersects(n.members()) || !b.intersects(n.members()))
    return Verdict::not_applicable;
  if (bar_set(n, b).size() < 2) return Verdict::not_applicable;
  GroupSubset prod = product_set(g, a, b);
  prod |= product_set(g, b, a);
  int lhs = bar_set(n, prod).size();
  int bound = std::min(smallest_prime_divisor(g), bar_set(n, a).size() + 1);
  return lhs >= bound ? Verdict::pass : Verdict::fail;
}

Verdict check_coset(const FiniteGroup& g, const Subgroup& n,
                    const Sequence& s) {
  if (s.empty()) return Verdict::not_applicable;
  for (int e : s.support())
    if (n.contains(e)) return Verdict::not_applicable;
  GroupSubset bar = bar_set(n, all_subsequence_products(g, s));
  bar.add(0);  // the coset of the identity is N itself
  int bound = std::min(smallest_prime_divisor(g), s.length() + 1);
  return bar.size() >= bound ? Verdict::pass : Verdict::fail;
}

std::vector<std::string> lemma_ids() {
  return {"2.1", "2.2", "2.3", "2.4", "2.5", "2.6"};
}

namespace {

int lemma_index_of(const std::string& lemma) {
  auto ids = lemma_ids();
  auto it = std::find(ids.begin(), ids.end(), lemma);
  if (it == ids.end())
    throw Error(ErrorCode::ParseError,
                "unknown lemma id '" + lemma + "' (expected 2.1..2.6)");
  return static_cast<int>(it - ids.begin());
}

uint64_t splitmix(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Rng {
  uint64_t state;
  uint64_t next() { return splitmix(state); }
  int below(int m) {
    return m <= 1 ? 0 : static_cast<int>(next() % static_cast<uint64_t>(m));
  }
  bool chance_percent(int pct) { return below(100) < pct; }
  int pick(const std::vector<int>& v) {
    return v[static_cast<size_t>(below(static_cast<int>(v.size())))];
  }
};

// Instance i of a suite depends only on (spec.seed, lemma, i), never on
// worker count or scheduling.
Rng instance_rng(uint64_t seed, int lemma_index, long long i) {
  uint64_t s = seed;
  splitmix(s);
  s ^= 0x517cc1b727220a95ull * static_cast<uint64_t>(lemma_index + 1);
  splitmix(s);
  s ^= static_cast<uint64_t>(i) * 0x2545f4914f6cdd1dull;
  splitmix(s);
  return Rng{s};
}

// Grown one term at a time: S·e stays product-one free iff e != 1 and
// e^-1 not in Pi(S), so every prefix is free by construction.
Sequence random_free_sequence(const FiniteGroup& g, Rng& rng, int target_len,
                              bool squarefree = false) {
  Sequence s(g.order());
  std::vector<int> cands;
  for (int step = 0; step < target_len; ++step) {
    GroupSubset pi = all_subsequence_products(g, s);
    cands.clear();
    for (int e = 1; e < g.order(); ++e) {
      if (squarefree && s.multiplicity(e) > 0) continue;
      if (!pi.test(g.inverse(e))) cands.push_back(e);
    }
    if (cands.empty()) break;
    s.add(rng.pick(cands));
  }
  return s;
}

Subgroup random_subgroup(const FiniteGroup& g, Rng& rng) {
  GroupSubset gens(g.order());
  int count = rng.chance_percent(70) ? 1 : 2;
  for (int k = 0; k < count; ++k) gens.add(rng.below(g.order()));
  return subgroup_generated(g, gens);
}

std::string subset_literal(const GroupSubset& s) {
  std::string out = "[";
  bool first = true;
  s.for_each([&](int e) {
    if (!first) out += ',';
    out += std::to_string(e);
    first = false;
  });
  out += ']';
  return out;
}

std::string parts_literal(const std::vector<Sequence>& parts) {
  std::string out = "[";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i].to_literal();
  }
  out += ']';
  return out;
}

struct Instance {
  Verdict verdict = Verdict::not_applicable;
  std::string group_id;
  std::string literal;
};

using GroupPool = std::vector<const std::pair<std::string, FiniteGroup>*>;

Instance make_instance(const GroupPool& pool, const RandomInstanceSpec& spec,
                       int lemma_index, long long i) {
  Rng rng = instance_rng(spec.seed, lemma_index, i);
  const auto& entry = *pool[static_cast<size_t>(
      rng.below(static_cast<int>(pool.size())))];
  const FiniteGroup& g = entry.second;
  const int n = g.order();
  bool boundary = rng.chance_percent(spec.boundary_bias_percent);
  int p = n >= 2 ? smallest_prime_divisor(g) : 2;
  int maxlen = std::max(1, spec.max_length);
  int maxsub = std::max(1, spec.max_subset);

  Instance out;
  out.group_id = entry.first;
  switch (lemma_index) {
    case 0:    // |Pi| >= |S|^2/9, squarefree instances only
    case 3: {  // |Pi| >= |S|
      int len = boundary ? std::clamp(p - 1, 1, maxlen) : 1 + rng.below(maxlen);
      Sequence s = random_free_sequence(g, rng, len, lemma_index == 0);
      out.literal = "S=" + s.to_literal();
      out.verdict = lemma_index == 0 ? check_lemma_ksquared(g, s)
                                     : check_length_bound(g, s);
      break;
    }
    case 1: {  // Kemperman
      int sa = boundary ? maxsub : 1 + rng.below(maxsub);
      int sb = boundary ? maxsub : 1 + rng.below(maxsub);
      GroupSubset a = GroupSubset::single(n, kIdentity);
      for (int t = 0; t < 4 * sa && a.size() < sa; ++t) a.add(rng.below(n));
      // B grows only by elements that keep ab = 1 trivially solvable, so the
      // hypothesis holds and the instance stays applicable.
      GroupSubset b = GroupSubset::single(n, kIdentity);
      for (int t = 0; t < 4 * sb && b.size() < sb; ++t) {
        int e = rng.below(n);
        if (e == kIdentity || !a.test(g.inverse(e))) b.add(e);
      }
      out.literal = "A=" + subset_literal(a) + ";B=" + subset_literal(b);
      out.verdict = check_kemperman(g, a, b);
      break;
    }
    case 2: {  // partition superadditivity
      int len = boundary ? std::clamp(p - 1, 1, maxlen) : 1 + rng.below(maxlen);
      Sequence s = random_free_sequence(g, rng, len);
      std::vector<Sequence> parts;
      if (!s.empty()) {
        int t = 1 + rng.below(std::min(s.length(), 4));
        parts.assign(static_cast<size_t>(t), Sequence(n));
        for (int e : s.expanded())
          parts[static_cast<size_t>(rng.below(t))].add(e);
        parts.erase(std::remove_if(parts.begin(), parts.end(),
                                   [](const Sequence& q) { return q.empty(); }),
                    parts.end());
      }
      out.literal = "parts=" + parts_literal(parts);
      out.verdict = check_partition_superadditivity(g, parts);
      break;
    }
    case 4: {  // subproduct
      Subgroup sub = random_subgroup(g, rng);
      std::vector<int> members = sub.members().elements();
      std::vector<int> outside;
      for (int e = 0; e < n; ++e)
        if (!sub.contains(e)) outside.push_back(e);
      GroupSubset a(n), b(n);
      if (boundary && !outside.empty()) {
        // Tight shape: A a run of powers of one element outside N, B
        // straddling N with that element.
        int w = rng.pick(outside);
        a.add(rng.pick(members));
        int k = rng.below(p);
        int x = w;
        for (int j = 0; j < k; ++j) {
          a.add(x);
          x = g.mul(x, w);
        }
        b.add(rng.pick(members));
        b.add(w);
      } else {
        int sa = 1 + rng.below(maxsub);
        int sb = 1 + rng.below(maxsub);
        a.add(rng.pick(members));
        for (int t = 0; t < 4 * sa && a.size() < sa; ++t) a.add(rng.below(n));
        b.add(rng.pick(members));
        if (!outside.empty()) b.add(rng.pick(outside));
        for (int t = 0; t < 4 * sb && b.size() < sb; ++t) b.add(rng.below(n));
      }
      out.literal = "N=" + subset_literal(sub.members()) + ";A=" +
                    subset_literal(a) + ";B=" + subset_literal(b);
      out.verdict = check_subproduct(g, sub, a, b);
      break;
    }
    case 5: {  // coset
      Subgroup sub = random_subgroup(g, rng);
      std::vector<int> outside;
      for (int e = 0; e < n; ++e)
        if (!sub.contains(e)) outside.push_back(e);
      Sequence s(n);
      if (!outside.empty()) {
        int len = boundary ? std::clamp(p - 1, 1, maxlen)
                           : 1 + rng.below(maxlen);
        if (boundary) {
          s.add(rng.pick(outside), len);
        } else {
          for (int j = 0; j < len; ++j) s.add(rng.pick(outside));
        }
      }
      out.literal =
          "N=" + subset_literal(sub.members()) + ";S=" + s.to_literal();
      out.verdict = check_coset(g, sub, s);
      break;
    }
    default:
      throw Error(ErrorCode::InternalError, "bad lemma index");
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> split_fields(
    const std::string& instance) {
  std::vector<std::pair<std::string, std::string>> fields;
  size_t pos = 0;
  while (pos < instance.size()) {
    size_t semi = instance.find(';', pos);
    size_t end = semi == std::string::npos ? instance.size() : semi;
    std::string part = instance.substr(pos, end - pos);
    size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ParseError,
                  "expected key=value in instance '" + instance + "'");
    fields.emplace_back(part.substr(0, eq), part.substr(eq + 1));
    pos = end + 1;
  }
  return fields;
}

GroupSubset parse_subset(int n, const std::string& lit) {
  Sequence s = Sequence::parse_literal(n, lit);
  GroupSubset out(n);
  for (int e : s.support()) out.add(e);
  return out;
}

Subgroup parse_subgroup(const FiniteGroup& g, const std::string& lit) {
  GroupSubset mem = parse_subset(g.order(), lit);
  Subgroup sub = subgroup_generated(g, mem);
  if (!(sub.members() == mem))
    throw Error(ErrorCode::ParseError, "N=" + lit + " is not a subgroup");
  return sub;
}

std::vector<Sequence> parse_parts(int n, const std::string& lit) {
  std::vector<Sequence> parts;
  size_t i = 0;
  auto ws = [&] {
    while (i < lit.size() && std::isspace(static_cast<unsigned char>(lit[i])))
      ++i;
  };
  ws();
  if (i >= lit.size() || lit[i] != '[')
    throw Error(ErrorCode::ParseError, "parts literal must start with '['");
  ++i;
  ws();
  if (i < lit.size() && lit[i] == ']') {
    ++i;
  } else {
    for (;;) {
      ws();
      size_t close = lit.find(']', i);
      if (i >= lit.size() || lit[i] != '[' || close == std::string::npos)
        throw Error(ErrorCode::ParseError,
                    "malformed parts literal '" + lit + "'");
      parts.push_back(Sequence::parse_literal(n, lit.substr(i, close - i + 1)));
      i = close + 1;
      ws();
      if (i < lit.size() && lit[i] == ',') {
        ++i;
        continue;
      }
      if (i < lit.size() && lit[i] == ']') {
        ++i;
        break;
      }
      throw Error(ErrorCode::ParseError,
                  "expected ',' or ']' in parts literal '" + lit + "'");
    }
  }
  ws();
  if (i != lit.size())
    throw Error(ErrorCode::ParseError,
                "trailing characters after parts literal '" + lit + "'");
  return parts;
}

const std::string& field(
    const std::vector<std::pair<std::string, std::string>>& fields,
    size_t index, const char* key) {
  if (index >= fields.size() || fields[index].first != key)
    throw Error(ErrorCode::ParseError,
                std::string("expected field '") + key + "' in instance");
  return fields[index].second;
}

}  // namespace

Verdict replay_instance(const FiniteGroup& g, const std::string& lemma,
                        const std::string& instance) {
  int li = lemma_index_of(lemma);
  auto fields = split_fields(instance);
  auto expect_count = [&](size_t c) {
    if (fields.size() != c)
      throw Error(ErrorCode::ParseError,
                  "wrong field count in instance '" + instance + "'");
  };
  int n = g.order();
  switch (li) {
    case 0:
    case 3: {
      expect_count(1);
      Sequence s = Sequence::parse_literal(n, field(fields, 0, "S"));
      return li == 0 ? check_lemma_ksquared(g, s) : check_length_bound(g, s);
    }
    case 1: {
      expect_count(2);
      GroupSubset a = parse_subset(n, field(fields, 0, "A"));
      GroupSubset b = parse_subset(n, field(fields, 1, "B"));
      return check_kemperman(g, a, b);
    }
    case 2: {
      expect_count(1);
      return check_partition_superadditivity(
          g, parse_parts(n, field(fields, 0, "parts")));
    }
    case 4: {
      expect_count(3);
      Subgroup sub = parse_subgroup(g, field(fields, 0, "N"));
      GroupSubset a = parse_subset(n, field(fields, 1, "A"));
      GroupSubset b = parse_subset(n, field(fields, 2, "B"));
      return check_subproduct(g, sub, a, b);
    }
    case 5: {
      expect_count(2);
      Subgroup sub = parse_subgroup(g, field(fields, 0, "N"));
      Sequence s = Sequence::parse_literal(n, field(fields, 1, "S"));
      return check_coset(g, sub, s);
    }
  }
  throw Error(ErrorCode::InternalError, "bad lemma index");
}

std::string LemmaReport::canonical_json() const {
  std::string s = "{\"lemma\":\"" + lemma + "\",\"seed\":" +
                  std::to_string(seed) + ",\"instances_run\":" +
                  std::to_string(instances_run) + ",\"violations\":[";
  for (size_t i = 0; i < violations.size(); ++i) {
    if (i) s += ',';
    s += "{\"group\":\"" + violations[i].group_id + "\",\"instance\":\"" +
         violations[i].instance + "\"}";
  }
  s += "]}";
  return s;
}

LemmaReport run_lemma_suite(
    const std::vector<std::pair<std::string, FiniteGroup>>& groups,
    const RandomInstanceSpec& spec, const std::string& lemma, int workers) {
  auto t0 = std::chrono::steady_clock::now();
  int li = lemma_index_of(lemma);

  GroupPool pool;
  std::unordered_map<std::string, const FiniteGroup*> by_id;
  for (const auto& e : groups) {
    if (e.second.order() < spec.min_order || e.second.order() > spec.max_order)
      continue;
    pool.push_back(&e);
    by_id.emplace(e.first, &e.second);
  }
  if (pool.empty())
    throw Error(ErrorCode::CatalogEmpty,
                "no catalog groups within the requested order range");

  LemmaReport rep;
  rep.lemma = lemma;
  rep.seed = spec.seed;

  workers = std::max(1, workers);
  const long long cap = spec.instances * 64;
  // Chunk size is fixed (not worker-dependent) so the applicable-instance
  // cutoff index is identical for every worker count.
  const long long chunk =
      std::clamp<long long>(spec.instances, 64, 4096);

  long long next_index = 0;
  while (rep.instances_run < spec.instances && next_index < cap) {
    const long long begin = next_index;
    const long long end = std::min(cap, begin + chunk);
    next_index = end;
    std::vector<Instance> out(static_cast<size_t>(end - begin));
    std::atomic<long long> cursor{begin};
    auto body = [&] {
      for (;;) {
        long long i = cursor.fetch_add(1);
        if (i >= end) break;
        out[static_cast<size_t>(i - begin)] = make_instance(pool, spec, li, i);
      }
    };
    if (workers == 1) {
      body();
    } else {
      std::vector<std::thread> threads;
      int count = static_cast<int>(
          std::min<long long>(workers, end - begin));
      for (int t = 0; t < count; ++t) threads.emplace_back(body);
      for (auto& t : threads) t.join();
    }
    for (long long i = begin;
         i < end && rep.instances_run < spec.instances; ++i) {
      Instance& ins = out[static_cast<size_t>(i - begin)];
      if (ins.verdict == Verdict::not_applicable) continue;
      ++rep.instances_run;
      if (ins.verdict == Verdict::fail) {
        // A violation must reproduce from its serialized form before it is
        // reported; a mismatch means the literal round-trip is broken.
        Verdict again =
            replay_instance(*by_id.at(ins.group_id), lemma, ins.literal);
        if (again != Verdict::fail)
          throw Error(ErrorCode::InternalError,
                      "violation did not reproduce from its literal: " +
                          ins.literal);
        rep.violations.push_back({ins.group_id, ins.literal});
      }
    }
  }

  rep.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - t0);
  return rep;
}

}  // namespace davenport
