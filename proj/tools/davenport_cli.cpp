// Command-line front end: exact Davenport constants, the extremal
// construction, bound audits, and randomized lemma verification over the
// group catalog.
//
// Exit codes: 0 success (including reported conjecture violations),
// 1 verification failure (failed bound flag, lemma violation, failed replay),
// 2 usage or runtime error (unknown group, parse error, locked store, ...).

#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "davenport/catalog.hpp"
#include "davenport/davenport.hpp"
#include "davenport/lemmas.hpp"
#include "davenport/report.hpp"

namespace {

using namespace davenport;

struct GlobalOpts {
  std::string report_path = "davenport-report.json";
  bool no_report = false;
  std::optional<std::string> catalog_dir;
  std::optional<std::string> store_path;
};

Catalog make_catalog(const GlobalOpts& gopt) {
  std::optional<std::string> dir =
      gopt.catalog_dir ? gopt.catalog_dir : default_catalog_dir();
  Catalog cat = load_catalog({}, dir);
  for (const auto& w : cat.warnings)
    std::cerr << "warning: " << w.path << ": " << w.message << "\n";
  return cat;
}

void emit_report(const GlobalOpts& gopt, const std::vector<RunRecord>& records,
                 const std::vector<LemmaReport>& lemmas, uint64_t seed) {
  if (gopt.no_report) return;
  nlohmann::json doc = report_document(records, lemmas, seed);
  std::string why;
  if (!validate_report_schema(doc, &why))
    throw Error(ErrorCode::InternalError, "report failed validation: " + why);
  write_report(gopt.report_path, doc);
  std::cout << "report written to " << gopt.report_path << "\n";
}

std::string status_text(SearchStatus s) {
  return s == SearchStatus::exact ? "exact" : "lower bound only";
}

// Store-aware wrapper around either search; kind is "d" or "D".
DavenportResult run_search(ResultStore* store, const std::string& group_id,
                           const std::string& kind, const FiniteGroup& g,
                           const SearchConfig& cfg) {
  uint64_t digest = 0;
  if (store) {
    digest = ResultStore::config_digest(
        ResultStore::canonical_search_config(kind, cfg));
    if (auto hit = store->get(group_id, kind, digest)) {
      DavenportResult res;
      res.value = (*hit)["value"].get<int>();
      res.witness = Sequence::parse_literal(
          g.order(), (*hit)["witness"].get<std::string>());
      res.status = (*hit)["status"] == "exact" ? SearchStatus::exact
                                               : SearchStatus::lower_bound_only;
      res.nodes_expanded = (*hit)["nodes_expanded"].get<long long>();
      std::cout << "store hit: " << kind << "(" << group_id << ")\n";
      return res;
    }
  }
  DavenportResult res =
      kind == "d" ? small_davenport(g, cfg) : large_davenport(g, cfg);
  if (store) {
    store->put(group_id, kind, digest,
               {{"value", res.value},
                {"witness", res.witness.to_literal()},
                {"status", res.status == SearchStatus::exact
                               ? "exact"
                               : "lower_bound_only"},
                {"nodes_expanded", res.nodes_expanded}});
  }
  return res;
}

// Record for a group where only one search ran (no cross-bound audit).
RunRecord bare_record(const FiniteGroup& g, const std::string& id,
                      const std::optional<DavenportResult>& d,
                      const std::optional<DavenportResult>& big_d) {
  BoundsReport b;
  b.group_id = id;
  b.n = g.order();
  if (b.n >= 2) b.p = smallest_prime_divisor(g);
  if (d) {
    b.d = d->value;
    b.d_status = d->status;
    b.nodes_expanded += d->nodes_expanded;
    b.elapsed_ms += std::chrono::duration_cast<std::chrono::milliseconds>(
                        d->elapsed)
                        .count();
  }
  if (big_d) {
    b.D = big_d->value;
    b.nodes_expanded += big_d->nodes_expanded;
    b.elapsed_ms += std::chrono::duration_cast<std::chrono::milliseconds>(
                        big_d->elapsed)
                        .count();
  }
  return to_run_record(b);
}

int cmd_compute_d(const GlobalOpts& gopt, ResultStore* store,
                  const std::string& group_id, const SearchConfig& cfg) {
  Catalog cat = make_catalog(gopt);
  const GroupCatalogEntry& entry = cat.require(group_id);
  FiniteGroup g = entry.build();
  DavenportResult res = run_search(store, entry.id, "d", g, cfg);
  std::cout << "d(" << entry.id << ") = " << res.value << "\n";
  std::cout << "status: " << status_text(res.status) << "\n";
  std::cout << "witness: " << res.witness.to_literal() << "\n";
  if (is_product_one_free(g, res.witness))
    std::cout << "witness verified product-one free\n";
  std::cout << "nodes expanded: " << res.nodes_expanded << "\n";

  std::vector<RunRecord> records;
  if (res.status == SearchStatus::exact)
    records.push_back(to_run_record(check_bounds(g, entry.id, res, std::nullopt)));
  else
    records.push_back(bare_record(g, entry.id, res, std::nullopt));
  emit_report(gopt, records, {}, 0);
  return 0;
}

int cmd_compute_big_d(const GlobalOpts& gopt, ResultStore* store,
                      const std::string& group_id, const SearchConfig& cfg) {
  Catalog cat = make_catalog(gopt);
  const GroupCatalogEntry& entry = cat.require(group_id);
  FiniteGroup g = entry.build();
  DavenportResult res = run_search(store, entry.id, "D", g, cfg);
  std::cout << "D(" << entry.id << ") = " << res.value << "\n";
  std::cout << "status: " << status_text(res.status) << "\n";
  std::cout << "witness: " << res.witness.to_literal() << "\n";
  if (is_minimal_product_one(g, res.witness))
    std::cout << "witness verified minimal product-one\n";
  std::cout << "nodes expanded: " << res.nodes_expanded << "\n";

  std::vector<RunRecord> records;
  if (res.status == SearchStatus::exact)
    records.push_back(
        to_run_record(check_bounds(g, entry.id, std::nullopt, res)));
  else
    records.push_back(bare_record(g, entry.id, std::nullopt, res));
  emit_report(gopt, records, {}, 0);
  return 0;
}

int cmd_construct(const GlobalOpts& gopt, const std::string& group_id) {
  Catalog cat = make_catalog(gopt);
  const GroupCatalogEntry& entry = cat.require(group_id);
  FiniteGroup g = entry.build();
  std::optional<Sequence> s = extremal_construction(g);
  if (!s) {
    int p = smallest_prime_divisor(g);
    std::cout << "no construction for " << entry.id << ": no element of order "
              << g.order() / p << "\n";
    return 0;
  }
  std::cout << "construction for " << entry.id << ": " << s->to_literal()
            << "\n";
  std::cout << "length: " << s->length() << "\n";
  std::cout << "verified product-one free\n";
  (void)gopt;
  return 0;
}

void print_bounds_row(const BoundsReport& b) {
  auto opt = [](const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string("-");
  };
  std::cout << "group " << b.group_id << ": n=" << b.n << " p=" << opt(b.p)
            << " d=" << opt(b.d) << " D=" << opt(b.D)
            << " construction=" << opt(b.construction_length)
            << " | chain_lower=" << bound_flag_name(b.flags.chain_lower)
            << " chain_upper=" << bound_flag_name(b.flags.chain_upper)
            << " abelian_equality=" << bound_flag_name(b.flags.abelian_equality)
            << " cyclic_large=" << bound_flag_name(b.flags.cyclic_large)
            << " ow=" << bound_flag_name(b.flags.ow)
            << " gryn=" << bound_flag_name(b.flags.gryn)
            << " theorem=" << bound_flag_name(b.flags.theorem)
            << " construction=" << bound_flag_name(b.flags.construction)
            << " conjecture=" << bound_flag_name(b.flags.conjecture) << "\n";
  if (b.conjecture_violation())
    std::cout << "REPORTED-VIOLATION: conjecture d <= n/p + p - 2 fails for "
              << b.group_id << " (d=" << opt(b.d)
              << ", bound=" << opt(b.conjecture_bound) << ")\n";
}

int cmd_check_bounds(const GlobalOpts& gopt, ResultStore* store,
                     const std::vector<std::string>& group_ids,
                     const std::vector<int>& order_range, SearchConfig cfg) {
  Catalog cat = make_catalog(gopt);
  std::vector<const GroupCatalogEntry*> selected;
  for (const auto& id : group_ids) selected.push_back(&cat.require(id));
  if (!order_range.empty())
    for (const auto& e : cat.entries)
      if (e.order >= order_range[0] && e.order <= order_range[1])
        selected.push_back(&e);
  if (selected.empty())
    throw Error(ErrorCode::CatalogEmpty,
                "no groups selected; pass ids or --order-range");

  std::vector<RunRecord> records;
  bool any_fail = false;
  for (const GroupCatalogEntry* entry : selected) {
    FiniteGroup g = entry->build();
    DavenportResult d = run_search(store, entry->id, "d", g, cfg);
    std::optional<DavenportResult> big_d;
    if (cfg.enable_D_search && g.order() <= cfg.D_order_cap)
      big_d = run_search(store, entry->id, "D", g, cfg);
    BoundsReport b = check_bounds(g, entry->id, d, big_d);
    print_bounds_row(b);
    any_fail = any_fail || b.any_failure();
    records.push_back(to_run_record(b));
  }
  emit_report(gopt, records, {}, 0);
  if (any_fail) {
    std::cout << "bound check FAILED\n";
    return 1;
  }
  std::cout << "all bound checks passed\n";
  return 0;
}

int cmd_verify_lemmas(const GlobalOpts& gopt, std::vector<std::string> lemmas,
                      const RandomInstanceSpec& spec, int workers,
                      const std::string& replay_literal,
                      const std::string& replay_group) {
  Catalog cat = make_catalog(gopt);

  if (!replay_literal.empty()) {
    if (lemmas.size() != 1)
      throw Error(ErrorCode::ParseError,
                  "--replay needs exactly one --lemma id");
    if (replay_group.empty())
      throw Error(ErrorCode::ParseError, "--replay needs --group");
    FiniteGroup g = cat.require(replay_group).build();
    Verdict v = replay_instance(g, lemmas[0], replay_literal);
    std::cout << "replay lemma " << lemmas[0] << " on " << replay_group << ": "
              << replay_literal << " -> " << verdict_name(v) << "\n";
    return v == Verdict::fail ? 1 : 0;
  }

  if (lemmas.empty()) lemmas = lemma_ids();
  auto pool = cat.build_in_order_range(spec.min_order, spec.max_order);

  std::vector<LemmaReport> reports;
  bool violated = false;
  for (const auto& id : lemmas) {
    LemmaReport rep = run_lemma_suite(pool, spec, id, workers);
    std::cout << "lemma " << id << ": " << rep.instances_run
              << " applicable instances, " << rep.violations.size()
              << " violations [" << (rep.passed() ? "pass" : "FAIL") << "]\n";
    for (const auto& v : rep.violations)
      std::cout << "REPORTED-VIOLATION lemma=" << id << " group=" << v.group_id
                << " instance=" << v.instance << "\n";
    violated = violated || !rep.passed();
    reports.push_back(std::move(rep));
  }
  emit_report(gopt, {}, reports, spec.seed);
  return violated ? 1 : 0;
}

int cmd_pi(const GlobalOpts& gopt, const std::string& group_id,
           const std::string& literal) {
  Catalog cat = make_catalog(gopt);
  const GroupCatalogEntry& entry = cat.require(group_id);
  FiniteGroup g = entry.build();
  Sequence s = Sequence::parse_literal(g.order(), literal);
  GroupSubset big_pi = all_subsequence_products(g, s);
  if (!s.empty()) std::cout << "pi(S) = " << pi_set(g, s).to_string() << "\n";
  std::cout << "Pi(S) = " << big_pi.to_string() << "\n";
  std::cout << "product-one free: "
            << (is_product_one_free(g, s) ? "yes" : "no") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact product-one sequence toolkit over finite groups"};
  app.require_subcommand(1);

  GlobalOpts gopt;
  std::string catalog_dir, store_path;
  app.add_option("--report", gopt.report_path,
                 "report file path (default davenport-report.json)");
  app.add_flag("--no-report", gopt.no_report, "skip writing the JSON report");
  app.add_option("--catalog-dir", catalog_dir,
                 "directory of Cayley-table files (default "
                 "$DAVENPORT_CATALOG_DIR)");
  app.add_option("--store", store_path,
                 "result store file; identical invocations reuse results");

  SearchConfig cfg;
  std::string group_id, literal;
  std::vector<std::string> group_ids;
  std::vector<int> order_range;
  int max_length = -1;
  long long node_cap = -1;
  bool parallel = false, no_big_d = false;

  auto add_search_opts = [&](CLI::App* c, bool small) {
    if (small) {
      c->add_option("--max-length", max_length, "truncate the search depth");
      c->add_option("--node-cap", node_cap,
                    "per-root node budget; may downgrade to a lower bound");
      c->add_flag("--parallel", parallel, "search root branches in parallel");
    }
    c->add_option("--order-cap", cfg.D_order_cap,
                  "largest group order for the D search (default 10)");
  };

  CLI::App* c_d = app.add_subcommand("compute-d", "small Davenport constant");
  c_d->add_option("group", group_id, "catalog group id")->required();
  add_search_opts(c_d, true);

  CLI::App* c_big = app.add_subcommand("compute-D", "large Davenport constant");
  c_big->add_option("group", group_id, "catalog group id")->required();
  add_search_opts(c_big, false);

  CLI::App* c_con = app.add_subcommand(
      "construct", "product-one-free sequence of length n/p + p - 2");
  c_con->add_option("group", group_id, "catalog group id")->required();

  CLI::App* c_chk = app.add_subcommand("check-bounds",
                                       "audit every applicable bound");
  c_chk->add_option("groups", group_ids, "catalog group ids");
  c_chk->add_option("--order-range", order_range,
                    "check all catalog groups with lo <= order <= hi")
      ->expected(2);
  c_chk->add_flag("--no-D", no_big_d, "skip the D computation");
  add_search_opts(c_chk, true);

  RandomInstanceSpec spec;
  int workers = 1;
  std::vector<std::string> lemmas;
  std::string replay_literal, replay_group;
  CLI::App* c_lem = app.add_subcommand("verify-lemmas",
                                       "randomized lemma verification");
  c_lem->add_option("--lemma", lemmas, "lemma ids (default: all)");
  c_lem->add_option("--seed", spec.seed, "stream seed (default 0)");
  c_lem->add_option("--instances", spec.instances,
                    "applicable instances per lemma (default 1000)");
  c_lem->add_option("--min-order", spec.min_order, "catalog filter");
  c_lem->add_option("--max-order", spec.max_order, "catalog filter");
  c_lem->add_option("--max-length", spec.max_length, "sequence length cap");
  c_lem->add_option("--max-subset", spec.max_subset, "subset size cap");
  c_lem->add_option("--boundary-bias", spec.boundary_bias_percent,
                    "percent of draws steered to boundary shapes");
  c_lem->add_option("--workers", workers, "worker threads (default 1)");
  c_lem->add_option("--replay", replay_literal,
                    "re-check one serialized instance");
  c_lem->add_option("--group", replay_group, "group id for --replay");

  CLI::App* c_pi = app.add_subcommand("pi", "product sets of one sequence");
  c_pi->add_option("group", group_id, "catalog group id")->required();
  c_pi->add_option("sequence", literal, "sequence literal, e.g. [1,1,3]")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (!catalog_dir.empty()) gopt.catalog_dir = catalog_dir;
  if (!store_path.empty()) gopt.store_path = store_path;
  if (max_length >= 0) cfg.max_length = max_length;
  if (node_cap >= 0) cfg.node_cap = node_cap;
  cfg.parallel_roots = parallel;
  cfg.enable_D_search = !no_big_d;

  try {
    std::unique_ptr<ResultStore> store;
    if (gopt.store_path) store = std::make_unique<ResultStore>(*gopt.store_path);
    if (c_d->parsed()) return cmd_compute_d(gopt, store.get(), group_id, cfg);
    if (c_big->parsed())
      return cmd_compute_big_d(gopt, store.get(), group_id, cfg);
    if (c_con->parsed()) return cmd_construct(gopt, group_id);
    if (c_chk->parsed())
      return cmd_check_bounds(gopt, store.get(), group_ids, order_range, cfg);
    if (c_lem->parsed())
      return cmd_verify_lemmas(gopt, lemmas, spec, workers, replay_literal,
                               replay_group);
    if (c_pi->parsed()) return cmd_pi(gopt, group_id, literal);
  } catch (const davenport::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
