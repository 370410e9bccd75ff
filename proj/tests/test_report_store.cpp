#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "davenport/davenport.hpp"
#include "davenport/group.hpp"
#include "davenport/report.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace davenport;
using nlohmann::json;
using testutil::error_code_of;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

BoundsReport d6_bounds() {
  FiniteGroup d6 = make_dihedral(3);
  return check_bounds(d6, "D6", small_davenport(d6), large_davenport(d6));
}

LemmaReport sample_lemma_report() {
  LemmaReport rep;
  rep.lemma = "2.4";
  rep.instances_run = 5;
  rep.seed = 9;
  rep.violations.push_back({"C6", "S=[1,1]"});
  rep.elapsed = std::chrono::microseconds(1500);
  return rep;
}

json sample_document() {
  std::vector<RunRecord> records;
  records.push_back(to_run_record(d6_bounds()));
  FiniteGroup c1 = make_cyclic(1);
  records.push_back(to_run_record(
      check_bounds(c1, "C1", small_davenport(c1), large_davenport(c1))));
  return report_document(records, {sample_lemma_report()}, 20260825);
}

}  // namespace

TEST_CASE("run records carry the schema fields in order") {
  RunRecord r = to_run_record(d6_bounds());
  CHECK(r.group_id == "D6");
  CHECK(r.n == 6);
  CHECK(r.p == 2);
  CHECK(r.d == 3);
  CHECK(r.d_status == std::string("exact"));
  CHECK(r.D == 6);
  CHECK(r.construction_length == 3);
  CHECK(r.theorem_bound == 19);
  CHECK(r.conjecture_bound == 3);
  CHECK(r.ow_bound == 3);
  CHECK(r.gryn_bound == 6);

  const std::vector<std::string> names = {
      "chain_lower", "chain_upper", "abelian_equality", "cyclic_large",
      "ow",          "gryn",        "theorem",          "construction",
      "conjecture"};
  REQUIRE(r.flags.size() == names.size());
  for (size_t i = 0; i < names.size(); ++i) CHECK(r.flags[i].first == names[i]);
  CHECK(r.flags[0].second == "pass");
  CHECK(r.flags[2].second == "n/a");  // abelian_equality on D6
  CHECK(r.flags[8].second == "pass");
}

TEST_CASE("record json shape") {
  json j = record_to_json(to_run_record(d6_bounds()));
  CHECK(j.size() == 14);
  CHECK(j["group_id"] == "D6");
  CHECK(j["d"] == 3);
  CHECK(j["d_status"] == "exact");
  CHECK(j["ow_bound"] == 3);
  CHECK(j["flags"].size() == 9);
  CHECK(j["flags"]["gryn"] == "pass");
  CHECK(j["flags"]["cyclic_large"] == "n/a");

  FiniteGroup c1 = make_cyclic(1);
  json t = record_to_json(to_run_record(
      check_bounds(c1, "C1", small_davenport(c1), large_davenport(c1))));
  CHECK(t["p"].is_null());
  CHECK(t["theorem_bound"].is_null());
  CHECK(t["d"] == 0);
  CHECK(t["D"] == 1);
  CHECK(t["construction_length"].is_null());
}

TEST_CASE("lemma report json") {
  json j = lemma_report_to_json(sample_lemma_report());
  CHECK(j.size() == 5);
  CHECK(j["lemma"] == "2.4");
  CHECK(j["instances_run"] == 5);
  CHECK(j["seed"] == 9);
  CHECK(j["elapsed_ms"] == 1);
  REQUIRE(j["violations"].size() == 1);
  CHECK(j["violations"][0]["group"] == "C6");
  CHECK(j["violations"][0]["instance"] == "S=[1,1]");
}

TEST_CASE("document assembly and schema validation") {
  json doc = sample_document();
  CHECK(doc["tool_version"] == kToolVersion);
  CHECK(doc["seed"] == 20260825);
  CHECK(doc["results"].size() == 2);
  CHECK(doc["lemmas"].size() == 1);

  std::string ts = doc["generated_at"].get<std::string>();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts[19] == 'Z');

  std::string why;
  CHECK(validate_report_schema(doc, &why));

  json bad = doc;
  bad.erase("seed");
  CHECK_FALSE(validate_report_schema(bad, &why));
  CHECK(why == "missing top-level field seed");

  bad = doc;
  bad["extra"] = 1;
  CHECK_FALSE(validate_report_schema(bad, &why));

  bad = doc;
  bad["results"][0]["flags"]["ow"] = "maybe";
  CHECK_FALSE(validate_report_schema(bad, &why));

  bad = doc;
  bad["results"][0].erase("gryn_bound");
  CHECK_FALSE(validate_report_schema(bad, &why));

  bad = doc;
  bad["results"][0]["d_status"] = "sometimes";
  CHECK_FALSE(validate_report_schema(bad, &why));

  bad = doc;
  bad["results"][0]["bonus"] = true;
  CHECK_FALSE(validate_report_schema(bad, &why));

  bad = doc;
  bad["lemmas"][0]["violations"] = 3;
  CHECK_FALSE(validate_report_schema(bad, &why));

  CHECK_FALSE(validate_report_schema(json::array(), &why));
}

TEST_CASE("canonical string masks only volatile fields") {
  json doc = sample_document();
  json other = doc;
  other["generated_at"] = "2000-01-01T00:00:00Z";
  other["results"][0]["elapsed_ms"] = 987654;
  other["lemmas"][0]["elapsed_ms"] = 42;
  CHECK(canonical_report_string(doc) == canonical_report_string(other));

  other["results"][0]["d"] = 99;
  CHECK(canonical_report_string(doc) != canonical_report_string(other));
}

TEST_CASE("report writing round trip") {
  TempDir dir("davenport-test-report");
  std::string path = (dir.path / "nested" / "out" / "report.json").string();
  json doc = sample_document();
  write_report(path, doc);

  std::ifstream f(path);
  REQUIRE(f.good());
  json back;
  f >> back;
  CHECK(back == doc);
  CHECK(validate_report_schema(back));
}

TEST_CASE("result store") {
  TempDir dir("davenport-test-store");
  std::string path = (dir.path / "store.json").string();

  SearchConfig cfg;
  uint64_t digest =
      ResultStore::config_digest(ResultStore::canonical_search_config("d", cfg));

  {
    ResultStore store(path);
    CHECK_FALSE(store.get("C8", "d", digest).has_value());
    store.put("C8", "d", digest, json{{"value", 7}});
    auto hit = store.get("C8", "d", digest);
    REQUIRE(hit.has_value());
    CHECK((*hit)["value"] == 7);

    // Lock is held for the store's lifetime.
    CHECK(error_code_of([&] { ResultStore second(path); }) ==
          ErrorCode::StoreLocked);

    // Other kinds and groups are distinct keys.
    CHECK_FALSE(store.get("C8", "D", digest).has_value());
    CHECK_FALSE(store.get("C9", "d", digest).has_value());
  }

  {
    ResultStore reopened(path);
    auto hit = reopened.get("C8", "d", digest);
    REQUIRE(hit.has_value());
    CHECK((*hit)["value"] == 7);
  }
}

TEST_CASE("config digests track the value-relevant knobs") {
  SearchConfig base;
  std::string canon = ResultStore::canonical_search_config("d", base);
  CHECK(canon ==
        "kind=d;max_length=none;node_cap=none;D_order_cap=10;"
        "enable_D_search=1");

  SearchConfig capped = base;
  capped.node_cap = 5;
  CHECK(ResultStore::canonical_search_config("d", capped) != canon);

  SearchConfig shorter = base;
  shorter.max_length = 4;
  CHECK(ResultStore::canonical_search_config("d", shorter) != canon);

  // parallel_roots cannot change results, so it is not part of the key.
  SearchConfig parallel = base;
  parallel.parallel_roots = true;
  CHECK(ResultStore::canonical_search_config("d", parallel) == canon);

  CHECK(ResultStore::canonical_search_config("D", base) != canon);
  CHECK(ResultStore::config_digest(canon) ==
        ResultStore::config_digest(std::string(canon)));
  CHECK(ResultStore::config_digest(canon) != ResultStore::config_digest("x"));
}

TEST_CASE("corrupt stores fail cleanly and release the lock") {
  TempDir dir("davenport-test-store-corrupt");
  std::string path = (dir.path / "store.json").string();
  {
    std::ofstream f(path);
    f << "this is not json{{{";
  }
  CHECK(error_code_of([&] { ResultStore s(path); }) == ErrorCode::IoError);
  // Same error again (not StoreLocked): the failed open released the lock.
  CHECK(error_code_of([&] { ResultStore s(path); }) == ErrorCode::IoError);

  {
    std::ofstream f(path);
    f << "{}";
  }
  ResultStore ok(path);
  CHECK_FALSE(ok.get("C8", "d", 0).has_value());
}
