#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "davenport/davenport.hpp"
#include "davenport/lemmas.hpp"

namespace davenport {

inline constexpr const char* kToolVersion = "0.1.0";

// One published result row.  Field names below are the report schema; absent
// values serialize as null.
struct RunRecord {
  std::string group_id;
  int n = 0;
  std::optional<int> p;
  std::optional<int> d;
  std::optional<std::string> d_status;  // "exact" / "lower_bound_only"
  std::optional<int> D;
  std::optional<int> construction_length;
  std::optional<int> theorem_bound;
  std::optional<int> conjecture_bound;
  std::optional<int> ow_bound;
  std::optional<int> gryn_bound;
  std::vector<std::pair<std::string, std::string>> flags;  // name -> verdict
  long long nodes_expanded = 0;
  long long elapsed_ms = 0;
};

RunRecord to_run_record(const BoundsReport& b);

nlohmann::json record_to_json(const RunRecord& r);
nlohmann::json lemma_report_to_json(const LemmaReport& r);

// The full report document: results array, lemma array, seed, tool_version,
// and the single timestamp field generated_at.
nlohmann::json report_document(const std::vector<RunRecord>& records,
                               const std::vector<LemmaReport>& lemmas,
                               uint64_t seed);

// Writes the document, creating parent directories.  Error(IoError).
void write_report(const std::string& path, const nlohmann::json& doc);

// Document with the volatile fields (generated_at, elapsed_ms) masked, for
// byte-identity comparisons across reruns.
std::string canonical_report_string(nlohmann::json doc);

// Checks that the document carries exactly the published fields (no
// extraneous ones) with the right shapes.
bool validate_report_schema(const nlohmann::json& doc, std::string* why = nullptr);

// File-backed map (group, computation kind, config digest) -> result record,
// guarded by an advisory lock file `<path>.lock` for the store's lifetime.
// A held lock raises Error(StoreLocked) instead of waiting.
class ResultStore {
 public:
  explicit ResultStore(std::string path);
  ~ResultStore();
  ResultStore(const ResultStore&) = delete;
  ResultStore& operator=(const ResultStore&) = delete;

  std::optional<nlohmann::json> get(const std::string& group_id,
                                    const std::string& kind,
                                    uint64_t config_digest) const;
  void put(const std::string& group_id, const std::string& kind,
           uint64_t config_digest, const nlohmann::json& value);

  // FNV-1a over a canonical config string.
  static uint64_t config_digest(const std::string& canonical_config);
  // Canonical config string for a search invocation (excludes parallel_roots:
  // results are schedule-independent by contract).
  static std::string canonical_search_config(const std::string& kind,
                                             const SearchConfig& cfg);

  const std::string& path() const { return path_; }

 private:
  void save() const;
  std::string path_;
  std::string lock_path_;
  int lock_fd_ = -1;
  nlohmann::json data_;
};

}  // namespace davenport
