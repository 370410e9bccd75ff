#include "davenport/report.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace davenport {

namespace {

using nlohmann::json;

json opt_to_json(const std::optional<int>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string status_name(SearchStatus s) {
  return s == SearchStatus::exact ? "exact" : "lower_bound_only";
}

std::string iso_utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* const kFlagNames[] = {
    "chain_lower", "chain_upper", "abelian_equality", "cyclic_large",
    "ow",          "gryn",        "theorem",          "construction",
    "conjecture"};

bool is_int(const json& v) { return v.is_number_integer(); }
bool is_int_or_null(const json& v) { return v.is_null() || v.is_number_integer(); }

bool fail(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

}  // namespace

RunRecord to_run_record(const BoundsReport& b) {
  RunRecord r;
  r.group_id = b.group_id;
  r.n = b.n;
  r.p = b.p;
  r.d = b.d;
  if (b.d_status) r.d_status = status_name(*b.d_status);
  r.D = b.D;
  r.construction_length = b.construction_length;
  r.theorem_bound = b.theorem_bound;
  r.conjecture_bound = b.conjecture_bound;
  r.ow_bound = b.ow_bound;
  r.gryn_bound = b.gryn_bound;
  const BoundFlag values[] = {
      b.flags.chain_lower, b.flags.chain_upper, b.flags.abelian_equality,
      b.flags.cyclic_large, b.flags.ow,         b.flags.gryn,
      b.flags.theorem,      b.flags.construction, b.flags.conjecture};
  for (size_t i = 0; i < std::size(kFlagNames); ++i)
    r.flags.emplace_back(kFlagNames[i], bound_flag_name(values[i]));
  r.nodes_expanded = b.nodes_expanded;
  r.elapsed_ms = b.elapsed_ms;
  return r;
}

json record_to_json(const RunRecord& r) {
  json flags = json::object();
  for (const auto& [name, verdict] : r.flags) flags[name] = verdict;
  return json{{"group_id", r.group_id},
              {"n", r.n},
              {"p", opt_to_json(r.p)},
              {"d", opt_to_json(r.d)},
              {"d_status", r.d_status ? json(*r.d_status) : json(nullptr)},
              {"D", opt_to_json(r.D)},
              {"construction_length", opt_to_json(r.construction_length)},
              {"theorem_bound", opt_to_json(r.theorem_bound)},
              {"conjecture_bound", opt_to_json(r.conjecture_bound)},
              {"ow_bound", opt_to_json(r.ow_bound)},
              {"gryn_bound", opt_to_json(r.gryn_bound)},
              {"flags", flags},
              {"nodes_expanded", r.nodes_expanded},
              {"elapsed_ms", r.elapsed_ms}};
}

json lemma_report_to_json(const LemmaReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"group", v.group_id}, {"instance", v.instance}});
  return json{{"lemma", r.lemma},
              {"instances_run", r.instances_run},
              {"seed", r.seed},
              {"violations", violations},
              {"elapsed_ms",
               std::chrono::duration_cast<std::chrono::milliseconds>(r.elapsed)
                   .count()}};
}

json report_document(const std::vector<RunRecord>& records,
                     const std::vector<LemmaReport>& lemmas, uint64_t seed) {
  json results = json::array();
  for (const auto& r : records) results.push_back(record_to_json(r));
  json lem = json::array();
  for (const auto& l : lemmas) lem.push_back(lemma_report_to_json(l));
  return json{{"generated_at", iso_utc_now()},
              {"tool_version", kToolVersion},
              {"seed", seed},
              {"results", results},
              {"lemmas", lem}};
}

void write_report(const std::string& path, const json& doc) {
  std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path())
    std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream f(path);
  if (!f)
    throw Error(ErrorCode::IoError, "cannot write report to '" + path + "'");
  f << doc.dump(2) << '\n';
  if (!f)
    throw Error(ErrorCode::IoError, "short write to '" + path + "'");
}

std::string canonical_report_string(json doc) {
  if (doc.contains("generated_at")) doc["generated_at"] = "MASKED";
  if (doc.contains("results"))
    for (auto& r : doc["results"])
      if (r.contains("elapsed_ms")) r["elapsed_ms"] = 0;
  if (doc.contains("lemmas"))
    for (auto& l : doc["lemmas"])
      if (l.contains("elapsed_ms")) l["elapsed_ms"] = 0;
  return doc.dump();
}

bool validate_report_schema(const json& doc, std::string* why) {
  if (!doc.is_object()) return fail(why, "document is not an object");
  const std::vector<std::string> top = {"generated_at", "tool_version", "seed",
                                        "results", "lemmas"};
  for (const auto& k : top)
    if (!doc.contains(k)) return fail(why, "missing top-level field " + k);
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (std::find(top.begin(), top.end(), it.key()) == top.end())
      return fail(why, "unexpected top-level field " + it.key());
  if (!doc["generated_at"].is_string()) return fail(why, "generated_at type");
  if (!doc["tool_version"].is_string()) return fail(why, "tool_version type");
  if (!doc["seed"].is_number_integer() && !doc["seed"].is_number_unsigned())
    return fail(why, "seed type");
  if (!doc["results"].is_array()) return fail(why, "results type");
  if (!doc["lemmas"].is_array()) return fail(why, "lemmas type");

  const std::vector<std::string> rec_keys = {
      "group_id", "n", "p", "d", "d_status", "D", "construction_length",
      "theorem_bound", "conjecture_bound", "ow_bound", "gryn_bound", "flags",
      "nodes_expanded", "elapsed_ms"};
  for (const auto& r : doc["results"]) {
    if (!r.is_object()) return fail(why, "result is not an object");
    for (const auto& k : rec_keys)
      if (!r.contains(k)) return fail(why, "result missing field " + k);
    for (auto it = r.begin(); it != r.end(); ++it)
      if (std::find(rec_keys.begin(), rec_keys.end(), it.key()) ==
          rec_keys.end())
        return fail(why, "result has unexpected field " + it.key());
    if (!r["group_id"].is_string()) return fail(why, "group_id type");
    for (const char* k : {"n", "nodes_expanded", "elapsed_ms"})
      if (!is_int(r[k])) return fail(why, std::string(k) + " type");
    for (const char* k : {"p", "d", "D", "construction_length",
                          "theorem_bound", "conjecture_bound", "ow_bound",
                          "gryn_bound"})
      if (!is_int_or_null(r[k])) return fail(why, std::string(k) + " type");
    const json& st = r["d_status"];
    if (!(st.is_null() || (st.is_string() &&
                           (st == "exact" || st == "lower_bound_only"))))
      return fail(why, "d_status value");
    const json& flags = r["flags"];
    if (!flags.is_object()) return fail(why, "flags type");
    for (const char* k : kFlagNames)
      if (!flags.contains(k)) return fail(why, std::string("flags missing ") + k);
    if (flags.size() != std::size(kFlagNames))
      return fail(why, "flags has unexpected fields");
    for (const auto& [k, v] : flags.items()) {
      if (!v.is_string()) return fail(why, "flag " + k + " type");
      std::string s = v.get<std::string>();
      if (s != "pass" && s != "fail" && s != "n/a" &&
          s != "VIOLATION-REPORTED")
        return fail(why, "flag " + k + " value '" + s + "'");
    }
  }

  const std::vector<std::string> lem_keys = {"lemma", "instances_run", "seed",
                                             "violations", "elapsed_ms"};
  for (const auto& l : doc["lemmas"]) {
    if (!l.is_object()) return fail(why, "lemma entry is not an object");
    for (const auto& k : lem_keys)
      if (!l.contains(k)) return fail(why, "lemma entry missing field " + k);
    for (auto it = l.begin(); it != l.end(); ++it)
      if (std::find(lem_keys.begin(), lem_keys.end(), it.key()) ==
          lem_keys.end())
        return fail(why, "lemma entry has unexpected field " + it.key());
    if (!l["lemma"].is_string()) return fail(why, "lemma id type");
    if (!is_int(l["instances_run"])) return fail(why, "instances_run type");
    if (!l["seed"].is_number_integer() && !l["seed"].is_number_unsigned())
      return fail(why, "lemma seed type");
    if (!is_int(l["elapsed_ms"])) return fail(why, "lemma elapsed_ms type");
    if (!l["violations"].is_array()) return fail(why, "violations type");
    for (const auto& v : l["violations"]) {
      if (!v.is_object() || v.size() != 2 || !v.contains("group") ||
          !v.contains("instance") || !v["group"].is_string() ||
          !v["instance"].is_string())
        return fail(why, "violation entry shape");
    }
  }
  return true;
}

ResultStore::ResultStore(std::string path)
    : path_(std::move(path)), lock_path_(path_ + ".lock") {
  lock_fd_ = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (lock_fd_ < 0) {
    if (errno == EEXIST)
      throw Error(ErrorCode::StoreLocked,
                  "result store '" + path_ + "' is locked (" + lock_path_ +
                      " exists)");
    throw Error(ErrorCode::IoError, "cannot create lock file '" + lock_path_ +
                                        "': " + std::strerror(errno));
  }
  if (std::filesystem::exists(path_)) {
    std::ifstream f(path_);
    if (!f) {
      ::close(lock_fd_);
      ::unlink(lock_path_.c_str());
      throw Error(ErrorCode::IoError, "cannot read store '" + path_ + "'");
    }
    try {
      f >> data_;
    } catch (const std::exception& e) {
      ::close(lock_fd_);
      ::unlink(lock_path_.c_str());
      throw Error(ErrorCode::IoError,
                  "corrupt store '" + path_ + "': " + e.what());
    }
  }
  if (!data_.is_object()) data_ = json::object();
}

ResultStore::~ResultStore() {
  if (lock_fd_ >= 0) {
    ::close(lock_fd_);
    ::unlink(lock_path_.c_str());
  }
}

namespace {
std::string store_key(const std::string& group_id, const std::string& kind,
                      uint64_t digest) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(digest));
  return group_id + "|" + kind + "|" + hex;
}
}  // namespace

std::optional<json> ResultStore::get(const std::string& group_id,
                                     const std::string& kind,
                                     uint64_t config_digest) const {
  auto it = data_.find(store_key(group_id, kind, config_digest));
  if (it == data_.end()) return std::nullopt;
  return *it;
}

void ResultStore::put(const std::string& group_id, const std::string& kind,
                      uint64_t config_digest, const json& value) {
  data_[store_key(group_id, kind, config_digest)] = value;
  save();
}

void ResultStore::save() const {
  std::string tmp = path_ + ".tmp";
  {
    std::ofstream f(tmp);
    if (!f)
      throw Error(ErrorCode::IoError, "cannot write store '" + tmp + "'");
    f << data_.dump(2) << '\n';
    if (!f)
      throw Error(ErrorCode::IoError, "short write to store '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path_, ec);
  if (ec)
    throw Error(ErrorCode::IoError,
                "cannot replace store '" + path_ + "': " + ec.message());
}

uint64_t ResultStore::config_digest(const std::string& canonical_config) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_config) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string ResultStore::canonical_search_config(const std::string& kind,
                                                 const SearchConfig& cfg) {
  auto opt_str = [](const auto& v) {
    return v ? std::to_string(*v) : std::string("none");
  };
  return "kind=" + kind + ";max_length=" + opt_str(cfg.max_length) +
         ";node_cap=" + opt_str(cfg.node_cap) +
         ";D_order_cap=" + std::to_string(cfg.D_order_cap) +
         ";enable_D_search=" + (cfg.enable_D_search ? "1" : "0");
}

}  // namespace davenport
