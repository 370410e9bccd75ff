#include "davenport/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace davenport {

namespace {

std::string product_id(const std::vector<int>& factors) {
  std::string id;
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) id += 'x';
    id += 'C' + std::to_string(factors[i]);
  }
  return id;
}

FiniteGroup build_product(const std::vector<int>& factors) {
  FiniteGroup acc = make_cyclic(factors.at(0));
  for (size_t i = 1; i < factors.size(); ++i)
    acc = direct_product(acc, make_cyclic(factors[i]));
  return acc;
}

std::string resolve_alias(const std::string& id) {
  if (id == "S3") return "D6";  // same table, common name
  return id;
}

}  // namespace

const GroupCatalogEntry* Catalog::find(const std::string& id) const {
  std::string key = resolve_alias(id);
  for (const auto& e : entries)
    if (e.id == key) return &e;
  return nullptr;
}

const GroupCatalogEntry& Catalog::require(const std::string& id) const {
  const GroupCatalogEntry* e = find(id);
  if (!e)
    throw Error(ErrorCode::UnknownGroup, "unknown group id '" + id + "'");
  return *e;
}

std::vector<std::pair<std::string, FiniteGroup>> Catalog::build_in_order_range(
    int lo, int hi) const {
  std::vector<std::pair<std::string, FiniteGroup>> out;
  for (const auto& e : entries)
    if (e.order >= lo && e.order <= hi) out.emplace_back(e.id, e.build());
  return out;
}

Catalog load_catalog(const BuiltinFamilies& families,
                     const std::optional<std::string>& table_dir) {
  Catalog cat;
  auto has_id = [&](const std::string& id) {
    for (const auto& e : cat.entries)
      if (e.id == id) return true;
    return false;
  };
  auto add = [&](std::string id, int order, std::string source,
                 std::function<FiniteGroup()> build) {
    if (has_id(id)) return false;
    cat.entries.push_back({std::move(id), order, std::move(source),
                           std::move(build)});
    return true;
  };

  if (!families.cyclic.empty())
    for (int n = std::max(1, families.cyclic.lo); n <= families.cyclic.hi; ++n)
      add("C" + std::to_string(n), n, "builtin",
          [n] { return make_cyclic(n); });
  if (!families.dihedral.empty())
    for (int m = std::max(1, families.dihedral.lo); m <= families.dihedral.hi;
         ++m)
      add("D" + std::to_string(2 * m), 2 * m, "builtin",
          [m] { return make_dihedral(m); });
  if (!families.dicyclic.empty())
    for (int m = std::max(1, families.dicyclic.lo); m <= families.dicyclic.hi;
         ++m)
      add("Q" + std::to_string(4 * m), 4 * m, "builtin",
          [m] { return make_dicyclic(m); });
  for (const auto& factors : families.direct_products) {
    if (factors.empty()) continue;
    int order = 1;
    for (int f : factors) order *= f;
    add(product_id(factors), order, "builtin",
        [factors] { return build_product(factors); });
  }

  if (table_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    std::vector<fs::path> paths;
    for (const auto& ent : fs::directory_iterator(*table_dir, ec))
      if (ent.is_regular_file()) paths.push_back(ent.path());
    if (ec) {
      cat.warnings.push_back(
          {*table_dir, "cannot read directory: " + ec.message()});
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) {
      std::string id = p.stem().string();
      try {
        FiniteGroup g = load_cayley_table_file(p.string());
        if (!add(id, g.order(), p.string(),
                 [path = p.string()] { return load_cayley_table_file(path); }))
          cat.warnings.push_back(
              {p.string(),
               "duplicate group id '" + id + "', keeping the earlier entry"});
      } catch (const std::exception& err) {
        cat.warnings.push_back({p.string(), err.what()});
      }
    }
  }

  std::sort(cat.entries.begin(), cat.entries.end(),
            [](const GroupCatalogEntry& a, const GroupCatalogEntry& b) {
              return a.order != b.order ? a.order < b.order : a.id < b.id;
            });
  return cat;
}

std::optional<std::string> default_catalog_dir() {
  const char* v = std::getenv("DAVENPORT_CATALOG_DIR");
  if (v && *v) return std::string(v);
  return std::nullopt;
}

FiniteGroup parse_cayley_table(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }

  size_t i = 0;
  auto next = [&]() -> const std::string& {
    if (i >= tokens.size())
      throw Error(ErrorCode::ParseError, "unexpected end of table file");
    return tokens[i++];
  };
  auto next_int = [&]() -> int {
    const std::string& t = next();
    if (t.empty() || t.size() > 6 ||
        t.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCode::ParseError,
                  "expected a number in table file, got '" + t + "'");
    return std::stoi(t);
  };

  if (next() != "n")
    throw Error(ErrorCode::ParseError, "table file must start with field 'n'");
  int n = next_int();
  if (n < 1 || n > 1024)
    throw Error(ErrorCode::ParseError,
                "group order " + std::to_string(n) + " out of range [1,1024]");
  if (next() != "table")
    throw Error(ErrorCode::ParseError, "expected field 'table'");
  std::vector<std::vector<int>> rows(static_cast<size_t>(n),
                                     std::vector<int>(static_cast<size_t>(n)));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) rows[static_cast<size_t>(r)][static_cast<size_t>(c)] = next_int();
  if (i != tokens.size())
    throw Error(ErrorCode::ParseError, "trailing tokens in table file");
  return from_cayley_table(rows);
}

FiniteGroup load_cayley_table_file(const std::string& path) {
  std::ifstream f(path);
  if (!f)
    throw Error(ErrorCode::IoError, "cannot open table file '" + path + "'");
  return parse_cayley_table(f);
}

}  // namespace davenport
