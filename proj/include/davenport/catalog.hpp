#pragma once

#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "davenport/group.hpp"

namespace davenport {

struct IntRange {
  int lo = 0, hi = -1;  // inclusive; hi < lo means empty
  bool empty() const { return hi < lo; }
};

// Parameter ranges for the built-in families.  Dihedral/dicyclic ranges are
// over the parameter m (orders 2m and 4m).
struct BuiltinFamilies {
  IntRange cyclic{2, 16};
  IntRange dihedral{2, 12};
  IntRange dicyclic{2, 6};
  // Direct products of cyclic factors, e.g. {2,2} -> C2xC2.
  std::vector<std::vector<int>> direct_products = {
      {2, 2}, {2, 4}, {2, 6}, {2, 8}, {3, 3}, {2, 2, 2}, {4, 4}, {3, 6}};
};

struct GroupCatalogEntry {
  std::string id;
  int order = 0;
  std::string source;  // "builtin" or the table file path
  std::function<FiniteGroup()> build;
};

struct CatalogWarning {
  std::string path;
  std::string message;
};

struct Catalog {
  std::vector<GroupCatalogEntry> entries;   // unique ids, sorted (order, id)
  std::vector<CatalogWarning> warnings;     // invalid table files, skipped

  // Resolves an id (including aliases such as S3 -> D6); nullptr if absent.
  const GroupCatalogEntry* find(const std::string& id) const;
  // Same but throws Error(UnknownGroup).
  const GroupCatalogEntry& require(const std::string& id) const;

  // Entries with lo <= order <= hi, built, as (id, group) pairs.
  std::vector<std::pair<std::string, FiniteGroup>> build_in_order_range(
      int lo, int hi) const;
};

// Expands the built-in families and, when a directory is given, ingests every
// regular file in it as a Cayley-table file (file stem = group id).  Files
// that fail validation become warnings, not errors.
Catalog load_catalog(const BuiltinFamilies& families = {},
                     const std::optional<std::string>& table_dir = std::nullopt);

// DAVENPORT_CATALOG_DIR, if set and non-empty.
std::optional<std::string> default_catalog_dir();

// Cayley-table file: '#' comments; field `n` followed by the order; field
// `table` followed by n*n element indices (whitespace- or comma-separated).
// The table is validated and the identity re-indexed to 0.
FiniteGroup parse_cayley_table(std::istream& in);
FiniteGroup load_cayley_table_file(const std::string& path);

}  // namespace davenport
