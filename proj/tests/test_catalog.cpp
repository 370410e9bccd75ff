#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "davenport/catalog.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace davenport;
using testutil::error_code_of;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("builtin catalog") {
  Catalog cat = load_catalog();
  CHECK(cat.entries.size() == 39);
  CHECK(cat.warnings.empty());

  // Sorted by (order, id), unique ids.
  for (size_t i = 1; i < cat.entries.size(); ++i) {
    const auto& a = cat.entries[i - 1];
    const auto& b = cat.entries[i];
    CHECK(std::make_pair(a.order, a.id) < std::make_pair(b.order, b.id));
  }
  CHECK(cat.entries[0].id == "C2");
  CHECK(cat.entries[1].id == "C3");
  CHECK(cat.entries[2].id == "C2xC2");
  CHECK(cat.entries[3].id == "C4");
  CHECK(cat.entries[4].id == "D4");

  const GroupCatalogEntry* d6 = cat.find("D6");
  REQUIRE(d6 != nullptr);
  CHECK(d6->order == 6);
  CHECK(d6->source == "builtin");
  FiniteGroup g = d6->build();
  CHECK(g.order() == 6);
  CHECK_FALSE(g.abelian());

  // Alias: S3 resolves to the same entry.
  const GroupCatalogEntry* s3 = cat.find("S3");
  REQUIRE(s3 != nullptr);
  CHECK(s3->id == "D6");
  CHECK(&cat.require("S3") == s3);

  CHECK(cat.find("E8") == nullptr);
  CHECK(error_code_of([&] { cat.require("E8"); }) == ErrorCode::UnknownGroup);

  auto built = cat.build_in_order_range(4, 8);
  CHECK(built.size() == 12);
  for (const auto& [id, grp] : built) {
    CHECK(grp.order() >= 4);
    CHECK(grp.order() <= 8);
  }
}

TEST_CASE("catalog directory ingestion") {
  TempDir dir("davenport-test-catalog");
  // A C3 table with the identity at index 2, comments, and comma separators.
  write_file(dir.path / "K9.tbl",
             "# identity sits at index 2\n"
             "n 3\n"
             "table\n"
             "1, 2, 0\n"
             "2, 0, 1\n"
             "0, 1, 2\n");
  // {e, a} with a*a = a: fails inverse validation.
  write_file(dir.path / "bad.tbl", "n 2\ntable\n0 1\n1 1\n");
  // Valid table whose id collides with a builtin.
  write_file(dir.path / "C6.tbl", "n 1\ntable\n0\n");

  Catalog cat = load_catalog({}, dir.path.string());
  CHECK(cat.entries.size() == 40);
  REQUIRE(cat.warnings.size() == 2);
  // Files are ingested in sorted path order: C6.tbl, K9.tbl, bad.tbl.
  CHECK(cat.warnings[0].path == (dir.path / "C6.tbl").string());
  CHECK(cat.warnings[0].message ==
        "duplicate group id 'C6', keeping the earlier entry");
  CHECK(cat.warnings[1].path == (dir.path / "bad.tbl").string());

  const GroupCatalogEntry& k9 = cat.require("K9");
  CHECK(k9.order == 3);
  CHECK(k9.source == (dir.path / "K9.tbl").string());
  FiniteGroup g = k9.build();
  CHECK(g.cyclic());
  CHECK(g.mul(0, 1) == 1);   // identity re-indexed to 0
  CHECK(g.mul(1, 1) == 2);

  // The builtin entry wins the collision.
  CHECK(cat.require("C6").source == "builtin");
  CHECK(cat.require("C6").order == 6);

  Catalog missing = load_catalog({}, (dir.path / "absent").string());
  CHECK(missing.entries.size() == 39);
  REQUIRE(missing.warnings.size() == 1);
  CHECK(missing.warnings[0].message.find("cannot read directory") == 0);
}

TEST_CASE("cayley table parsing") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_cayley_table(in);
  };

  FiniteGroup c3 = parse("# comment line\nn 3\ntable\n1, 2, 0\n2, 0, 1\n0, 1, 2\n");
  CHECK(c3.order() == 3);
  CHECK(c3.cyclic());

  for (const char* bad :
       {"", "n 2", "n 2\ntable\n0 1\n1", "n 2\ntable\n0 1\n1 0\n7",
        "table 0", "n -1\ntable\n", "n 0\ntable\n", "n two\ntable\n0",
        "n 1200\ntable\n0", "n 1\ntable\n0000000\n"}) {
    CAPTURE(bad);
    CHECK(error_code_of([&] { parse(bad); }) == ErrorCode::ParseError);
  }

  // Structurally fine, mathematically not a group.
  CHECK(error_code_of([&] {
          parse("n 3\ntable\n0 1 2\n1 0 1\n2 1 0\n");
        }) == ErrorCode::NotAssociative);
  CHECK(error_code_of([&] { parse("n 2\ntable\n0 1\n1 1\n"); }) ==
        ErrorCode::NoInverse);

  CHECK(error_code_of([] { load_cayley_table_file("/nonexistent/x.tbl"); }) ==
        ErrorCode::IoError);
}

TEST_CASE("catalog directory environment variable") {
  unsetenv("DAVENPORT_CATALOG_DIR");
  CHECK_FALSE(default_catalog_dir().has_value());
  setenv("DAVENPORT_CATALOG_DIR", "", 1);
  CHECK_FALSE(default_catalog_dir().has_value());
  setenv("DAVENPORT_CATALOG_DIR", "/tmp/somewhere", 1);
  CHECK(default_catalog_dir() == std::string("/tmp/somewhere"));
  unsetenv("DAVENPORT_CATALOG_DIR");
}
