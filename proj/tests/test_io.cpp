#include "doctest.h"

#include <commonlines/io.hpp>
#include <commonlines/random.hpp>
#include <commonlines/synth.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

using namespace clines;

TEST_CASE("format_double round-trips every finite double") {
  Rng rng(3);
  for (int t = 0; t < 20000; ++t) {
    std::uint64_t bits = rng();
    double x;
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x) || x == 0.0)
      continue;
    double y = io::parse_double(io::format_double(x));
    CHECK(std::memcmp(&x, &y, sizeof x) == 0);
  }
  // Negative zero is written as 0 so that output is canonical.
  CHECK(io::format_double(-0.0) == "0");
  for (double x : {0.0, 1.0, 0.1, -1e-300, std::numeric_limits<double>::denorm_min(),
                   std::numeric_limits<double>::max()}) {
    double y = io::parse_double(io::format_double(x));
    CHECK(std::memcmp(&x, &y, sizeof x) == 0);
  }
  CHECK_THROWS_AS(io::parse_double("1.5x"), io::SchemaError);
  CHECK_THROWS_AS(io::parse_double("nan"), io::SchemaError);
  CHECK_THROWS_AS(io::parse_int("2.5"), io::SchemaError);
}

TEST_CASE("documents round-trip through text") {
  io::Document d;
  d.set("version", "1");
  d.set("kind", "report");
  d.set("note", "a b  c");
  d.has_data = true;
  d.rows = {"1 2 3", "x y"};
  io::Document e = io::parse(io::serialize(d));
  CHECK(e.header == d.header);
  CHECK(e.rows == d.rows);
  CHECK(e.has_data);
  CHECK(io::serialize(e) == io::serialize(d));
  CHECK_THROWS_AS(e.get("missing"), io::SchemaError);
  CHECK_THROWS_AS(io::parse("version: 1\nversion: 1\n"), io::SchemaError);
  CHECK_THROWS_AS(io::parse("no separator here\n"), io::SchemaError);
}

TEST_CASE("typed files round-trip exactly") {
  CommonLinesMatrix a = pure_common_lines(random_rotations(6, 1));
  io::MatrixFile mf = io::matrix_from_document(io::parse(io::serialize(io::matrix_document(a, "pure"))));
  CHECK(mf.matrix == a);
  CHECK(mf.kind == "pure");

  RotationSet r = random_rotations(4, 2);
  RotationSet r2 = io::rotations_from_document(io::parse(io::serialize(io::rotations_document(r))));
  REQUIRE(r2.size() == 4);
  for (int i = 0; i < 4; ++i)
    CHECK(r2[i].matrix() == r[i].matrix());

  Partition p({0, 1, 1, 2, 0});
  CHECK(io::partition_from_document(io::parse(io::serialize(io::partition_document(p)))).labels() ==
        p.labels());

  ScaleMatrix l = random_scales(a, 3).second;
  CHECK(io::scales_from_document(io::parse(io::serialize(io::scales_document(l)))).values() == l.values());
}

TEST_CASE("schema violations are reported") {
  CommonLinesMatrix a = pure_common_lines(random_rotations(3, 1));
  io::Document d = io::matrix_document(a, "pure");
  CHECK_THROWS_AS(io::expect_kind(d, "rotations"), io::SchemaError);
  CHECK_THROWS_AS(io::rotations_from_document(d), io::SchemaError);

  io::Document short_rows = d;
  short_rows.rows.pop_back();
  CHECK_THROWS_AS(io::matrix_from_document(short_rows), io::SchemaError);

  std::string text = io::serialize(d);
  CHECK_THROWS_AS(io::parse("version: 2" + text.substr(text.find('\n'))), io::SchemaError);

  io::Document bad_kind = d;
  bad_kind.set("matrix_kind", "mystery");
  CHECK_THROWS_AS(io::matrix_from_document(bad_kind), io::SchemaError);

  CHECK_THROWS_AS(io::partition_from_document(io::parse("version: 1\nkind: partition\nn: 2\ndata:\n0\n")),
                  io::SchemaError);
}

TEST_CASE("files on disk") {
  auto dir = std::filesystem::temp_directory_path() / "commonlines_io_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "r.rotations").string();
  RotationSet r = random_rotations(3, 5);
  io::write_document(path, io::rotations_document(r));
  CHECK(io::rotations_from_document(io::read_document(path))[2].matrix() == r[2].matrix());
  CHECK_THROWS_AS(io::read_document((dir / "absent").string()), Error);
  std::filesystem::remove_all(dir);
}
