#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpuwave/run_io.hpp"

using namespace fpuwave;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  const fs::path dir = fs::temp_directory_path() / "fpuwave_runio_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_full round-trips doubles exactly") {
  const std::vector<double> values = {
      3.141592653589793,   1.0 / 3.0,       -6.02214076e23, 0.1,
      45.3136927399758,    -2.2250738585072014e-308,
      1.0,                 0.0,             -7.291737e-5};
  for (const double v : values) {
    const std::string text = format_full(v);
    CHECK(std::stod(text) == v);
  }
  // layout d.dddddddddddddddde+XX carries exactly 17 significant digits
  const std::string pi = format_full(3.141592653589793);
  CHECK(pi.substr(0, 18) == "3.1415926535897931");
  CHECK(pi.find('e') != std::string::npos);
}

TEST_CASE("format_compact trims for labels") {
  CHECK(format_compact(2.0) == "2");
  CHECK(format_compact(0.1) == "0.1");
  CHECK(format_compact(0.025) == "0.025");
}

TEST_CASE("fnv1a64 matches the published vectors") {
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("manifest hash ignores insertion order, tracks values") {
  Manifest a;
  a.set("m", 2.0);
  a.set("delta", 0.1);
  a.set("version", std::string("1.0.0"));

  Manifest b;
  b.set("version", std::string("1.0.0"));
  b.set("delta", 0.1);
  b.set("m", 2.0);

  CHECK(a.to_string() == b.to_string());
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);

  Manifest c = a;
  c.set("delta", 0.2);
  CHECK(c.hash() != a.hash());

  // doubles are echoed at full precision
  CHECK(a.entries.at("delta") == format_full(0.1));
  CHECK(a.to_string().rfind("delta=", 0) == 0);
}

TEST_CASE("csv writer and reader round-trip bitwise") {
  const fs::path path = test_dir() / "round_trip.csv";
  CsvTable table;
  table.manifest_hash = "00000000deadbeef";
  table.columns = {"x", "R", "V"};
  table.rows = {{-6.0, 0.0, 1.0 / 3.0},
                {0.0, 1.0 - 0.121466872093757, -0.5},
                {6.0, 2.2250738585072014e-308, 3.141592653589793}};
  table.footers = {"# slope_err_R_inf=1.9e+00"};
  write_csv(path.string(), table);

  const CsvTable back = read_csv(path.string());
  CHECK(back.manifest_hash == table.manifest_hash);
  CHECK(back.columns == table.columns);
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    REQUIRE(back.rows[i].size() == table.rows[i].size());
    for (std::size_t j = 0; j < table.rows[i].size(); ++j) {
      CHECK(back.rows[i][j] == table.rows[i][j]);  // exact, not approximate
    }
  }
  CHECK(back.footers == table.footers);

  // rewriting the same table yields identical bytes
  const fs::path path2 = test_dir() / "round_trip_again.csv";
  write_csv(path2.string(), table);
  std::ifstream f1(path), f2(path2);
  const std::string b1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
  const std::string b2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
  CHECK(b1 == b2);
  CHECK(b1.rfind("# manifest=00000000deadbeef\n", 0) == 0);
}

TEST_CASE("csv io rejects bad files") {
  CHECK_THROWS_AS(write_csv("/no/such/dir/out.csv", CsvTable{}),
                  std::runtime_error);
  CHECK_THROWS_AS(read_csv((test_dir() / "missing.csv").string()),
                  std::runtime_error);

  const fs::path bare = test_dir() / "bare.csv";
  {
    std::ofstream out(bare);
    out << "x,y\n1.0,2.0\n";
  }
  CHECK_THROWS_AS(read_csv(bare.string()), std::runtime_error);  // no manifest

  const fs::path ragged = test_dir() / "ragged.csv";
  {
    std::ofstream out(ragged);
    out << "# manifest=0\nx,y\n1.0\n";
  }
  CHECK_THROWS_AS(read_csv(ragged.string()), std::runtime_error);

  const fs::path words = test_dir() / "words.csv";
  {
    std::ofstream out(words);
    out << "# manifest=0\nx,y\n1.0,apple\n";
  }
  CHECK_THROWS_AS(read_csv(words.string()), std::runtime_error);

  CsvTable bad;
  bad.manifest_hash = "0";
  bad.columns = {"x", "y"};
  bad.rows = {{1.0}};
  CHECK_THROWS_AS(write_csv((test_dir() / "bad.csv").string(), bad),
                  std::runtime_error);
}

TEST_CASE("output root: flag beats environment beats cwd") {
  ::unsetenv("FPUWAVE_OUT_ROOT");
  CHECK(resolve_out_root("") == ".");
  CHECK(resolve_out_root("/tmp/explicit") == "/tmp/explicit");
  ::setenv("FPUWAVE_OUT_ROOT", "/tmp/from_env", 1);
  CHECK(resolve_out_root("") == "/tmp/from_env");
  CHECK(resolve_out_root("/tmp/explicit") == "/tmp/explicit");
  ::unsetenv("FPUWAVE_OUT_ROOT");
}

TEST_CASE("loglog_slope recovers exact power laws") {
  const std::vector<double> x = {0.2, 0.1, 0.05, 0.025};
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 * std::pow(x[i], 2.5);
  CHECK(loglog_slope(x, y) == doctest::Approx(2.5).epsilon(1e-12));

  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 0.7 / x[i];
  CHECK(loglog_slope(x, y) == doctest::Approx(-1.0).epsilon(1e-12));

  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), std::domain_error);
  CHECK_THROWS_AS(loglog_slope({1.0, 2.0}, {1.0}), std::domain_error);
  CHECK_THROWS_AS(loglog_slope({1.0, 2.0}, {1.0, -2.0}), std::domain_error);
  CHECK_THROWS_AS(loglog_slope({1.0, 1.0}, {1.0, 2.0}), std::domain_error);
}
