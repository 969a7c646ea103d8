#include <atomic>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "panelcast/fileio.hpp"
#include "panelcast/parallel.hpp"
#include "test_support.hpp"

using namespace panelcast;
namespace fs = std::filesystem;

TEST_CASE("atomic writes replace the destination and leave no temporaries") {
  const auto dir = testing::scratch_dir("atomic");
  const auto path = dir / "out.txt";
  write_file_atomic(path, "first");
  CHECK(read_file(path) == "first");
  write_file_atomic(path, std::string(100000, 'x'));
  CHECK(read_file(path).size() == 100000);
  write_file_atomic(path, "");
  CHECK(read_file(path).empty());
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  fs::remove_all(dir);
}

TEST_CASE("a failed atomic write leaves the old file intact") {
  const auto dir = testing::scratch_dir("atomic_fail");
  const auto target = dir / "target";
  fs::create_directory(target);  // rename over a directory fails
  write_file_atomic(dir / "keep.txt", "old");
  CHECK_ERROR_KIND(write_file_atomic(target, "new"), ErrorKind::io);
  CHECK(fs::is_directory(target));
  CHECK_ERROR_KIND(write_file_atomic(dir / "missing" / "x.txt", "new"), ErrorKind::io);
  CHECK(read_file(dir / "keep.txt") == "old");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 2);
  fs::remove_all(dir);
}

TEST_CASE("reading a missing file is an io error") {
  CHECK_ERROR_KIND(read_file("/nonexistent/definitely/not/here"), ErrorKind::io);
}

TEST_CASE("string helpers") {
  CHECK(split("a,,b,", ',') == std::vector<std::string>{"a", "", "b", ""});
  CHECK(split("", ',') == std::vector<std::string>{""});
  CHECK(split_whitespace("  a \t b\n c ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_whitespace("   ").empty());
  CHECK(trim("\t x y \r\n") == "x y");
  CHECK(parse_double(" 1.5e3 ", "v") == 1500.0);
  CHECK_ERROR_KIND(parse_double("1.5x", "v"), ErrorKind::parse);
  CHECK_ERROR_KIND(parse_double("", "v"), ErrorKind::parse);
  CHECK_ERROR_KIND(parse_double("inf", "v"), ErrorKind::parse);
  CHECK_ERROR_KIND(parse_double("1e999", "v"), ErrorKind::parse);
  CHECK(parse_int("-42", "n") == -42);
  CHECK_ERROR_KIND(parse_int("4.2", "n"), ErrorKind::parse);
  CHECK(format_g6(1234567.0) == "1.23457e+06");
  CHECK(format_g6(-0.0) == "0");
  CHECK(format_g6(0.000123456789) == "0.000123457");
}

TEST_CASE("key-value files") {
  const auto kv = parse_key_values("# header\nlat = 40.5\n\nlon=-74 # trailing\nlat = 41\n", "cfg");
  CHECK(kv.size() == 2);
  CHECK(kv.at("lat") == "41");
  CHECK(kv.at("lon") == "-74");
  try {
    parse_key_values("a = 1\nbroken\n", "cfg");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("cfg:2") != std::string::npos);
  }
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(10000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  parallel_for(0, [](std::size_t) { FAIL("never called"); });
  CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                    if (i == 37) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}
