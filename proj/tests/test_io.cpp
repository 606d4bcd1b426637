#include <cstdio>
#include <fstream>

#include <doctest.h>

#include "pathwise/path_io.hpp"

using namespace pathwise;

namespace {

struct TempFile {
  std::string name;
  explicit TempFile(const std::string& n) : name(n) {}
  ~TempFile() {
    std::remove(name.c_str());
    auto dot = name.rfind('.');
    if (dot != std::string::npos)
      std::remove((name.substr(0, dot) + ".meta.json").c_str());
  }
};

CadlagPath awkward_path() {
  // Values that do not round-trip through short decimal forms.
  return CadlagPath(1.0, PathMode::step,
                    {0, 0.1, 1.0 / 3, 0.7000000000000001},
                    {0.1 + 0.2, -1.0 / 3, 1e-17, 123456.789012345678});
}

}  // namespace

TEST_CASE("csv round trip is bit-exact") {
  TempFile f("io_test_path.csv");
  CadlagPath p = awkward_path();
  write_path(p, f.name);
  CadlagPath q = read_path(f.name);
  CHECK(q.mode() == p.mode());
  CHECK(q.horizon() == p.horizon());
  REQUIRE(q.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(q.times()[i] == p.times()[i]);
    CHECK(q.values()[i] == p.values()[i]);
  }
}

TEST_CASE("json round trip is bit-exact") {
  TempFile f("io_test_path.json");
  CadlagPath p = awkward_path();
  write_path(p, f.name);
  CadlagPath q = read_path(f.name);
  REQUIRE(q.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(q.times()[i] == p.times()[i]);
    CHECK(q.values()[i] == p.values()[i]);
  }
}

TEST_CASE("linear mode survives the sidecar") {
  TempFile f("io_test_linear.csv");
  CadlagPath p(2.0, PathMode::linear, {0, 1.0}, {0, 1});
  write_path(p, f.name);
  CadlagPath q = read_path(f.name);
  CHECK(q.mode() == PathMode::linear);
  CHECK(q.horizon() == 2.0);
}

TEST_CASE("malformed csv rows report line numbers") {
  TempFile f("io_test_bad.csv");
  {
    std::ofstream os(f.name);
    os << "t,value\n0,1\nnot-a-row\n";
    std::ofstream ms("io_test_bad.meta.json");
    ms << R"({"horizon": 1.0, "mode": "step"})";
  }
  try {
    read_path(f.name);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("bad header is rejected") {
  TempFile f("io_test_header.csv");
  {
    std::ofstream os(f.name);
    os << "time,val\n0,1\n";
    std::ofstream ms("io_test_header.meta.json");
    ms << R"({"horizon": 1.0, "mode": "step"})";
  }
  CHECK_THROWS_AS(read_path(f.name), ParseError);
}

TEST_CASE("missing sidecar is an io error") {
  TempFile f("io_test_nosidecar.csv");
  {
    std::ofstream os(f.name);
    os << "t,value\n0,1\n";
  }
  CHECK_THROWS_AS(read_path(f.name), std::runtime_error);
}

TEST_CASE("invalid json documents are parse errors") {
  TempFile f("io_test_bad.json");
  {
    std::ofstream os(f.name);
    os << "{ not json";
  }
  CHECK_THROWS_AS(read_path(f.name), ParseError);

  {
    std::ofstream os(f.name);
    os << R"({"horizon": 1.0, "mode": "sideways", "points": [[0, 1]]})";
  }
  CHECK_THROWS_AS(read_path(f.name), ParseError);
}

TEST_CASE("structurally invalid paths are rejected on read") {
  TempFile f("io_test_struct.json");
  {
    std::ofstream os(f.name);
    os << R"({"horizon": 1.0, "mode": "step", "points": [[0.5, 1]]})";
  }
  CHECK_THROWS_AS(read_path(f.name), ParseError);
}
