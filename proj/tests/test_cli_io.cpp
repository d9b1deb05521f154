#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "neutral/dataset.hpp"
#include "neutral/rng.hpp"

using namespace neutral;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("./" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("csv round trip preserves 17 significant digits") {
  Rng rng(1);
  Dataset data;
  data.header = {"x1", "x2", "x3"};
  for (int r = 0; r < 50; ++r) {
    data.rows.push_back(
        {rng.next_double(), rng.next_double() * 1e-15, rng.next_gaussian()});
  }
  TempFile tmp("io_roundtrip.csv");
  write_csv(data, tmp.path);
  const Dataset back = read_csv(tmp.path);
  REQUIRE(back.header == data.header);
  REQUIRE(back.n_rows() == data.n_rows());
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(back.rows[r][c] == data.rows[r][c]);
    }
  }
  CHECK_FALSE(back.has_labels());
}

TEST_CASE("csv label column") {
  Dataset data;
  data.header = {"x1", "x2"};
  data.rows = {{0.25, 0.75}, {0.5, 0.5}};
  data.labels = {1, 0};
  TempFile tmp("io_labels.csv");
  write_csv(data, tmp.path);
  const Dataset back = read_csv(tmp.path);
  CHECK(back.header == data.header);
  REQUIRE(back.has_labels());
  CHECK(back.labels == data.labels);
  CHECK(back.rows == data.rows);
}

TEST_CASE("csv rejects ragged and non-finite input") {
  TempFile tmp("io_bad.csv");
  {
    std::ofstream out(tmp.path);
    out << "x1,x2\n0.5,0.5\n0.25\n";
  }
  CHECK_THROWS_AS(read_csv(tmp.path), LengthMismatch);
  {
    std::ofstream out(tmp.path);
    out << "x1,x2\n0.5,nonsense\n";
  }
  CHECK_THROWS_AS(read_csv(tmp.path), InvalidParams);
  {
    std::ofstream out(tmp.path);
    out << "x1,x2\ninf,0.5\n";
  }
  CHECK_THROWS_AS(read_csv(tmp.path), InvalidParams);
  CHECK_THROWS_AS(read_csv("./does_not_exist.csv"), InvalidParams);
}

TEST_CASE("format_value survives strtod round trip") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.next_gaussian() * std::pow(10.0, rng.next_uniform(-20, 20));
    const std::string text = format_value(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
}
