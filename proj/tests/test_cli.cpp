#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "doctest.h"

#include "tracial/errors.hpp"
#include "tracial/fixtures.hpp"
#include "tracial/io.hpp"
#include "tracial/raster.hpp"

using namespace tracial;

namespace {

const std::string kCli = TRACIAL_CLI_PATH;
const std::string kData = TRACIAL_DATA_DIR;

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("pair documents") {
  const auto doc = io::parse_pair_document(
      R"({"name": "t", "A": [[[1, 0], [2, 1]], [[2, -1], [3, 0]]], "B": [[1, 0], [0, 1]]})");
  CHECK(doc.name == "t");
  CHECK(doc.pair.a()(0, 1) == linalg::Complex(2, 1));
  const auto again = io::parse_pair_document(io::to_json(doc));
  CHECK((again.pair.a().matrix() - doc.pair.a().matrix()).norm() == 0.0);
  CHECK_THROWS_AS(io::parse_pair_document(R"({"A": [[1, 2], [2.1, 1]], "B": [[1, 0], [0, 1]]})"), Error);
  CHECK_THROWS_AS(io::parse_pair_document(R"({"A": [[1]], "B": [[1, 0], [0, 1]]})"), Error);
  CHECK_THROWS_AS(io::parse_pair_document("{"), Error);
  const auto fx = io::load_pair_document(kData + "/figure1c.json");
  CHECK((fx.pair.b().matrix() - fixtures::figure_pairs()[2].pair.b().matrix()).norm() == 0.0);
}

TEST_CASE("csv round trip is exact and png encoding is deterministic") {
  const auto mu = measure::TracialMeasure::build(fixtures::figure_pairs()[0].pair);
  auto grid = raster::compute_raster(mu, raster::default_frame(mu), 40, 30, 1);
  grid.values[7] = std::numeric_limits<double>::infinity();
  const auto back = raster::parse_csv(raster::to_csv(grid));
  CHECK(back.nx == 40);
  CHECK(back.ny == 30);
  CHECK(back.frame.x0 == grid.frame.x0);
  CHECK(back.values == grid.values);
  const auto png1 = raster::encode_png(raster::colorize(grid, mu.segments()));
  const auto png2 = raster::encode_png(raster::colorize(back, mu.segments()));
  CHECK(png1 == png2);
  CHECK_THROWS_AS(raster::parse_csv("# 0,1,0,1,2,2\n1,2\n"), Error);
}

TEST_CASE("raster does not depend on the thread count") {
  const auto mu = measure::TracialMeasure::build(fixtures::figure_pairs()[3].pair);
  const auto f = raster::default_frame(mu);
  CHECK(raster::compute_raster(mu, f, 24, 24, 1).values == raster::compute_raster(mu, f, 24, 24, 3).values);
}

TEST_CASE("colormap") {
  raster::RasterGrid g{{-1, 1, -1, 1}, 3, 1, {0.0, 2.0, std::numeric_limits<double>::infinity()}};
  const auto img = raster::colorize(g, {});
  CHECK(img.at(0, 0)[0] == 255);
  CHECK(img.at(0, 0)[1] == 255);
  // The median positive value maps to t = 1/2: pure red.
  CHECK(img.at(1, 0)[0] == 255);
  CHECK(img.at(1, 0)[1] == 0);
  CHECK(img.at(2, 0)[0] == 0);
  CHECK(img.at(2, 0)[1] == 0);
}

TEST_CASE("green segments end at the singular points") {
  const auto mu = measure::TracialMeasure::build(fixtures::figure_pairs()[3].pair);
  const auto grid = raster::compute_raster(mu, raster::default_frame(mu), 120, 120, 1);
  const auto img = raster::colorize(grid, mu.segments());
  for (const auto& s : mu.segments()) {
    const auto [i, j] = raster::pixel_of(grid, s.alpha, s.beta);
    CHECK(img.at(i, j)[1] == raster::kSegmentGreen[1]);
    CHECK(img.at(i, j)[0] == raster::kSegmentGreen[0]);
  }
}

TEST_CASE("cli exit codes") {
  CHECK(run("analyze --input " + kData + "/figure1a.json") == 0);
  CHECK(run("analyze --input " + kData + "/identity_repeated.json") == 3);
  CHECK(run("analyze --input /nonexistent.json") == 5);
  CHECK(run("analyze") == 1);
  CHECK(run("render --input " + kData + "/identity_repeated.json --out /tmp/tracial_unused.png") == 3);
  CHECK(run("verify --suite hanner --seed 7 --p 3") == 0);
  CHECK(run("verify --suite lemmas") == 0);
  CHECK(run("verify --suite identity --input " + kData + "/figure1b.json") == 0);
  CHECK(run("verify --suite identity") == 1);
}

TEST_CASE("cli render and re-render from csv") {
  const std::string dir = TRACIAL_TMP_DIR;
  REQUIRE(run("render --input " + kData + "/figure1a.json --grid 64x48 --out " + dir + "/a.png --csv " + dir +
              "/a.csv") == 0);
  REQUIRE(run("render --input " + kData + "/figure1a.json --raster-in " + dir + "/a.csv --out " + dir + "/b.png") ==
          0);
  CHECK(raster::read_file(dir + "/a.png") == raster::read_file(dir + "/b.png"));
  const auto grid = raster::parse_csv(raster::read_file(dir + "/a.csv"));
  CHECK(grid.nx == 64);
  CHECK(grid.ny == 48);
}
