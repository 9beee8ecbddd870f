#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "splitaztec/errors.hpp"
#include "splitaztec/lattice.hpp"

using namespace splitaztec;

namespace {

DimerCovering from_map(const WeightedAztecGraph& g, const std::map<oracle::V, oracle::V>& m) {
  std::vector<std::pair<Vertex, Vertex>> d;
  for (auto [b, w] : m) d.push_back({{b.first, b.second}, {w.first, w.second}});
  return covering_from_dimers(g, d);
}

// dimers of the order-4 covering drawn next to its path configuration
const int kPictured[20][4] = {{0, 7, 1, 8}, {2, 7, 3, 8}, {4, 7, 5, 8}, {6, 7, 7, 8}, {8, 7, 7, 6},
                              {8, 5, 7, 4}, {8, 3, 7, 2}, {8, 1, 7, 0}, {0, 5, 1, 6}, {0, 3, 1, 4},
                              {0, 1, 1, 0}, {4, 1, 3, 0}, {6, 1, 5, 0}, {2, 1, 1, 2}, {2, 3, 3, 2},
                              {2, 5, 3, 4}, {6, 3, 5, 2}, {4, 3, 5, 4}, {4, 5, 3, 6}, {6, 5, 5, 6}};

DimerCovering pictured(const WeightedAztecGraph& g) {
  std::vector<std::pair<Vertex, Vertex>> d;
  for (const auto& s : kPictured) d.push_back({{s[0], s[1]}, {s[2], s[3]}});
  return covering_from_dimers(g, d);
}

}  // namespace

TEST_CASE("vertex sets and edge count") {
  for (int N : {1, 2, 3}) {
    const WeightedAztecGraph g(N, 0.5, 1.0 / 3.0);
    const oracle::Diamond d(2 * N);
    CHECK(g.white_vertices().size() == d.whites.size());
    CHECK(g.black_vertices().size() == d.blacks.size());
    CHECK(g.edges().size() == d.edges().size());
    CHECK(g.edges().size() == static_cast<std::size_t>(4 * (2 * N) * (2 * N)));
    for (Vertex w : g.white_vertices()) CHECK((w.x % 2 == 1 && w.y % 2 == 0));
    for (Vertex b : g.black_vertices()) CHECK((b.x % 2 == 0 && b.y % 2 == 1));
  }
  const WeightedAztecGraph g(2, 1.0, 1.0);
  CHECK(g.white_vertices().size() == 20);
  CHECK(g.black_vertices().size() == 20);
}

TEST_CASE("edge weights follow the case table") {
  const double a = 0.5, b = 1.0 / 3.0;
  for (int N : {1, 2, 3, 4}) {
    const WeightedAztecGraph g(N, a, b);
    for (const Edge& e : g.edges()) {
      const double expect = oracle::weight(N, a, b, {e.black.x, e.black.y}, {e.white.x, e.white.y});
      CHECK(e.weight == doctest::Approx(expect).epsilon(1e-14));
      // a side only sees its own parameter
      if (e.white.x < 2 * N) CHECK(e.beta_exp == 0);
      else CHECK(e.alpha_exp == 0);
    }
  }
  CHECK(edge_weight(2, a, b, {2, 1}, {1, 0}) == doctest::Approx(0.25));
  const WeightedAztecGraph u(2, 1.0, 1.0);
  for (const Edge& e : u.edges()) CHECK(e.weight == 1.0);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(WeightedAztecGraph(0, 0.5, 0.5), ValidationError);
  CHECK_THROWS_AS(WeightedAztecGraph(2, 0.0, 0.5), ValidationError);
  CHECK_THROWS_AS(WeightedAztecGraph(2, 0.5, 1.5), ValidationError);
  const WeightedAztecGraph g(1, 1.0, 1.0);
  DimerCovering c;
  c.n = 2;
  c.dir.assign(4, kDirNorthEast);
  CHECK_FALSE(is_perfect_matching(g, c));
  CHECK_THROWS_AS(validate_matching(g, c), ValidationError);
}

TEST_CASE("order 2 and 4 coverings against backtracking") {
  for (int N : {1, 2}) {
    const double a = 0.5, b = 1.0 / 3.0;
    const WeightedAztecGraph g(N, a, b);
    const auto all = oracle::all_matchings(2 * N);
    CHECK(all.size() == (N == 1 ? 8u : 1024u));
    std::set<PointSet> images, tops;
    for (const auto& m : all) {
      const DimerCovering c = from_map(g, m);
      REQUIRE(is_perfect_matching(g, c));
      double w = 1.0;
      for (auto [bv, wv] : m) w *= oracle::weight(N, a, b, bv, wv);
      CHECK(covering_weight(g, c) == doctest::Approx(w).epsilon(1e-12));
      const PathConfiguration p = covering_to_paths(g, c);
      CHECK(p.paths.size() == static_cast<std::size_t>(2 * N));
      CHECK_NOTHROW(validate_paths(p));
      CHECK(path_configuration_weight(g, p) == doctest::Approx(w).epsilon(1e-12));
      CHECK(paths_to_covering(g, p) == c);
      images.insert(paths_to_kernel_points(p));
      tops.insert(paths_to_points(p));
    }
    CHECK(images.size() == all.size());
    // tops of vertical runs forget where a run ends, so they do not separate coverings
    CHECK(tops.size() == (N == 1 ? 7u : 429u));
  }
}

TEST_CASE("uniform weight is one") {
  const WeightedAztecGraph g(2, 1.0, 1.0);
  for (const auto& m : oracle::all_matchings(4)) CHECK(covering_weight(g, from_map(g, m)) == 1.0);
}

TEST_CASE("pictured order-4 configuration") {
  const WeightedAztecGraph g(2, 0.5, 1.0 / 3.0);
  const DimerCovering c = pictured(g);
  REQUIRE(is_perfect_matching(g, c));
  const PathConfiguration p = covering_to_paths(g, c);
  REQUIRE(p.paths.size() == 4);
  // the top path runs straight along row -1 and drops at the right edge
  for (int j = 0; j <= 8; ++j) CHECK(p.paths[0][j] == Site{j, -1});
  CHECK(p.paths[0].back() == Site{8, -5});
  CHECK(p.paths[3].back() == Site{2, -5});

  PointSet expect;
  for (int j = 0; j <= 3; ++j) expect.push_back({0, -1 - j});
  for (int j = 1; j <= 8; ++j) expect.push_back({j, -1});
  for (Site s : {Site{1, -2}, Site{2, -2}, Site{3, -3}, Site{4, -3}, Site{5, -3}, Site{6, -3}, Site{1, -3},
                 Site{2, -3}, Site{3, -4}, Site{4, -4}, Site{1, -5}, Site{2, -5}})
    expect.push_back(s);
  std::sort(expect.begin(), expect.end());
  CHECK(paths_to_points(p) == expect);

  // two alpha^2 squares on the left: pictured covering weight by hand
  double w = 1.0;
  for (const auto& s : kPictured) w *= oracle::weight(2, 0.5, 1.0 / 3.0, {s[0], s[1]}, {s[2], s[3]});
  CHECK(covering_weight(g, c) == doctest::Approx(w));
}

TEST_CASE("points lie on paths") {
  const WeightedAztecGraph g(2, 0.5, 0.5);
  for (const auto& m : oracle::all_matchings(4)) {
    const PathConfiguration p = covering_to_paths(g, from_map(g, m));
    std::map<Site, int> owner;
    for (std::size_t i = 0; i < p.paths.size(); ++i)
      for (Site s : p.paths[i]) owner[s] = static_cast<int>(i);
    for (Site s : paths_to_points(p)) {
      REQUIRE(owner.count(s));
      auto above = owner.find({s.col, s.row + 1});
      CHECK((above == owner.end() || above->second != owner[s]));
    }
  }
}

TEST_CASE("tiling text round trip and svg") {
  const WeightedAztecGraph g(2, 0.5, 0.25);
  const DimerCovering c = pictured(g);
  std::stringstream ss;
  ss << "# comment line\n";
  write_tiling(ss, g, c);
  const auto [g2, c2] = read_tiling(ss);
  CHECK(g2.half_n() == 2);
  CHECK(g2.alpha() == 0.5);
  CHECK(g2.beta() == 0.25);
  CHECK(c2 == c);
  const std::string svg = render_tiling_svg(g, c, "{\"k\":1}");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("{\"k\":1}") != std::string::npos);
  std::stringstream bad("4 0.5");
  CHECK_THROWS_AS(read_tiling(bad), ValidationError);
}
