#include <algorithm>
#include <set>

#include "catch_amalgamated.hpp"
#include "spatialviz/voxel.hpp"

using namespace spatialviz;

namespace {

OccupancyGrid l_shape() {
  // Three cubes on the ground along x, one on top of the left end.
  return OccupancyGrid::from_cells({3, 2, 2}, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 0, 1}});
}

std::set<Cell> cell_set(const OccupancyGrid& g) {
  auto c = g.cells();
  return {c.begin(), c.end()};
}

}  // namespace

TEST_CASE("grid key and count") {
  const auto g = l_shape();
  CHECK(g.count() == 4);
  CHECK(g.at(0, 0, 1));
  CHECK_FALSE(g.at(1, 0, 1));
  CHECK_FALSE(g.at(-1, 0, 0));
  CHECK(g.column_count(0, 0) == 2);
  CHECK(g.key().rfind("3x2x2:", 0) == 0);
}

TEST_CASE("fit translates cells to the origin") {
  const auto g = OccupancyGrid::fit({{4, 5, 2}, {5, 5, 2}});
  CHECK(g.dims() == Dims{2, 1, 1});
  CHECK(g.count() == 2);
}

TEST_CASE("four quarter turns about any axis are the identity") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto g = create_supported_stack({3, 3, 3}, 0.6, rng);
    if (g.count() == 0) continue;
    const auto fitted = OccupancyGrid::fit(g.cells());
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      CHECK(rotate_stack(fitted, a, 4) == fitted);
      CHECK(rotate_stack(rotate_stack(fitted, a, 1), a, 3) == fitted);
      CHECK(rotate_stack(fitted, a, 1).count() == fitted.count());
    }
  }
}

TEST_CASE("a quarter turn about z sends +x to +y") {
  const auto bar = OccupancyGrid::from_cells({2, 1, 1}, {{0, 0, 0}, {1, 0, 0}});
  const auto r = rotate_stack(bar, Axis::Z, 1);
  CHECK(r.dims() == Dims{1, 2, 1});
}

TEST_CASE("mirror is an involution and reflects x") {
  const auto g = l_shape();
  const auto m = mirror_stack(g);
  CHECK(m.at(2, 0, 1));
  CHECK_FALSE(m.at(0, 0, 1));
  CHECK(mirror_stack(m) == g);
}

TEST_CASE("silhouettes follow the view conventions") {
  const auto g = OccupancyGrid::from_cells({2, 3, 2}, {{1, 0, 0}, {1, 2, 0}, {1, 2, 1}});
  const auto front = project_silhouette(g, View::Front);
  CHECK(front.rows == 2);
  CHECK(front.cols == 2);
  CHECK(front.at(1, 1));
  CHECK(front.at(0, 1));
  CHECK_FALSE(front.at(1, 0));
  const auto top = project_silhouette(g, View::Top);
  CHECK(top.rows == 3);
  CHECK(top.at(0, 1));  // back row y = 2 is drawn first
  CHECK(top.at(2, 1));
  CHECK_FALSE(top.at(1, 1));
  const auto left = project_silhouette(g, View::Left);
  CHECK(left.at(0, 0));  // y = 2 is nearest the left edge
  CHECK(left.at(1, 2));
  CHECK_FALSE(left.at(0, 2));
  const auto right = project_silhouette(g, View::Right);
  CHECK(right.at(0, 2));
  CHECK(right.at(1, 0));
}

TEST_CASE("count bounds bracket the true count") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto g = create_supported_stack({3, 3, 3}, 0.5, rng);
    const auto f = project_silhouette(g, View::Front);
    const auto top = project_silhouette(g, View::Top);
    const auto l = project_silhouette(g, View::Left);
    const auto b2 = count_bounds(f, top);
    const auto b3 = count_bounds(f, top, &l);
    REQUIRE(b2.min_count <= g.count());
    REQUIRE(g.count() <= b2.max_count);
    REQUIRE(b3.min_count <= g.count());
    REQUIRE(g.count() <= b3.max_count);
    REQUIRE(b3.max_count <= b2.max_count);
  }
}

TEST_CASE("two-view bounds of a known stack") {
  // Front heights 2,1,1 over a full 3x2 footprint.
  std::vector<Cell> cells;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 2; ++y) cells.push_back({x, y, 0});
  cells.push_back({0, 0, 1});
  const auto g = OccupancyGrid::from_cells({3, 2, 2}, cells);
  const auto b = count_bounds(project_silhouette(g, View::Front), project_silhouette(g, View::Top));
  CHECK(b.max_count == 2 * 2 + 1 * 2 + 1 * 2);
  CHECK(b.min_count == (2 + 1) + (1 + 1) + (1 + 1));
}

TEST_CASE("count bounds reject inconsistent views") {
  const auto a = OccupancyGrid::from_cells({2, 1, 1}, {{0, 0, 0}});
  const auto b = OccupancyGrid::from_cells({2, 1, 1}, {{1, 0, 0}});
  CHECK_THROWS_AS(count_bounds(project_silhouette(a, View::Front), project_silhouette(b, View::Top)), Error);
  CHECK_THROWS_AS(count_bounds(project_silhouette(a, View::Top), project_silhouette(a, View::Top)), Error);
}

TEST_CASE("supported stacks obey gravity") {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    const auto g = create_supported_stack({4, 4, 4}, 0.7, rng);
    REQUIRE(is_supported(g));
    const auto joined = connect_isolated_regions(g);
    REQUIRE(is_supported(joined));
    if (joined.count() > 0) REQUIRE(ground_region_count(joined) == 1);
    for (const auto& c : g.cells()) REQUIRE(joined.at(c));
  }
}

TEST_CASE("floating cubes are unsupported") {
  CHECK_FALSE(is_supported(OccupancyGrid::from_cells({1, 1, 2}, {{0, 0, 1}})));
  CHECK(is_supported(OccupancyGrid::from_cells({1, 1, 2}, {{0, 0, 0}, {0, 0, 1}})));
}

TEST_CASE("six-connectivity ignores diagonal contact") {
  CHECK(is_connected6({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}));
  CHECK_FALSE(is_connected6({{0, 0, 0}, {1, 1, 0}}));
  CHECK_FALSE(is_connected6({{0, 0, 0}, {0, 0, 2}}));
}

TEST_CASE("split parts partition the stack into connected pieces") {
  Rng rng(21);
  for (int t = 0; t < 40; ++t) {
    const auto g = create_pyramid_stack({3, 3, 3}, rng);
    REQUIRE(is_connected6(g.cells()));
    const int parts = 2 + t % 2;
    const int cap = (g.count() + parts - 1) / parts + 1;
    std::vector<std::vector<Cell>> split;
    try {
      split = split_connected(g, cap, parts, rng);
    } catch (const Error&) {
      continue;
    }
    REQUIRE(static_cast<int>(split.size()) == parts);
    std::set<Cell> all;
    for (const auto& p : split) {
      REQUIRE(is_connected6(p));
      REQUIRE(static_cast<int>(p.size()) <= cap);
      for (const auto& c : p) REQUIRE(all.insert(c).second);
    }
    REQUIRE(all == cell_set(g));
  }
}

TEST_CASE("settle is idempotent and keeps colours") {
  BlockScene s = {{{0, 0, 2}, 1}, {{0, 0, 0}, 2}, {{1, 1, 3}, 3}};
  const auto once = settle(s);
  CHECK(settle(once) == once);
  CHECK(is_supported(once));
  std::multiset<int> before, after;
  for (const auto& c : s) before.insert(c.color);
  for (const auto& c : once) after.insert(c.color);
  CHECK(before == after);
  CHECK(std::any_of(once.begin(), once.end(), [](const ColoredCube& c) { return c.pos == Cell{0, 0, 1}; }));
}
