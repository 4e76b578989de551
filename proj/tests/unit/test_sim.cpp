#include <map>
#include <set>

#include "catch_amalgamated.hpp"
#include "spatialviz/sim.hpp"

using namespace spatialviz;

namespace {

std::multiset<int> colors(const ArrowMapState& s) {
  std::multiset<int> out;
  for (const auto& c : s.cells)
    if (c) out.insert(c->color);
  return out;
}

std::multiset<int> colors(const BlockWorld& w) {
  std::multiset<int> out;
  for (const auto& c : w.scene) out.insert(c.color);
  return out;
}

}  // namespace

TEST_CASE("a half fold doubles a punch across the crease") {
  auto s = paper_fold(PaperState(4, 4), {FoldDirection::Horizontal, 2});
  CHECK(s.current() == Rect{2, 0, 2, 4});
  s = paper_punch(s, {{0, 1}});
  const auto holes = paper_unfold(s);
  CHECK(holes.count() == 2);
  CHECK(holes.at(2, 1));
  CHECK(holes.at(1, 1));
  CHECK(refold_matches(s, holes));
  auto wrong = holes;
  wrong.set(1, 1, false);
  CHECK_FALSE(refold_matches(s, wrong));
}

TEST_CASE("the smaller side folds onto the larger") {
  const auto s = paper_fold(PaperState(5, 4), {FoldDirection::Vertical, 1});
  CHECK(s.current() == Rect{0, 1, 5, 3});
  const auto t = paper_fold(PaperState(5, 4), {FoldDirection::Vertical, 3});
  CHECK(t.current() == Rect{0, 0, 5, 3});
}

TEST_CASE("diagonal folds end the sequence") {
  auto s = paper_fold(PaperState(4, 4), {FoldDirection::Diagonal, 2, Corner::TopLeft});
  CHECK(s.has_diagonal());
  CHECK_THROWS_AS(paper_fold(s, {FoldDirection::Horizontal, 2}), Error);
  CHECK_THROWS_AS(paper_fold(PaperState(4, 4), {FoldDirection::Horizontal, 4}), Error);
}

TEST_CASE("random fold sequences unfold consistently") {
  Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    const int rows = rng.uniform_int(3, 6), cols = rng.uniform_int(3, 6);
    PaperState s(rows, cols);
    for (const auto& f : random_folds(rows, cols, rng.uniform_int(1, 3), rng)) s = paper_fold(s, f);
    const auto vis = s.visible_cells();
    REQUIRE_FALSE(vis.empty());
    const auto& p = rng.pick(vis);
    s = paper_punch(s, {{p.row - s.current().row, p.col - s.current().col}});
    const auto holes = paper_unfold(s);
    REQUIRE(holes.count() >= 1);
    REQUIRE(holes.count() <= 1 << s.folds().size());
    REQUIRE(refold_matches(s, holes));
  }
}

TEST_CASE("egocentric orientation updates") {
  CHECK(update_orientation(RelDir::Forward, 1) == 1);
  CHECK(update_orientation(RelDir::Backward, 1) == 3);
  CHECK(update_orientation(RelDir::Left, 0) == 3);
  CHECK(update_orientation(RelDir::Right, 3) == 0);
}

TEST_CASE("single arrow moves and walls") {
  ArrowState s{3, 3, 1, 1, 0};  // facing +y
  const auto up = arrow_move(s, RelDir::Forward, 1);
  REQUIRE(up);
  CHECK(up->y == 2);
  CHECK(up->orient == 0);
  const auto right = arrow_move(s, RelDir::Right, 1);
  REQUIRE(right);
  CHECK(right->x == 2);
  CHECK(right->orient == 1);
  CHECK_FALSE(arrow_move(s, RelDir::Forward, 2));
}

TEST_CASE("arrows swap when moving onto another arrow") {
  ArrowMapState m{3, 1, std::vector<std::optional<Arrow>>(3)};
  m.at(0, 0) = Arrow{1, 1};  // facing +x
  m.at(1, 0) = Arrow{2, 0};
  const auto r = arrowmap_move(m, 0, 0, RelDir::Forward, 1);
  REQUIRE(r);
  CHECK(r->swapped);
  CHECK(r->state.at(1, 0)->color == 1);
  CHECK(r->state.at(0, 0)->color == 2);
  CHECK(colors(r->state) == colors(m));
  CHECK_FALSE(arrowmap_move(m, 2, 0, RelDir::Forward, 1));
}

TEST_CASE("blocks cannot float or leave the world") {
  BlockWorld w{{2, 1, 2}, settle({{{0, 0, 0}, 1}, {{1, 0, 0}, 2}})};
  CHECK_FALSE(block_move(w, {0, 0, 0}, 1));
  CHECK_FALSE(block_move(w, {0, 0, 0}, 4));
  const auto onto = block_move(w, {0, 0, 0}, 0);  // swaps with its neighbour
  REQUIRE(onto);
  CHECK(is_supported(onto->scene));
  CHECK(colors(*onto) == colors(w));
  for (const auto& op : valid_block_moves(w)) {
    const auto n = block_move(w, op.from, op.direction);
    REQUIRE(n);
    CHECK(is_supported(n->scene));
  }
}

TEST_CASE("sequences replay to the same trace") {
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const auto map = random_arrow_map(4, 4, {1, 2, 3}, rng);
    const auto tr = generate_sequence(map, 3, std::nullopt, rng);
    const auto again = replay(map, tr.ops);
    REQUIRE(again);
    REQUIRE(again->states == tr.states);

    const auto world = random_block_world({3, 3, 3}, {1, 2, 3, 4}, rng);
    const auto bt = generate_sequence(world, 2, std::nullopt, rng);
    const auto bagain = replay(world, bt.ops);
    REQUIRE(bagain);
    REQUIRE(bagain->states == bt.states);
  }
}

TEST_CASE("forbidden end states are avoided") {
  Rng rng(29);
  ArrowState start{3, 3, 1, 1, 0};
  for (int t = 0; t < 50; ++t) {
    const auto first = generate_sequence(start, 2, std::nullopt, rng);
    const auto key = state_key(first.states.back());
    const auto other = generate_sequence(start, 2, key, rng);
    REQUIRE(state_key(other.states.back()) != key);
  }
}

TEST_CASE("trace lines carry one state per step") {
  Rng rng(31);
  const auto tr = generate_sequence(ArrowState{4, 4, 0, 0, 0}, 3, std::nullopt, rng);
  const auto text = trace_jsonl(tr);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("operation text") {
  CHECK_FALSE(describe(ArrowOp{1, 2, RelDir::Left, 2}, false).empty());
  CHECK(describe(ArrowOp{1, 2, RelDir::Left, 2}, true) != describe(ArrowOp{1, 2, RelDir::Left, 2}, false));
  CHECK_FALSE(describe(BlockOp{{0, 0, 0}, 0}).empty());
}
