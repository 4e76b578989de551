#include <set>

#include "catch_amalgamated.hpp"
#include "spatialviz/tasks.hpp"

using namespace spatialviz;

namespace {

std::string option_key(const Option& o) {
  switch (o.kind) {
    case OptionKind::Image: return "i" + digest(o.image);
    case OptionKind::Number: return "n" + std::to_string(o.number);
    case OptionKind::Text: return "t" + o.text;
  }
  return {};
}

}  // namespace

TEST_CASE("task table") {
  REQUIRE(all_tasks().size() == 11);
  int total = 0;
  for (const auto& t : all_tasks()) {
    total += t.suite_count;
    CHECK(parse_task(t.code) == t.id);
    CHECK(parse_task(t.slug) == t.id);
    CHECK(t.levels >= 1);
  }
  CHECK(total == 1100);
  CHECK(parse_task("2dr") == TaskId::Rotation2D);
  CHECK_THROWS_AS(parse_task("nope"), Error);
  CHECK(instance_id(TaskId::PaperFolding, 1, 7) == "pf-l1-0007");
}

TEST_CASE("every task level generates sound instances") {
  for (const auto& t : all_tasks())
    for (int level = 0; level < t.levels; ++level)
      for (int i = 0; i < 6; ++i) {
        const auto seed = derive_seed(99, t.code, level, i);
        const auto inst = generate_instance(t.id, level, seed);
        INFO(t.code << " level " << level << " seed " << seed);
        REQUIRE(inst.options.size() == 4);
        REQUIRE(inst.answer >= 0);
        REQUIRE(inst.answer < 4);
        REQUIRE(inst.task == t.id);
        REQUIRE(inst.level == level);
        REQUIRE_FALSE(inst.question.empty());
        std::set<std::string> keys;
        for (const auto& o : inst.options) keys.insert(option_key(o));
        REQUIRE(keys.size() == 4);
        REQUIRE(inst.options[static_cast<std::size_t>(inst.answer)].tag != "");
        const auto errs = check_instance(inst);
        INFO((errs.empty() ? std::string() : errs.front()));
        REQUIRE(errs.empty());
      }
}

TEST_CASE("generation is a pure function of the seed") {
  for (const auto& t : all_tasks()) {
    const auto a = generate_instance(t.id, 0, 1234);
    const auto b = generate_instance(t.id, 0, 1234);
    CHECK(a == b);
    const auto c = generate_instance(t.id, 0, 1235);
    CHECK_FALSE(a == c);
  }
}

TEST_CASE("the oracle rejects a moved answer") {
  for (const auto& t : all_tasks()) {
    auto inst = generate_instance(t.id, 0, 77);
    inst.answer = (inst.answer + 1) % 4;
    CHECK_FALSE(check_instance(inst).empty());
  }
}

TEST_CASE("the oracle rejects a tampered image") {
  for (const auto& t : all_tasks()) {
    auto inst = generate_instance(t.id, 0, 78);
    bool tampered = false;
    for (auto& o : inst.options)
      if (o.kind == OptionKind::Image && !o.image.items.empty()) {
        o.image.items.pop_back();
        tampered = true;
        break;
      }
    if (!tampered) continue;
    INFO(t.code);
    CHECK_FALSE(check_instance(inst).empty());
  }
}

TEST_CASE("unknown levels are rejected") {
  CHECK_THROWS(generate_instance(TaskId::Rotation2D, 9, 1));
}

TEST_CASE("none-of-the-others policy") {
  for (const auto& t : all_tasks())
    for (int level = 0; level < t.levels; ++level) {
      const auto p = none_policy(t.id, level);
      CHECK(p.rate >= 0);
      CHECK(p.rate <= 1);
      CHECK(p.correct_rate >= 0);
      CHECK(p.correct_rate <= 1);
    }
  Rng rng(1);
  CHECK(draw_none_mode({0.0, 1.0}, rng) == NoneMode::Off);
  CHECK(draw_none_mode({1.0, 1.0}, rng) == NoneMode::NoneCorrect);
  CHECK(draw_none_mode({1.0, 0.0}, rng) == NoneMode::WithPositive);
}

TEST_CASE("model codecs round trip") {
  Rng rng(4);
  const auto g = create_supported_stack({3, 2, 3}, 0.6, rng);
  CHECK(grid_from_json(to_json(g)) == g);
  const auto w = random_block_world({3, 3, 3}, {1, 2, 3}, rng);
  CHECK(block_world_from_json(to_json(w)) == w);
  const auto m = random_arrow_map(4, 4, {1, 2}, rng);
  CHECK(arrow_map_from_json(to_json(m)) == m);
  const auto folds = random_folds(5, 6, 3, rng);
  CHECK(fold_ops_from_json(to_json(folds)) == folds);
  const auto comp = random_composite(3, rng);
  CHECK(composite_from_json(to_json(comp)) == comp);
}

TEST_CASE("part corpus entries are connected and distinct") {
  const auto& parts = part_corpus();
  REQUIRE(parts.size() >= 20);
  std::set<std::string> keys;
  for (const auto& p : parts) {
    CHECK(p.count() >= 4);
    CHECK(is_connected6(p.cells()));
    keys.insert(p.key());
  }
  CHECK(keys.size() == parts.size());
}
