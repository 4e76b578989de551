#include <algorithm>
#include <set>

#include "spatialviz/dataset.hpp"
#include "tasks_internal.hpp"

namespace spatialviz {

using nlohmann::json;
using namespace detail;

namespace {

const RenderStyle& style() {
  static const RenderStyle s = default_style();
  return s;
}

const std::vector<int> kArrowColors = {1, 2, 3, 4, 5};
const std::vector<int> kBlockColors = {1, 2, 3, 4, 5, 6};

template <typename Op, typename F>
std::string join_ops(const std::vector<Op>& ops, F&& fn) {
  std::string out;
  for (std::size_t i = 0; i < ops.size(); ++i) out += (i ? ", then " : "") + fn(ops[i]);
  return out;
}

std::string arrow_text(const std::vector<ArrowOp>& ops, bool with_position) {
  return join_ops(ops, [&](const ArrowOp& op) { return describe(op, with_position); });
}

std::string block_text(const std::vector<BlockOp>& ops) {
  return join_ops(ops, [](const BlockOp& op) { return describe(op); });
}

RelDir random_rel(Rng& rng) { return static_cast<RelDir>(rng.uniform_int(0, 3)); }

ArrowOp mutate(ArrowOp op, int max_step, Rng& rng) {
  if (rng.chance(0.5)) {
    RelDir r = op.rel;
    while (r == op.rel) r = random_rel(rng);
    op.rel = r;
  } else {
    int s = op.steps;
    while (s == op.steps) s = rng.uniform_int(1, max_step);
    op.steps = s;
  }
  return op;
}

BlockOp mutate(BlockOp op, int, Rng& rng) {
  int d = op.direction;
  while (d == op.direction) d = rng.uniform_int(0, 5);
  op.direction = d;
  return op;
}

/// Other valid sequences from the same start whose endpoints differ from the
/// true one and from each other. One-op mutations come first.
template <typename State, typename Op>
std::vector<Trace<State, Op>> wrong_sequences(const State& start, const std::vector<Op>& truth, int max_step,
                                              Rng& rng) {
  const auto real = replay(start, truth);
  std::set<std::string> ends = {state_key(real->states.back())};
  std::vector<Trace<State, Op>> out;
  for (int tries = 0; tries < kResampleBudget && out.size() < 3; ++tries) {
    std::optional<Trace<State, Op>> t;
    if (tries < kResampleBudget / 2) {
      auto ops = truth;
      auto& op = ops[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(ops.size()) - 1))];
      op = mutate(op, max_step, rng);
      t = replay(start, ops);
    } else {
      t = generate_sequence(start, static_cast<int>(truth.size()), state_key(real->states.back()), rng);
    }
    if (!t || !ends.insert(state_key(t->states.back())).second) continue;
    out.push_back(*t);
  }
  return out;
}

bool has_swap(const ArrowMapState& start, const std::vector<ArrowOp>& ops) {
  ArrowMapState s = start;
  bool swapped = false;
  for (const auto& op : ops) {
    auto r = arrowmap_move(s, op.x, op.y, op.rel, op.steps);
    if (!r) return false;
    swapped = swapped || r->swapped;
    s = r->state;
  }
  return swapped;
}

const char* kArrowRules =
    "Each move names a direction relative to where the arrow currently points and a number of cells: forward "
    "moves it that many cells ahead, backward moves it behind and turns it around, left or right moves it "
    "sideways and turns it to face that way.";

}  // namespace

PuzzleInstance generate_arrow_moving(int level, Rng& rng) {
  const auto& p = level_params(TaskId::ArrowMoving, level);
  const int width = p["width"], height = p["height"], steps = p["steps"];
  const int max_step = std::min(width, height);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    if (p["arrows"] == "single") {
      const ArrowState start{width, height, rng.uniform_int(0, width - 1), rng.uniform_int(0, height - 1),
                             rng.uniform_int(0, 3)};
      const ArrowTrace trace = generate_sequence(start, steps, state_key(start), rng);
      const auto wrong = wrong_sequences(start, trace.ops, max_step, rng);
      if (wrong.size() < 3) continue;
      std::vector<Option> distractors;
      for (const auto& w : wrong)
        distractors.push_back(text_option(arrow_text(w.ops, false), "wrong-endpoint",
                                          "These moves leave the arrow somewhere else or facing another way.",
                                          {{"ops", to_json(w.ops)}}));
      Option positive = text_option(arrow_text(trace.ops, false), "correct",
                                    "Replaying these moves from the start reaches the final picture.",
                                    {{"ops", to_json(trace.ops)}});
      const std::string question =
          std::string("The first image shows an arrow on a grid before a sequence of moves and the second image "
                      "shows it afterwards. ") +
          kArrowRules + " Which sequence of moves turns the first picture into the second?";
      PuzzleInstance inst = assemble_instance(
          question, {render_arrow(start, style()), render_arrow(trace.states.back(), style())}, std::move(positive),
          std::move(distractors), NoneMode::Off, rng);
      inst.model = {{"mode", "single"}, {"start", to_json(start)}, {"end", to_json(trace.states.back())}};
      return inst;
    }

    const ArrowMapState start = random_arrow_map(width, height, kArrowColors, rng);
    int arrows = 0;
    for (const auto& c : start.cells) arrows += c ? 1 : 0;
    if (arrows < 3) continue;
    const ArrowMapTrace trace = generate_sequence(start, steps, state_key(start), rng);
    if (p.value("require_swap", false) && !has_swap(start, trace.ops)) continue;
    const auto wrong = wrong_sequences(start, trace.ops, max_step, rng);
    if (wrong.size() < 3) continue;
    std::set<std::string> used = {digest(render_arrow_map(trace.states.back(), style()))};
    std::vector<Option> distractors;
    for (const auto& w : wrong) {
      Document d = render_arrow_map(w.states.back(), style());
      if (!used.insert(digest(d)).second) continue;
      distractors.push_back(image_option(std::move(d), "wrong-endpoint",
                                         "This is where a different sequence of moves ends.",
                                         {{"state", to_json(w.states.back())}}));
    }
    if (distractors.size() < 3) continue;
    Option positive = image_option(render_arrow_map(trace.states.back(), style()), "correct",
                                   "Replaying the moves, including the swap, gives this arrangement.",
                                   {{"state", to_json(trace.states.back())}});
    const std::string question =
        std::string("The image shows coloured arrows on a grid. Cells are named (column, row), counted from 0 at "
                    "the bottom-left corner. ") +
        kArrowRules +
        " When an arrow lands on a cell that holds another arrow, the two swap places: the other arrow moves to "
        "the cell just left, turning as if it had made that step itself. The moves are: " +
        arrow_text(trace.ops, true) + ". Which option shows the grid after all the moves?";
    PuzzleInstance inst = assemble_instance(question, {render_arrow_map(start, style())}, std::move(positive),
                                            std::move(distractors), NoneMode::Off, rng);
    inst.model = {{"mode", "multi"}, {"start", to_json(start)}, {"ops", to_json(trace.ops)}};
    return inst;
  }
  throw Error("generate_arrow_moving: resample budget exhausted");
}

std::vector<std::string> check_arrow_moving(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  std::vector<std::optional<bool>> verdicts(4);
  if (inst.model.at("mode") == "single") {
    const ArrowState start = arrow_state_from_json(inst.model.at("start"));
    const ArrowState end = arrow_state_from_json(inst.model.at("end"));
    expect_reference(inst, 0, render_arrow(start, style()), errs);
    expect_reference(inst, 1, render_arrow(end, style()), errs);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& o = inst.options[i];
      if (is_none(o)) continue;
      const auto ops = arrow_ops_from_json(o.model.at("ops"));
      if (o.text != arrow_text(ops, false)) errs.push_back(option_name(i) + " text does not match its moves");
      const auto t = replay(start, ops);
      if (!t) errs.push_back(option_name(i) + " contains an invalid move");
      verdicts[i] = t && state_key(t->states.back()) == state_key(end);
    }
  } else {
    const ArrowMapState start = arrow_map_from_json(inst.model.at("start"));
    const auto ops = arrow_ops_from_json(inst.model.at("ops"));
    expect_reference(inst, 0, render_arrow_map(start, style()), errs);
    const auto t = replay(start, ops);
    if (!t) return {"the given moves do not replay"};
    if (inst.question.find(arrow_text(ops, true)) == std::string::npos)
      errs.push_back("question does not list the moves");
    if (inst.level > 0 && !has_swap(start, ops)) errs.push_back("the moves contain no swap");
    const std::string end = state_key(t->states.back());
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& o = inst.options[i];
      if (is_none(o)) continue;
      const ArrowMapState s = arrow_map_from_json(o.model.at("state"));
      expect_image(o, render_arrow_map(s, style()), option_name(i), errs);
      verdicts[i] = state_key(s) == end;
    }
  }
  judge(inst, verdicts, errs);
  return errs;
}

PuzzleInstance generate_block_moving(int level, Rng& rng) {
  const auto& p = level_params(TaskId::BlockMoving, level);
  const Dims dims{p["dims"][0], p["dims"][1], p["dims"][2]};
  const int steps = p["steps"];
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    const BlockWorld start = random_block_world(dims, kBlockColors, rng);
    if (start.scene.size() < 3) continue;
    BlockTrace trace;
    try {
      trace = generate_sequence(start, steps, state_key(start), rng);
    } catch (const Error&) {
      continue;
    }
    const auto wrong = wrong_sequences(start, trace.ops, 0, rng);
    if (wrong.size() < 3) continue;
    std::vector<Option> distractors;
    for (const auto& w : wrong)
      distractors.push_back(text_option(block_text(w.ops), "wrong-endpoint",
                                        "These moves end with the cubes in a different arrangement.",
                                        {{"ops", to_json(w.ops)}}));
    Option positive = text_option(block_text(trace.ops), "correct",
                                  "Replaying these moves, letting cubes fall after each one, gives the final scene.",
                                  {{"ops", to_json(trace.ops)}});
    const std::string question =
        "The first image shows coloured cubes before a sequence of moves and the second image shows them "
        "afterwards. Positions are (x, y, z) with x to the right along the front edge, y away from the viewer and "
        "z up, counted from 0 at the front-left bottom corner. Each move shifts the cube at a position by one cell; "
        "if that cell holds a cube the two swap, and after every move any unsupported cube falls. Which sequence "
        "of moves turns the first scene into the second?";
    PuzzleInstance inst = assemble_instance(
        question, {render_isometric(start.scene, dims, style()), render_isometric(trace.states.back().scene, dims, style())},
        std::move(positive), std::move(distractors), NoneMode::Off, rng);
    inst.model = {{"start", to_json(start)}, {"end", to_json(trace.states.back())}};
    return inst;
  }
  throw Error("generate_block_moving: resample budget exhausted");
}

std::vector<std::string> check_block_moving(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  const BlockWorld start = block_world_from_json(inst.model.at("start"));
  const BlockWorld end = block_world_from_json(inst.model.at("end"));
  expect_reference(inst, 0, render_isometric(start.scene, start.dims, style()), errs);
  expect_reference(inst, 1, render_isometric(end.scene, end.dims, style()), errs);
  std::vector<std::optional<bool>> verdicts(4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& o = inst.options[i];
    if (is_none(o)) continue;
    const auto ops = block_ops_from_json(o.model.at("ops"));
    if (o.text != block_text(ops)) errs.push_back(option_name(i) + " text does not match its moves");
    const auto t = replay(start, ops);
    if (!t) {
      errs.push_back(option_name(i) + " contains an invalid move");
      verdicts[i] = false;
      continue;
    }
    for (const auto& s : t->states)
      if (!is_supported(s.scene)) errs.push_back(option_name(i) + " passes through an unsupported scene");
    verdicts[i] = state_key(t->states.back()) == state_key(end);
  }
  judge(inst, verdicts, errs);
  return errs;
}

}  // namespace spatialviz
