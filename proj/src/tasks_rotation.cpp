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

// ---------------------------------------------------------------------------
// 2D rotation

std::vector<Grid2D> grid_rotations(const Grid2D& g) {
  return {rotate_grid(g, 1), rotate_grid(g, 2), rotate_grid(g, 3)};
}

PatternCell random_cell(bool glyph, Rng& rng) {
  if (!glyph) return {rng.uniform_int(1, kPaletteSize - 1), 0};
  return canonical({kGlyphBase + rng.uniform_int(0, 2 * kGlyphCount - 1), rng.uniform_int(0, 3)});
}

}  // namespace

PuzzleInstance generate_2d_rotation(int level, Rng& rng) {
  const auto& p = level_params(TaskId::Rotation2D, level);
  const int rows = p["rows"], cols = p["cols"], min_cells = p["min_cells"];
  const double fill = p["fill"];
  const bool glyph = p["pattern"] == "glyph";
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    Grid2D g(rows, cols);
    int filled = 0;
    for (auto& c : g.cells)
      if (rng.chance(fill)) {
        c = random_cell(glyph, rng);
        ++filled;
      }
    if (filled < min_cells) continue;
    g.marker = static_cast<Corner>(rng.uniform_int(0, 3));
    const auto rots = grid_rotations(g);
    std::set<std::string> rot_digests;
    for (const auto& r : rots) rot_digests.insert(digest(render_grid2d(r, style())));
    if (rot_digests.size() != 3 || rot_digests.count(digest(render_grid2d(g, style())))) continue;

    struct Candidate {
      Grid2D grid;
      std::string tag, explanation;
    };
    std::vector<Candidate> reflections = {
        {flip_grid(g, FlipAxis::Horizontal), "mirrored", "This is a left-right mirror image, which no rotation can produce."},
        {flip_grid(g, FlipAxis::Vertical), "mirrored", "This is a top-bottom mirror image, which no rotation can produce."},
        {flip_grid(rots[0], FlipAxis::Horizontal), "mirrored", "This is a rotated grid that was also mirrored."},
        {flip_grid(rots[0], FlipAxis::Vertical), "mirrored", "This is a rotated grid that was also mirrored."}};
    std::vector<Candidate> internal;
    if (glyph) {
      for (int k = 0; k < 3; ++k) {
        Grid2D r = rots[static_cast<std::size_t>(k)];
        std::vector<std::size_t> cells;
        for (std::size_t i = 0; i < r.cells.size(); ++i)
          if (r.cells[i] && pattern_period(r.cells[i]->id) > 1) cells.push_back(i);
        if (cells.empty()) continue;
        const std::size_t i = rng.pick(cells);
        r.cells[i] = rotated(*r.cells[i], rng.uniform_int(1, 3));
        internal.push_back({r, "pattern-rotated", "The grid is rotated but one tile was turned on its own."});
      }
    }
    rng.shuffle(reflections);
    rng.shuffle(internal);
    std::vector<Candidate> pool;
    if (!internal.empty()) {
      pool.push_back(internal.front());
      pool.insert(pool.end(), reflections.begin(), reflections.end());
    } else {
      pool = reflections;
    }
    std::set<std::string> used = rot_digests;
    used.insert(digest(render_grid2d(g, style())));
    std::vector<Option> distractors;
    for (const auto& c : pool) {
      Document d = render_grid2d(c.grid, style());
      if (!used.insert(digest(d)).second) continue;
      distractors.push_back(image_option(std::move(d), c.tag, c.explanation, {{"grid", to_json(c.grid)}}));
      if (distractors.size() == 3) break;
    }
    if (distractors.size() < 3) continue;
    const int k = rng.uniform_int(1, 3);
    const Grid2D& pos = rots[static_cast<std::size_t>(k - 1)];
    Option positive = image_option(render_grid2d(pos, style()), "correct",
                                   "The grid is rotated " + std::to_string(90 * k) + " degrees clockwise.",
                                   {{"grid", to_json(pos)}});
    const std::string question =
        std::string("The first image shows a grid of ") + (glyph ? "patterned tiles" : "coloured squares") +
        " with a red marker in one corner. Which option shows the same grid after a rotation within the "
        "plane of the page, without flipping it over?";
    PuzzleInstance inst = assemble_instance(question, {render_grid2d(g, style())}, std::move(positive),
                                            std::move(distractors), NoneMode::Off, rng);
    inst.model = {{"reference", to_json(g)}};
    return inst;
  }
  throw Error("generate_2d_rotation: resample budget exhausted");
}

std::vector<std::string> check_2d_rotation(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  const Grid2D ref = grid2d_from_json(inst.model.at("reference"));
  if (inst.references.size() != 1) errs.push_back("expected one reference image");
  expect_reference(inst, 0, render_grid2d(ref, style()), errs);
  std::set<std::string> rot;
  for (const auto& r : grid_rotations(ref)) rot.insert(digest(render_grid2d(r, style())));
  std::vector<std::optional<bool>> verdicts(4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& o = inst.options[i];
    if (is_none(o)) continue;
    const Grid2D g = grid2d_from_json(o.model.at("grid"));
    const Document d = render_grid2d(g, style());
    expect_image(o, d, option_name(i), errs);
    verdicts[i] = rot.count(digest(d)) > 0;
  }
  judge(inst, verdicts, errs);
  return errs;
}

// ---------------------------------------------------------------------------
// 3D rotation

namespace {

OccupancyGrid tight(const OccupancyGrid& g) { return OccupancyGrid::fit(g.cells()); }

std::set<std::string> orbit_keys(const OccupancyGrid& g) {
  std::set<std::string> seen;
  std::vector<OccupancyGrid> frontier = {tight(g)};
  seen.insert(frontier[0].key());
  while (!frontier.empty()) {
    OccupancyGrid cur = frontier.back();
    frontier.pop_back();
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      OccupancyGrid n = tight(rotate_stack(cur, a, 1));
      if (seen.insert(n.key()).second) frontier.push_back(n);
    }
  }
  return seen;
}

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

OccupancyGrid random_rotation(const OccupancyGrid& g, Rng& rng, std::string* how = nullptr) {
  const Axis a = static_cast<Axis>(rng.uniform_int(0, 2));
  const int k = rng.uniform_int(1, 3);
  if (how) *how = std::to_string(90 * k) + " degrees about the " + axis_name(a) + " axis";
  return rotate_stack(g, a, k);
}

OccupancyGrid connected_stack(Dims dims, double fill, Rng& rng) {
  return connect_isolated_regions(create_supported_stack(dims, fill, rng));
}

}  // namespace

PuzzleInstance generate_3d_rotation(int level, Rng& rng) {
  const auto& p = level_params(TaskId::Rotation3D, level);
  const Dims dims{p["dims"][0], p["dims"][1], p["dims"][2]};
  const double fill = p["fill"];
  const int min_cubes = p["min_cubes"];
  const NoneMode mode = draw_none_mode(none_policy(TaskId::Rotation3D, level), rng);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    const OccupancyGrid g = connected_stack(dims, fill, rng);
    if (g.count() < min_cubes) continue;
    const auto orbit = orbit_keys(g);
    const auto mirror_orbit = orbit_keys(mirror_stack(g));
    if (orbit.count(*mirror_orbit.begin())) continue;

    std::string how;
    const OccupancyGrid pos = random_rotation(g, rng, &how);
    if (tight(pos).key() == tight(g).key()) continue;

    std::vector<Option> distractors;
    std::set<std::string> used = {digest(render_isometric(g, style())), digest(render_isometric(pos, style()))};
    auto add = [&](const OccupancyGrid& grid, const std::string& tag, const std::string& why) {
      Document d = render_isometric(grid, style());
      if (!used.insert(digest(d)).second) return false;
      distractors.push_back(image_option(std::move(d), tag, why, {{"grid", to_json(grid)}}));
      return true;
    };
    auto cells = g.cells();
    OccupancyGrid removed = g;
    removed.set(rng.pick(cells), false);
    bool ok = add(random_rotation(removed, rng), "cube-removed",
                  "One cube is missing, so this stack has " + std::to_string(g.count() - 1) + " cubes instead of " +
                      std::to_string(g.count()) + ".");
    for (int tries = 0; ok && distractors.size() < 3 && tries < kResampleBudget; ++tries)
      add(mirror_stack(random_rotation(g, rng)), "mirrored", "This is the mirror image of the stack, which no rotation can produce.");
    if (!ok || distractors.size() < 3) continue;

    Option positive = image_option(render_isometric(pos, style()), "correct",
                                   "The stack is rotated " + how + ".", {{"grid", to_json(pos)}});
    const std::string question =
        "The first image shows a stack of unit cubes. Which option shows the same stack after a rotation in "
        "space (the stack may be turned about any axis but not mirrored)?";
    PuzzleInstance inst = assemble_instance(question, {render_isometric(g, style())}, std::move(positive),
                                            std::move(distractors), mode, rng);
    inst.model = {{"reference", to_json(g)}};
    return inst;
  }
  throw Error("generate_3d_rotation: resample budget exhausted");
}

std::vector<std::string> check_3d_rotation(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  const OccupancyGrid ref = grid_from_json(inst.model.at("reference"));
  if (inst.references.size() != 1) errs.push_back("expected one reference image");
  expect_reference(inst, 0, render_isometric(ref, style()), errs);
  const auto orbit = orbit_keys(ref);
  std::vector<std::optional<bool>> verdicts(4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& o = inst.options[i];
    if (is_none(o)) continue;
    const OccupancyGrid g = grid_from_json(o.model.at("grid"));
    expect_image(o, render_isometric(g, style()), option_name(i), errs);
    verdicts[i] = orbit.count(tight(g).key()) > 0;
    if (o.tag == "cube-removed" && g.count() != ref.count() - 1)
      errs.push_back(option_name(i) + " should have exactly one cube fewer than the reference");
  }
  judge(inst, verdicts, errs);
  return errs;
}

// ---------------------------------------------------------------------------
// Three-view projection

namespace {

OccupancyGrid box_union(Dims dims, const std::vector<std::array<int, 6>>& boxes,
                        const std::vector<std::array<int, 6>>& cuts) {
  OccupancyGrid g(dims);
  auto paint = [&](const std::array<int, 6>& b, bool v) {
    for (int z = b[4]; z < b[5]; ++z)
      for (int y = b[2]; y < b[3]; ++y)
        for (int x = b[0]; x < b[1]; ++x)
          if (g.in_bounds(x, y, z)) g.set(x, y, z, v);
  };
  for (const auto& b : boxes) paint(b, true);
  for (const auto& c : cuts) paint(c, false);
  return g;
}

OccupancyGrid make_part(int index) {
  Rng r(mix64(0x9a27c0f5ULL + static_cast<std::uint64_t>(index)));
  const int X = r.uniform_int(3, 5), Y = r.uniform_int(3, 4), Z = r.uniform_int(2, 4);
  const Dims d{X, Y, Z};
  switch (index % 3) {
    case 0: {  // bracket
      const int xw = r.uniform_int(0, X - 2);
      std::vector<std::array<int, 6>> boxes = {{0, X, 0, Y, 0, 1}, {xw, X, Y - 1, Y, 0, Z}};
      if (r.chance(0.6)) boxes.push_back({r.uniform_int(xw, X - 1), X, Y - 2, Y - 1, 1, 2});
      std::vector<std::array<int, 6>> cuts;
      if (r.chance(0.5)) cuts.push_back({0, r.uniform_int(1, X - 1), 0, 1, 0, 1});
      return box_union(d, boxes, cuts);
    }
    case 1: {  // slotted block
      const int xs = r.uniform_int(1, X - 1);
      const int ys = r.uniform_int(0, Y - 1);
      std::vector<std::array<int, 6>> cuts = {{0, xs, 0, Y, Z - 1, Z}, {0, X, ys, ys + 1, Z - 1, Z}};
      if (r.chance(0.5)) cuts.push_back({X - 1, X, 0, r.uniform_int(1, Y - 1), 0, Z});
      return box_union(d, {{0, X, 0, Y, 0, Z}}, cuts);
    }
    default: {  // plate with bosses
      std::vector<std::array<int, 6>> boxes = {{0, X, 0, Y, 0, 1}};
      const int bosses = r.uniform_int(1, 2);
      for (int i = 0; i < bosses; ++i) {
        const int bx = r.uniform_int(1, X - 1), by = r.uniform_int(0, Y - 1);
        boxes.push_back({bx, std::min(X, bx + r.uniform_int(1, 2)), by, by + 1, 1, r.uniform_int(2, Z)});
      }
      std::vector<std::array<int, 6>> cuts;
      if (r.chance(0.5)) {
        const int hx = r.uniform_int(0, X - 1), hy = r.uniform_int(0, Y - 1);
        cuts.push_back({hx, hx + 1, hy, hy + 1, 0, 1});
      }
      return box_union(d, boxes, cuts);
    }
  }
}

bool part_usable(const OccupancyGrid& part) {
  if (part.count() < 4 || !is_connected6(part.cells())) return false;
  const Document left = render_line_drawing(part, View::Left, style());
  const bool has_internal =
      std::any_of(left.items.begin(), left.items.end(), [](const Primitive& p) { return p.role == "internal"; });
  return has_internal && digest(flip_document(left)) != digest(left) &&
         digest(rotate_document(left, 1)) != digest(left);
}

}  // namespace

const std::vector<OccupancyGrid>& part_corpus() {
  static const std::vector<OccupancyGrid> kCorpus = [] {
    constexpr std::size_t kSize = 36;
    std::vector<OccupancyGrid> out;
    std::set<std::string> keys;
    for (int i = 0; out.size() < kSize; ++i) {
      if (i > 4096) throw Error("part_corpus: could not build enough parts");
      OccupancyGrid part = make_part(i);
      if (part_usable(part) && keys.insert(part.key()).second) out.push_back(std::move(part));
    }
    return out;
  }();
  return kCorpus;
}

namespace {

std::vector<Cell> pick_marks(const OccupancyGrid& g, int count, Rng& rng) {
  std::vector<Cell> visible;
  for (const auto& c : g.cells())
    if (visible_in_view(g, View::Left, c)) visible.push_back(c);
  if (static_cast<int>(visible.size()) < count) return {};
  rng.shuffle(visible);
  std::vector<Cell> out(visible.begin(), visible.begin() + count);
  std::sort(out.begin(), out.end());
  return out;
}

json cells_json(const std::vector<Cell>& cells) {
  json out = json::array();
  for (const auto& c : cells) out.push_back({c.x, c.y, c.z});
  return out;
}

std::vector<Cell> cells_from(const json& j) {
  std::vector<Cell> out;
  for (const auto& c : j) out.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<int>()});
  return out;
}

View view_from(const std::string& s) {
  for (View v : {View::Front, View::Top, View::Left, View::Right})
    if (s == to_string(v)) return v;
  throw Error("unknown view " + s);
}

ViewTransform transform_from(const std::string& s) {
  for (ViewTransform t : {ViewTransform::DeleteInternalLine, ViewTransform::Rotate90, ViewTransform::Flip})
    if (s == to_string(t)) return t;
  throw Error("unknown view transform " + s);
}

PuzzleInstance three_view_stack(int level, Rng& rng) {
  const auto& p = level_params(TaskId::ThreeView, level);
  const Dims dims{p["dims"][0], p["dims"][1], p["dims"][2]};
  const double fill = p["fill"];
  const int min_cubes = p["min_cubes"], mark_count = p["marks"];
  const NoneMode mode = draw_none_mode(none_policy(TaskId::ThreeView, level), rng);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    const OccupancyGrid g = connected_stack(dims, fill, rng);
    if (g.count() < min_cubes) continue;
    const auto marks = pick_marks(g, mark_count, rng);
    if (marks.empty()) continue;
    const Document truth = render_view(g, View::Left, style(), marks);
    std::set<std::string> used = {digest(truth)};
    std::vector<Option> distractors;
    auto add = [&](View v, const std::vector<Cell>& mk, const std::string& tag, const std::string& why) {
      Document d = render_view(g, v, style(), mk);
      if (!used.insert(digest(d)).second) return;
      distractors.push_back(image_option(std::move(d), tag, why, {{"view", to_string(v)}, {"marks", cells_json(mk)}}));
    };
    add(View::Right, marks, "right-view", "This is the view from the right side, not the left.");
    for (int tries = 0; tries < 8 && distractors.size() < 3; ++tries) {
      const auto other = pick_marks(g, mark_count, rng);
      if (other == marks) continue;
      if (distractors.size() < 2)
        add(View::Left, other, "re-marked", "The outline is right but the red cells belong to other cubes.");
      else
        add(View::Right, other, "re-marked-right", "This is the right-side view with the red cells on other cubes.");
    }
    if (distractors.size() < 3) continue;
    Option positive = image_option(truth, "correct", "This is the left view with the marked cubes in red.",
                                   {{"view", "left"}, {"marks", cells_json(marks)}});
    const std::string question =
        "The images show a stack of unit cubes: an isometric drawing, its top view and its front view. Some cubes "
        "are painted red, and they appear red in any view where they are visible. In the isometric drawing the "
        "front of the stack faces the lower left. Which option is the left view of the stack, as seen from its "
        "left side?";
    std::vector<Document> refs = {render_isometric(g, style(), marks), render_view(g, View::Top, style(), marks),
                                  render_view(g, View::Front, style(), marks)};
    PuzzleInstance inst =
        assemble_instance(question, std::move(refs), std::move(positive), std::move(distractors), mode, rng);
    inst.model = {{"source", "stack"}, {"grid", to_json(g)}, {"marks", cells_json(marks)}};
    return inst;
  }
  throw Error("generate_three_view: resample budget exhausted");
}

PuzzleInstance three_view_part(int level, Rng& rng) {
  const NoneMode mode = draw_none_mode(none_policy(TaskId::ThreeView, level), rng);
  const auto& corpus = part_corpus();
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    const int index = rng.uniform_int(0, static_cast<int>(corpus.size()) - 1);
    const OccupancyGrid& part = corpus[static_cast<std::size_t>(index)];
    const Document truth = render_line_drawing(part, View::Left, style());
    std::vector<std::size_t> internal;
    for (std::size_t i = 0; i < truth.items.size(); ++i)
      if (truth.items[i].role == "internal") internal.push_back(i);
    if (internal.empty()) continue;
    const std::size_t removed = rng.pick(internal);
    Document deleted = truth;
    deleted.items.erase(deleted.items.begin() + static_cast<std::ptrdiff_t>(removed));
    std::vector<Option> distractors = {
        image_option(std::move(deleted), "line-deleted", "One visible edge line is missing from this drawing.",
                     {{"transform", to_string(ViewTransform::DeleteInternalLine)}, {"removed", removed}}),
        image_option(transform_view_drawing(truth, ViewTransform::Rotate90, rng), "rotated",
                     "This is the left view turned by 90 degrees.",
                     {{"transform", to_string(ViewTransform::Rotate90)}}),
        image_option(transform_view_drawing(truth, ViewTransform::Flip, rng), "flipped",
                     "This is the left view flipped left to right.", {{"transform", to_string(ViewTransform::Flip)}})};
    if (!distinct_images({&truth, &distractors[0].image, &distractors[1].image, &distractors[2].image})) continue;
    rng.shuffle(distractors);
    Option positive = image_option(truth, "correct", "This drawing matches the part seen from the left.",
                                   {{"transform", "none"}});
    const std::string question =
        "The images show a machined part: an isometric drawing, its front view and its top view, drawn as "
        "outlines of the visible edges. In the isometric drawing the front of the part faces the lower left. "
        "Which option is the left view of the part, as seen from its left side?";
    std::vector<Document> refs = {render_isometric(part, style()), render_line_drawing(part, View::Front, style()),
                                  render_line_drawing(part, View::Top, style())};
    PuzzleInstance inst =
        assemble_instance(question, std::move(refs), std::move(positive), std::move(distractors), mode, rng);
    inst.model = {{"source", "part-corpus"}, {"part_index", index}, {"part", to_json(part)}};
    return inst;
  }
  throw Error("generate_three_view: resample budget exhausted");
}

}  // namespace

PuzzleInstance generate_three_view(int level, Rng& rng) {
  const auto& p = level_params(TaskId::ThreeView, level);
  return p["source"] == "stack" ? three_view_stack(level, rng) : three_view_part(level, rng);
}

std::vector<std::string> check_three_view(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  std::vector<std::optional<bool>> verdicts(4);
  if (inst.references.size() != 3) errs.push_back("expected three reference images");
  if (inst.model.at("source") == "stack") {
    const OccupancyGrid g = grid_from_json(inst.model.at("grid"));
    const auto marks = cells_from(inst.model.at("marks"));
    for (const auto& m : marks)
      if (!visible_in_view(g, View::Left, m)) errs.push_back("a marked cube is hidden in the left view");
    expect_reference(inst, 0, render_isometric(g, style(), marks), errs);
    expect_reference(inst, 1, render_view(g, View::Top, style(), marks), errs);
    expect_reference(inst, 2, render_view(g, View::Front, style(), marks), errs);
    const std::string truth = digest(render_view(g, View::Left, style(), marks));
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& o = inst.options[i];
      if (is_none(o)) continue;
      const Document d = render_view(g, view_from(o.model.at("view")), style(), cells_from(o.model.at("marks")));
      expect_image(o, d, option_name(i), errs);
      verdicts[i] = digest(d) == truth;
    }
  } else {
    const OccupancyGrid part = grid_from_json(inst.model.at("part"));
    const int index = inst.model.at("part_index");
    if (index < 0 || index >= static_cast<int>(part_corpus().size()) ||
        !(part_corpus()[static_cast<std::size_t>(index)] == part))
      errs.push_back("part does not match the corpus entry");
    expect_reference(inst, 0, render_isometric(part, style()), errs);
    expect_reference(inst, 1, render_line_drawing(part, View::Front, style()), errs);
    expect_reference(inst, 2, render_line_drawing(part, View::Top, style()), errs);
    const Document truth = render_line_drawing(part, View::Left, style());
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& o = inst.options[i];
      if (is_none(o)) continue;
      Document d = truth;
      const std::string t = o.model.at("transform");
      if (t == to_string(ViewTransform::DeleteInternalLine)) {
        const std::size_t removed = o.model.at("removed");
        if (removed >= d.items.size() || d.items[removed].role != "internal")
          errs.push_back(option_name(i) + " deletes a line that is not internal");
        else
          d.items.erase(d.items.begin() + static_cast<std::ptrdiff_t>(removed));
      } else if (t != "none") {
        Rng unused(0);
        d = transform_view_drawing(truth, transform_from(t), unused);
      }
      expect_image(o, d, option_name(i), errs);
      verdicts[i] = digest(d) == digest(truth);
    }
  }
  judge(inst, verdicts, errs);
  return errs;
}

}  // namespace spatialviz
