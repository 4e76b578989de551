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
// Paper folding

struct FoldSetup {
  std::vector<FoldOp> folds;
  std::vector<Cell2> punches;  // relative to the folded rectangle
};

json punches_json(const std::vector<Cell2>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back({p.row, p.col});
  return out;
}

std::vector<PaperState> replay_paper(int rows, int cols, const FoldSetup& s) {
  std::vector<PaperState> states = {PaperState(rows, cols)};
  for (const auto& op : s.folds) states.push_back(paper_fold(states.back(), op));
  states.push_back(paper_punch(states.back(), s.punches));
  return states;
}

std::vector<Document> paper_references(const std::vector<PaperState>& states) {
  std::vector<Document> refs;
  for (std::size_t i = 1; i < states.size(); ++i) refs.push_back(render_paper(states[i], style()));
  return refs;
}

HoleGrid swap_lines(const HoleGrid& g, bool rows, int a, int b) {
  HoleGrid out = g;
  const int n = rows ? g.cols : g.rows;
  for (int i = 0; i < n; ++i) {
    if (rows) {
      out.set(a, i, g.at(b, i));
      out.set(b, i, g.at(a, i));
    } else {
      out.set(i, a, g.at(i, b));
      out.set(i, b, g.at(i, a));
    }
  }
  return out;
}

}  // namespace

PuzzleInstance generate_paper_folding(int level, Rng& rng) {
  const auto& p = level_params(TaskId::PaperFolding, level);
  const int rows = p["rows"], cols = p["cols"], steps = p["folds"], hole_count = p["holes"];
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    FoldSetup setup;
    setup.folds = random_folds(rows, cols, steps, rng);
    PaperState folded(rows, cols);
    for (const auto& op : setup.folds) folded = paper_fold(folded, op);
    auto visible = folded.visible_cells();
    if (static_cast<int>(visible.size()) < hole_count) continue;
    rng.shuffle(visible);
    for (int i = 0; i < hole_count; ++i)
      setup.punches.push_back({visible[static_cast<std::size_t>(i)].row - folded.current().row,
                               visible[static_cast<std::size_t>(i)].col - folded.current().col});
    const auto states = replay_paper(rows, cols, setup);
    const PaperState& punched = states.back();
    const HoleGrid truth = paper_unfold(punched);

    std::vector<Cell2> holes, blanks;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) (truth.at(r, c) ? holes : blanks).push_back({r, c});
    struct Candidate {
      HoleGrid grid;
      std::string tag, why;
    };
    std::vector<Candidate> pool;
    for (int i = 0; i < 4; ++i) {
      if (!blanks.empty()) {
        HoleGrid g = truth;
        const Cell2 b = rng.pick(blanks);
        g.set(b.row, b.col, true);
        pool.push_back({g, "hole-added", "This pattern has an extra hole that no layer of the folded paper received."});
      }
      if (holes.size() > 1) {
        HoleGrid g = truth;
        const Cell2 h = rng.pick(holes);
        g.set(h.row, h.col, false);
        pool.push_back({g, "hole-removed", "One of the holes punched through the folded layers is missing."});
      }
      if (!blanks.empty()) {
        HoleGrid g = truth;
        const Cell2 h = rng.pick(holes), b = rng.pick(blanks);
        g.set(h.row, h.col, false);
        g.set(b.row, b.col, true);
        pool.push_back({g, "hole-moved", "One hole sits in the wrong place after unfolding."});
      }
      const bool by_row = rng.chance(0.5);
      const int n = by_row ? rows : cols;
      const int a = rng.uniform_int(0, n - 1), b = rng.uniform_int(0, n - 1);
      if (a != b)
        pool.push_back({swap_lines(truth, by_row, a, b), by_row ? "rows-swapped" : "columns-swapped",
                        "Two lines of holes are exchanged compared with the true unfolding."});
    }
    rng.shuffle(pool);
    std::set<std::string> used = {digest(render_holes(truth, style()))};
    std::vector<Option> distractors;
    for (const auto& c : pool) {
      if (c.grid.count() == 0 || refold_matches(punched, c.grid)) continue;
      Document d = render_holes(c.grid, style());
      if (!used.insert(digest(d)).second) continue;
      distractors.push_back(image_option(std::move(d), c.tag, c.why, {{"holes", to_json(c.grid)}}));
      if (distractors.size() == 3) break;
    }
    if (distractors.size() < 3) continue;
    Option positive = image_option(render_holes(truth, style()), "correct",
                                   "Each hole is mirrored through every fold line in reverse order.",
                                   {{"holes", to_json(truth)}});
    const std::string question =
        "A square sheet of paper is folded as shown step by step, the last fold along a 45 degree line, and then "
        "holes are punched through all layers. Which option shows the sheet after it is completely unfolded?";
    PuzzleInstance inst = assemble_instance(question, paper_references(states), std::move(positive),
                                            std::move(distractors), NoneMode::Off, rng);
    inst.model = {{"rows", rows}, {"cols", cols}, {"folds", to_json(setup.folds)},
                  {"punches", punches_json(setup.punches)}};
    return inst;
  }
  throw Error("generate_paper_folding: resample budget exhausted");
}

std::vector<std::string> check_paper_folding(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  FoldSetup setup;
  setup.folds = fold_ops_from_json(inst.model.at("folds"));
  for (const auto& pt : inst.model.at("punches")) setup.punches.push_back({pt[0].get<int>(), pt[1].get<int>()});
  const auto states = replay_paper(inst.model.at("rows"), inst.model.at("cols"), setup);
  if (setup.folds.empty() || setup.folds.back().direction != FoldDirection::Diagonal)
    errs.push_back("the last fold is not diagonal");
  const auto refs = paper_references(states);
  if (inst.references.size() != refs.size()) errs.push_back("reference strip has the wrong length");
  for (std::size_t i = 0; i < refs.size(); ++i) expect_reference(inst, i, refs[i], errs);
  const PaperState& punched = states.back();
  if (!refold_matches(punched, paper_unfold(punched))) errs.push_back("unfolded pattern does not refold");
  std::vector<std::optional<bool>> verdicts(4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& o = inst.options[i];
    if (is_none(o)) continue;
    const HoleGrid g = hole_grid_from_json(o.model.at("holes"));
    expect_image(o, render_holes(g, style()), option_name(i), errs);
    verdicts[i] = refold_matches(punched, g);
  }
  judge(inst, verdicts, errs);
  return errs;
}

// ---------------------------------------------------------------------------
// Cube nets

namespace {

FaceMap random_faces(const std::string& mode, Rng& rng) {
  FaceMap faces{};
  if (mode == "color") {
    std::vector<int> colors;
    for (int c = 1; c < kPaletteSize; ++c) colors.push_back(c);
    rng.shuffle(colors);
    for (std::size_t i = 0; i < 6; ++i) faces[i] = {colors[i], 0};
  } else if (mode == "glyph") {
    std::vector<int> ids;
    for (int i = 0; i < 2 * kGlyphCount; ++i) ids.push_back(kGlyphBase + i);
    rng.shuffle(ids);
    for (std::size_t i = 0; i < 6; ++i) faces[i] = canonical({ids[i], rng.uniform_int(0, 3)});
  } else {
    std::set<int> seen;
    for (std::size_t i = 0; i < 6;) {
      std::array<int, 9> colors{};
      for (auto& c : colors) c = kDotColors[static_cast<std::size_t>(rng.uniform_int(0, 3))];
      PatternCell cell = make_dot_cell(colors);
      if (pattern_period(cell.id) < 4 || !seen.insert(cell.id).second) continue;
      faces[i++] = rotated(cell, rng.uniform_int(0, 3));
    }
  }
  return faces;
}

json net_json(const NetLayout& layout, const FaceMap& faces) {
  return {{"net", layout.name}, {"face_rotation", layout.face_rotation}, {"faces", to_json(faces)}};
}

struct NetOption {
  NetLayout layout;
  FaceMap faces;
};

NetOption net_from_json(const json& j) {
  NetOption n{canonical_net(j.at("net").get<std::string>()), facemap_from_json(j.at("faces"))};
  n.layout.face_rotation = j.at("face_rotation").get<std::array<int, 6>>();
  return n;
}

CubeModel pivot_cube(const FaceMap& faces) { return fold_net(canonical_net(kPivotNet), faces); }

NetOption random_net(const FaceMap& faces, Rng& rng) {
  const std::string& name = rng.pick(net_names());
  return {equivalent_net(name, faces), faces};
}

std::vector<Face> view_faces(const CornerView& v) {
  std::vector<Face> out;
  for (const auto& s : v.slots) out.push_back(face_from_normal(s.normal));
  return out;
}

}  // namespace

PuzzleInstance generate_cube_unfolding(int level, Rng& rng) {
  const auto& p = level_params(TaskId::CubeUnfolding, level);
  const std::string mode = p["pattern"];
  const NoneMode none = draw_none_mode(none_policy(TaskId::CubeUnfolding, level), rng);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    const FaceMap faces = random_faces(mode, rng);
    const CubeModel cube = pivot_cube(faces);
    const CornerView view = corner_view(cube, rng.uniform_int(1, 8));
    const auto visible = view_faces(view);
    std::vector<Face> hidden;
    for (Face f : kFaces)
      if (std::find(visible.begin(), visible.end(), f) == visible.end()) hidden.push_back(f);

    NetOption pos;
    std::string pos_why;
    if (rng.chance(0.5)) {
      FaceMap shuffled = faces;
      std::vector<PatternCell> hidden_cells;
      for (Face f : hidden) hidden_cells.push_back(faces[static_cast<std::size_t>(f)]);
      rng.shuffle(hidden_cells);
      for (std::size_t i = 0; i < hidden.size(); ++i)
        shuffled[static_cast<std::size_t>(hidden[i])] = rotated(hidden_cells[i], rng.uniform_int(0, 3));
      pos = random_net(shuffled, rng);
      pos_why = "The three visible faces fold into place as shown; the hidden faces cannot be seen.";
    } else {
      pos = random_net(faces, rng);
      pos_why = "This net folds into the same cube.";
    }
    if (!view_consistent(fold_net(pos.layout, pos.faces), view)) continue;

    struct Candidate {
      FaceMap faces;
      std::string tag, why;
    };
    std::vector<Candidate> pool;
    auto swapped = [&](Face a, Face b) {
      FaceMap f = faces;
      std::swap(f[static_cast<std::size_t>(a)], f[static_cast<std::size_t>(b)]);
      return f;
    };
    for (Face v : visible)
      pool.push_back({swapped(v, opposite(v)), "opposite-swapped",
                      "A visible face was exchanged with the face opposite it."});
    for (std::size_t i = 0; i < visible.size(); ++i)
      pool.push_back({swapped(visible[i], visible[(i + 1) % visible.size()]), "face-swapped",
                      "Two faces that meet at the viewed corner are exchanged."});
    if (mode != "color")
      for (Face v : visible) {
        const auto idx = static_cast<std::size_t>(v);
        if (pattern_period(faces[idx].id) == 1) continue;
        FaceMap f = faces;
        f[idx] = rotated(f[idx], rng.uniform_int(1, 3));
        pool.push_back({f, "pattern-rotated", "One visible face carries its pattern turned the wrong way."});
      }
    rng.shuffle(pool);
    std::set<std::string> used = {digest(render_net(pos.layout, pos.faces, style()))};
    std::vector<Option> distractors;
    for (const auto& c : pool) {
      const NetOption n = random_net(c.faces, rng);
      if (view_consistent(fold_net(n.layout, n.faces), view)) continue;
      Document d = render_net(n.layout, n.faces, style());
      if (!used.insert(digest(d)).second) continue;
      distractors.push_back(image_option(std::move(d), c.tag, c.why, net_json(n.layout, n.faces)));
      if (distractors.size() == 3) break;
    }
    if (distractors.size() < 3) continue;
    Option positive =
        image_option(render_net(pos.layout, pos.faces, style()), "correct", pos_why, net_json(pos.layout, pos.faces));
    const std::string question =
        "The first image shows a cube seen from one of its corners. Which option is a net that folds into a cube "
        "that can look exactly like this?";
    PuzzleInstance inst = assemble_instance(question, {render_corner_view(view, style())}, std::move(positive),
                                            std::move(distractors), none, rng);
    inst.model = {{"view", to_json(view)}, {"faces", to_json(faces)}};
    return inst;
  }
  throw Error("generate_cube_unfolding: resample budget exhausted");
}

std::vector<std::string> check_cube_unfolding(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  const CornerView view = corner_view_from_json(inst.model.at("view"));
  const FaceMap faces = facemap_from_json(inst.model.at("faces"));
  if (!(corner_view(pivot_cube(faces), view.corner) == view)) errs.push_back("reference view does not match the cube");
  expect_reference(inst, 0, render_corner_view(view, style()), errs);
  std::vector<std::optional<bool>> verdicts(4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& o = inst.options[i];
    if (is_none(o)) continue;
    const NetOption n = net_from_json(o.model);
    expect_image(o, render_net(n.layout, n.faces, style()), option_name(i), errs);
    verdicts[i] = view_consistent(fold_net(n.layout, n.faces), view);
  }
  judge(inst, verdicts, errs);
  return errs;
}

PuzzleInstance generate_cube_reconstruction(int level, Rng& rng) {
  const auto& p = level_params(TaskId::CubeReconstruction, level);
  const std::string mode = p["pattern"];
  const double variant_b = p["variant_b_rate"];
  const bool opposite_variant = variant_b > 0 && rng.chance(variant_b);
  const NoneMode none = opposite_variant ? NoneMode::Off : draw_none_mode(none_policy(TaskId::CubeReconstruction, level), rng);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    const FaceMap faces = random_faces(mode, rng);
    const NetOption net = random_net(faces, rng);
    const CubeModel cube = fold_net(net.layout, net.faces);
    const Document ref = render_net(net.layout, net.faces, style());

    if (opposite_variant) {
      const Face asked = kFaces[static_cast<std::size_t>(rng.uniform_int(0, 5))];
      const Face opp = opposite_face(cube, asked);
      const int asked_color = cube.face(asked).pattern, answer = cube.face(opp).pattern;
      std::vector<Option> distractors;
      for (Face f : kFaces)
        if (f != asked && f != opp)
          distractors.push_back(text_option(palette_name(cube.face(f).pattern), "adjacent-face",
                                            std::string("The ") + palette_name(cube.face(f).pattern) +
                                                " face shares an edge with the " + palette_name(asked_color) +
                                                " face.",
                                            {{"color", cube.face(f).pattern}}));
      rng.shuffle(distractors);
      distractors.resize(3);
      Option positive = text_option(palette_name(answer), "correct",
                                    std::string("Folding the net puts the ") + palette_name(answer) +
                                        " face opposite the " + palette_name(asked_color) + " face.",
                                    {{"color", answer}});
      const std::string question = std::string("The image shows the net of a cube. When it is folded, which "
                                               "colour is on the face opposite the ") +
                                   palette_name(asked_color) + " face?";
      PuzzleInstance inst =
          assemble_instance(question, {ref}, std::move(positive), std::move(distractors), NoneMode::Off, rng);
      inst.model = {{"variant", "opposite"}, {"net", net_json(net.layout, net.faces)}, {"asked_color", asked_color}};
      return inst;
    }

    std::vector<int> corners = {1, 2, 3, 4, 5, 6, 7, 8};
    rng.shuffle(corners);
    const CornerView truth = corner_view(cube, corners[0]);
    std::set<std::string> used = {digest(render_corner_view(truth, style()))};
    std::vector<Option> distractors;
    for (std::size_t i = 1; i < corners.size() && distractors.size() < 3; ++i) {
      const ViewMirror how = rng.chance(0.5) ? ViewMirror::Diagonal : ViewMirror::Vertical;
      const CornerView mirrored = mirror_view(corner_view(cube, corners[i]), how);
      if (view_consistent(cube, mirrored)) continue;
      Document d = render_corner_view(mirrored, style());
      if (!used.insert(digest(d)).second) continue;
      distractors.push_back(image_option(std::move(d), "mirrored",
                                         "This is a mirror image of a corner view, which no folded cube can show.",
                                         {{"view", to_json(mirrored)}}));
    }
    if (distractors.size() < 3) continue;
    Option positive = image_option(render_corner_view(truth, style()), "correct",
                                   "This is the folded cube seen from one of its corners.", {{"view", to_json(truth)}});
    const std::string question =
        "The first image shows the net of a cube. Which option shows the folded cube seen from one of its "
        "corners?";
    PuzzleInstance inst = assemble_instance(question, {ref}, std::move(positive), std::move(distractors), none, rng);
    inst.model = {{"variant", "corner-view"}, {"net", net_json(net.layout, net.faces)}};
    return inst;
  }
  throw Error("generate_cube_reconstruction: resample budget exhausted");
}

std::vector<std::string> check_cube_reconstruction(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  const NetOption net = net_from_json(inst.model.at("net"));
  const CubeModel cube = fold_net(net.layout, net.faces);
  expect_reference(inst, 0, render_net(net.layout, net.faces, style()), errs);
  std::vector<std::optional<bool>> verdicts(4);
  const bool opposite_variant = inst.model.at("variant") == "opposite";
  int answer_color = -1;
  if (opposite_variant) {
    const int asked_color = inst.model.at("asked_color");
    for (Face f : kFaces)
      if (cube.face(f).pattern == asked_color) answer_color = cube.face(opposite_face(cube, f)).pattern;
    if (answer_color < 0) errs.push_back("asked colour is not on the cube");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& o = inst.options[i];
    if (is_none(o)) continue;
    if (opposite_variant) {
      const int color = o.model.at("color");
      if (o.text != palette_name(color)) errs.push_back(option_name(i) + " text does not name its colour");
      verdicts[i] = color == answer_color;
    } else {
      const CornerView v = corner_view_from_json(o.model.at("view"));
      expect_image(o, render_corner_view(v, style()), option_name(i), errs);
      verdicts[i] = view_consistent(cube, v);
    }
  }
  judge(inst, verdicts, errs);
  return errs;
}

}  // namespace spatialviz
