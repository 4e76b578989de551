#include <algorithm>
#include <cctype>
#include <cstdio>

#include "spatialviz/tasks.hpp"
#include "tasks_internal.hpp"

namespace spatialviz {

using nlohmann::json;
using nlohmann::ordered_json;

const std::vector<TaskInfo>& all_tasks() {
  static const std::vector<TaskInfo> kTasks = {
      {TaskId::Rotation2D, "2DR", "2d_rotation", "2D Rotation", 2, 80},
      {TaskId::Rotation3D, "3DR", "3d_rotation", "3D Rotation", 2, 80},
      {TaskId::ThreeView, "3VP", "three_view", "Three-View Projection", 2, 100},
      {TaskId::PaperFolding, "PF", "paper_folding", "Paper Folding", 3, 120},
      {TaskId::CubeUnfolding, "CU", "cube_unfolding", "Cube Unfolding", 3, 120},
      {TaskId::CubeReconstruction, "CR", "cube_reconstruction", "Cube Reconstruction", 3, 120},
      {TaskId::CrossSection, "CS", "cross_section", "Cross-Section", 3, 120},
      {TaskId::CubeCounting, "CC", "cube_counting", "Cube Counting", 3, 120},
      {TaskId::CubeAssembly, "CA", "cube_assembly", "Cube Assembly", 2, 80},
      {TaskId::ArrowMoving, "AM", "arrow_moving", "Arrow Moving", 2, 80},
      {TaskId::BlockMoving, "BM", "block_moving", "Block Moving", 2, 80},
  };
  return kTasks;
}

const TaskInfo& task_info(TaskId id) {
  for (const auto& t : all_tasks())
    if (t.id == id) return t;
  throw Error("unknown task id");
}

TaskId parse_task(const std::string& name) {
  auto lower = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  const std::string n = lower(name);
  for (const auto& t : all_tasks())
    if (lower(t.code) == n || t.slug == n) return t.id;
  throw Error("unknown task '" + name + "'");
}

const char* to_string(OptionKind k) {
  switch (k) {
    case OptionKind::Image: return "image";
    case OptionKind::Text: return "text";
    case OptionKind::Number: return "number";
  }
  return "?";
}

// ---------------------------------------------------------------------------

const ordered_json& level_table() {
  static const ordered_json kTable = [] {
    ordered_json t;
    t["version"] = 1;
    ordered_json tasks;
    tasks["2DR"] = {{{"rows", 3}, {"cols", 3}, {"pattern", "color"}, {"fill", 0.7}, {"min_cells", 5}},
                    {{"rows", 3}, {"cols", 3}, {"pattern", "glyph"}, {"fill", 0.7}, {"min_cells", 5}}};
    tasks["3DR"] = {{{"dims", {3, 3, 2}}, {"fill", 0.6}, {"min_cubes", 5}, {"none_rate", 0.8}, {"none_correct_rate", 0.1}},
                    {{"dims", {4, 4, 3}}, {"fill", 0.55}, {"min_cubes", 8}, {"none_rate", 0.8}, {"none_correct_rate", 0.1}}};
    tasks["3VP"] = {{{"source", "stack"}, {"dims", {3, 3, 3}}, {"fill", 0.6}, {"min_cubes", 6}, {"marks", 2},
                     {"none_rate", 0.8}, {"none_correct_rate", 0.1}},
                    {{"source", "part-corpus"}, {"asked_view", "left"}, {"none_rate", 0.8}, {"none_correct_rate", 0.1}}};
    tasks["PF"] = {{{"rows", 4}, {"cols", 4}, {"folds", 2}, {"holes", 1}},
                   {{"rows", 5}, {"cols", 5}, {"folds", 2}, {"holes", 2}},
                   {{"rows", 6}, {"cols", 6}, {"folds", 3}, {"holes", 3}}};
    tasks["CU"] = {{{"pattern", "color"}, {"none_rate", 0.8}, {"none_correct_rate", 0.1}},
                   {{"pattern", "glyph"}, {"none_rate", 0.8}, {"none_correct_rate", 0.1}},
                   {{"pattern", "dots"}, {"none_rate", 0.8}, {"none_correct_rate", 0.1}}};
    tasks["CR"] = {{{"pattern", "color"}, {"variant_b_rate", 0.5}, {"none_rate", 1.0}, {"none_correct_rate", 0.1}},
                   {{"pattern", "glyph"}, {"variant_b_rate", 0.0}, {"none_rate", 1.0}, {"none_correct_rate", 0.1}},
                   {{"pattern", "dots"}, {"variant_b_rate", 0.0}, {"none_rate", 1.0}, {"none_correct_rate", 0.1}}};
    tasks["CS"] = {{{"solids", {2}}, {"planes", {"horizontal", "vertical"}}},
                   {{"solids", {3}}, {"planes", {"horizontal", "vertical"}}},
                   {{"solids", {2, 3}}, {"planes", {"horizontal", "vertical", "oblique45", "oblique135"}}}};
    tasks["CC"] = {{{"dims", {3, 3, 3}}, {"views", 2}, {"fill", 0.6}},
                   {{"dims", {3, 3, 3}}, {"views", 3}, {"fill", 0.6}},
                   {{"dims", {4, 4, 3}}, {"views", 3}, {"fill", 0.55}}};
    tasks["CA"] = {{{"dims", {3, 3, 3}}, {"parts", 2}, {"max_delta", 1}},
                   {{"dims", {4, 4, 3}}, {"parts", 3}, {"max_delta", 2}}};
    tasks["AM"] = {{{"width", 3}, {"height", 3}, {"steps", 3}, {"arrows", "single"}},
                   {{"width", 4}, {"height", 4}, {"steps", 3}, {"arrows", "multi"}, {"require_swap", true}}};
    tasks["BM"] = {{{"dims", {3, 3, 2}}, {"steps", 2}}, {{"dims", {3, 3, 3}}, {"steps", 3}}};
    t["tasks"] = tasks;
    return t;
  }();
  return kTable;
}

const ordered_json& level_params(TaskId task, int level) {
  const auto& info = task_info(task);
  if (level < 0 || level >= info.levels)
    throw Error(std::string("level out of range for ") + info.code);
  return level_table()["tasks"][info.code][static_cast<std::size_t>(level)];
}

std::string level_table_json() { return level_table().dump(2) + "\n"; }

NonePolicy none_policy(TaskId task, int level) {
  const auto& p = level_params(task, level);
  NonePolicy out;
  if (p.contains("none_rate")) out.rate = p["none_rate"].get<double>();
  if (p.contains("none_correct_rate")) out.correct_rate = p["none_correct_rate"].get<double>();
  return out;
}

NoneMode draw_none_mode(const NonePolicy& policy, Rng& rng) {
  if (policy.rate <= 0 || !rng.chance(policy.rate)) return NoneMode::Off;
  return rng.chance(policy.correct_rate) ? NoneMode::NoneCorrect : NoneMode::WithPositive;
}

std::string instance_id(TaskId task, int level, int index) {
  std::string code = task_info(task).code;
  for (auto& c : code) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-l%d-%04d", code.c_str(), level, index);
  return buf;
}

PuzzleInstance generate_instance(TaskId task, int level, std::uint64_t seed) {
  level_params(task, level);
  Rng rng(seed);
  PuzzleInstance inst;
  switch (task) {
    case TaskId::Rotation2D: inst = generate_2d_rotation(level, rng); break;
    case TaskId::Rotation3D: inst = generate_3d_rotation(level, rng); break;
    case TaskId::ThreeView: inst = generate_three_view(level, rng); break;
    case TaskId::PaperFolding: inst = generate_paper_folding(level, rng); break;
    case TaskId::CubeUnfolding: inst = generate_cube_unfolding(level, rng); break;
    case TaskId::CubeReconstruction: inst = generate_cube_reconstruction(level, rng); break;
    case TaskId::CrossSection: inst = generate_cross_section(level, rng); break;
    case TaskId::CubeCounting: inst = generate_cube_counting(level, rng); break;
    case TaskId::CubeAssembly: inst = generate_cube_assembly(level, rng); break;
    case TaskId::ArrowMoving: inst = generate_arrow_moving(level, rng); break;
    case TaskId::BlockMoving: inst = generate_block_moving(level, rng); break;
  }
  inst.task = task;
  inst.level = level;
  inst.seed = seed;
  inst.version = kGeneratorVersion;
  return inst;
}

std::vector<std::string> check_instance(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  if (inst.options.size() != 4) return {"instance does not have four options"};
  if (inst.answer < 0 || inst.answer > 3) return {"answer index out of range"};
  std::vector<std::string> digests;
  for (const auto& o : inst.options)
    if (o.kind == OptionKind::Image) digests.push_back(digest(o.image));
  std::sort(digests.begin(), digests.end());
  if (std::adjacent_find(digests.begin(), digests.end()) != digests.end())
    errs.push_back("two image options share a digest");
  std::vector<std::string> task_errs;
  try {
    switch (inst.task) {
      case TaskId::Rotation2D: task_errs = check_2d_rotation(inst); break;
      case TaskId::Rotation3D: task_errs = check_3d_rotation(inst); break;
      case TaskId::ThreeView: task_errs = check_three_view(inst); break;
      case TaskId::PaperFolding: task_errs = check_paper_folding(inst); break;
      case TaskId::CubeUnfolding: task_errs = check_cube_unfolding(inst); break;
      case TaskId::CubeReconstruction: task_errs = check_cube_reconstruction(inst); break;
      case TaskId::CrossSection: task_errs = check_cross_section(inst); break;
      case TaskId::CubeCounting: task_errs = check_cube_counting(inst); break;
      case TaskId::CubeAssembly: task_errs = check_cube_assembly(inst); break;
      case TaskId::ArrowMoving: task_errs = check_arrow_moving(inst); break;
      case TaskId::BlockMoving: task_errs = check_block_moving(inst); break;
    }
  } catch (const std::exception& e) {
    task_errs.push_back(std::string("oracle raised: ") + e.what());
  }
  errs.insert(errs.end(), task_errs.begin(), task_errs.end());
  for (auto& e : errs) e = inst.id + ": " + e;
  return errs;
}

namespace detail {

bool is_none(const Option& o) { return o.tag == kNoneTag; }

void judge(const PuzzleInstance& inst, const std::vector<std::optional<bool>>& verdicts,
           std::vector<std::string>& errs) {
  int correct_count = 0, none_slot = -1;
  std::vector<bool> correct(4, false);
  for (std::size_t i = 0; i < 4; ++i) {
    if (is_none(inst.options[i])) {
      none_slot = static_cast<int>(i);
      continue;
    }
    if (!verdicts[i]) {
      errs.push_back("no verdict for option " + std::string(1, static_cast<char>('A' + i)));
      continue;
    }
    correct[i] = *verdicts[i];
  }
  if (none_slot >= 0) {
    if (none_slot != 3) errs.push_back("none option is not in slot D");
    correct[static_cast<std::size_t>(none_slot)] = std::none_of(correct.begin(), correct.end(), [](bool b) { return b; });
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (correct[i]) ++correct_count;
    if (correct[i] != (static_cast<int>(i) == inst.answer))
      errs.push_back(std::string("option ") + static_cast<char>('A' + i) +
                     (correct[i] ? " passes the oracle but is not the answer"
                                 : " is the answer but fails the oracle"));
  }
  if (correct_count != 1) errs.push_back("expected exactly one correct option, found " + std::to_string(correct_count));
}

void expect_image(const Option& o, const Document& rerendered, const std::string& what,
                  std::vector<std::string>& errs) {
  if (o.kind != OptionKind::Image || digest(o.image) != digest(rerendered))
    errs.push_back(what + " does not match its re-rendered model");
}

Option image_option(Document doc, std::string tag, std::string explanation, json model) {
  Option o;
  o.kind = OptionKind::Image;
  o.image = std::move(doc);
  o.tag = std::move(tag);
  o.explanation = std::move(explanation);
  o.model = std::move(model);
  return o;
}

Option text_option(std::string text, std::string tag, std::string explanation, json model) {
  Option o;
  o.kind = OptionKind::Text;
  o.text = std::move(text);
  o.tag = std::move(tag);
  o.explanation = std::move(explanation);
  o.model = std::move(model);
  return o;
}

Option number_option(long long n, std::string tag, std::string explanation, json model) {
  Option o;
  o.kind = OptionKind::Number;
  o.number = n;
  o.text = std::to_string(n);
  o.tag = std::move(tag);
  o.explanation = std::move(explanation);
  o.model = std::move(model);
  return o;
}

bool distinct_images(const std::vector<const Document*>& docs) {
  std::vector<std::string> d;
  for (const auto* doc : docs) d.push_back(digest(*doc));
  std::sort(d.begin(), d.end());
  return std::adjacent_find(d.begin(), d.end()) == d.end();
}

}  // namespace detail

// ---------------------------------------------------------------------------

json to_json(const OccupancyGrid& g) {
  json cells = json::array();
  for (const auto& c : g.cells()) cells.push_back({c.x, c.y, c.z});
  return {{"dims", {g.dims().x, g.dims().y, g.dims().z}}, {"cells", cells}};
}

OccupancyGrid grid_from_json(const json& j) {
  const auto& d = j.at("dims");
  std::vector<Cell> cells;
  for (const auto& c : j.at("cells")) cells.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<int>()});
  return OccupancyGrid::from_cells({d[0].get<int>(), d[1].get<int>(), d[2].get<int>()}, cells);
}

json to_json(const Grid2D& g) {
  json cells = json::array();
  for (const auto& c : g.cells) cells.push_back(c ? json{c->id, c->rotation} : json(nullptr));
  json j = {{"rows", g.rows}, {"cols", g.cols}, {"cells", cells}};
  j["marker"] = g.marker ? json(to_string(*g.marker)) : json(nullptr);
  return j;
}

Grid2D grid2d_from_json(const json& j) {
  Grid2D g(j.at("rows").get<int>(), j.at("cols").get<int>());
  const auto& cells = j.at("cells");
  if (cells.size() != g.cells.size()) throw Error("grid2d: cell count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!cells[i].is_null()) g.cells[i] = PatternCell{cells[i][0].get<int>(), cells[i][1].get<int>()};
  if (!j.at("marker").is_null()) {
    const std::string m = j.at("marker").get<std::string>();
    for (Corner c : {Corner::TopLeft, Corner::TopRight, Corner::BottomRight, Corner::BottomLeft})
      if (m == to_string(c)) g.marker = c;
    if (!g.marker) throw Error("grid2d: unknown marker corner " + m);
  }
  return g;
}

json to_json(const FaceMap& f) {
  json out = json::array();
  for (const auto& c : f) out.push_back({c.id, c.rotation});
  return out;
}

FaceMap facemap_from_json(const json& j) {
  FaceMap f{};
  if (j.size() != 6) throw Error("face map needs six entries");
  for (std::size_t i = 0; i < 6; ++i) f[i] = {j[i][0].get<int>(), j[i][1].get<int>()};
  return f;
}

json to_json(const CornerView& v) {
  json slots = json::array();
  for (const auto& s : v.slots) slots.push_back({{"normal", s.normal}, {"pattern", s.pattern}, {"up", s.up}});
  return {{"corner", v.corner}, {"slots", slots}};
}

CornerView corner_view_from_json(const json& j) {
  CornerView v;
  v.corner = j.at("corner").get<int>();
  const auto& slots = j.at("slots");
  if (slots.size() != 3) throw Error("corner view needs three slots");
  for (std::size_t i = 0; i < 3; ++i) {
    v.slots[i].normal = slots[i].at("normal").get<Vec3i>();
    v.slots[i].pattern = slots[i].at("pattern").get<int>();
    v.slots[i].up = slots[i].at("up").get<Vec3i>();
  }
  return v;
}

namespace {

Profile profile_from(const std::string& s) {
  for (Profile p : {Profile::Triangular, Profile::Rectangular, Profile::Circular})
    if (s == to_string(p)) return p;
  throw Error("unknown profile " + s);
}

SolidForm form_from(const std::string& s) {
  for (SolidForm f : {SolidForm::Prism, SolidForm::Pyramid, SolidForm::Frustum})
    if (s == to_string(f)) return f;
  throw Error("unknown solid form " + s);
}

}  // namespace

json to_json(const CompositeSolid& c) {
  json out = json::array();
  for (const auto& s : c)
    out.push_back({{"profile", to_string(s.profile)},
                   {"form", to_string(s.form)},
                   {"a", s.a},
                   {"b", s.b},
                   {"height", s.height},
                   {"top_scale", s.top_scale}});
  return out;
}

CompositeSolid composite_from_json(const json& j) {
  CompositeSolid out;
  for (const auto& s : j)
    out.push_back({profile_from(s.at("profile").get<std::string>()), form_from(s.at("form").get<std::string>()),
                   s.at("a").get<double>(), s.at("b").get<double>(), s.at("height").get<double>(),
                   s.at("top_scale").get<double>()});
  return out;
}

json to_json(const Plane& p) {
  return {{"normal", {p.normal.x, p.normal.y, p.normal.z}}, {"offset", p.offset}};
}

Plane plane_from_json(const json& j) {
  const auto& n = j.at("normal");
  return {{n[0].get<double>(), n[1].get<double>(), n[2].get<double>()}, j.at("offset").get<double>()};
}

namespace {

RelDir rel_from(const std::string& s) {
  for (RelDir r : {RelDir::Forward, RelDir::Backward, RelDir::Left, RelDir::Right})
    if (s == to_string(r)) return r;
  throw Error("unknown relative direction " + s);
}

}  // namespace

json to_json(const std::vector<ArrowOp>& ops) {
  json out = json::array();
  for (const auto& op : ops) out.push_back({{"x", op.x}, {"y", op.y}, {"rel", to_string(op.rel)}, {"steps", op.steps}});
  return out;
}

std::vector<ArrowOp> arrow_ops_from_json(const json& j) {
  std::vector<ArrowOp> out;
  for (const auto& o : j)
    out.push_back({o.at("x").get<int>(), o.at("y").get<int>(), rel_from(o.at("rel").get<std::string>()),
                   o.at("steps").get<int>()});
  return out;
}

json to_json(const ArrowState& s) {
  return {{"width", s.width}, {"height", s.height}, {"x", s.x}, {"y", s.y}, {"orient", s.orient}};
}

ArrowState arrow_state_from_json(const json& j) {
  return {j.at("width").get<int>(), j.at("height").get<int>(), j.at("x").get<int>(), j.at("y").get<int>(),
          j.at("orient").get<int>()};
}

json to_json(const ArrowMapState& s) {
  json cells = json::array();
  for (const auto& c : s.cells) cells.push_back(c ? json{c->color, c->orient} : json(nullptr));
  return {{"width", s.width}, {"height", s.height}, {"cells", cells}};
}

ArrowMapState arrow_map_from_json(const json& j) {
  ArrowMapState s;
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  for (const auto& c : j.at("cells"))
    s.cells.push_back(c.is_null() ? std::nullopt : std::optional<Arrow>(Arrow{c[0].get<int>(), c[1].get<int>()}));
  if (s.cells.size() != static_cast<std::size_t>(s.width) * s.height) throw Error("arrow map: cell count mismatch");
  return s;
}

json to_json(const BlockWorld& w) {
  json cubes = json::array();
  for (const auto& q : w.scene) cubes.push_back({q.pos.x, q.pos.y, q.pos.z, q.color});
  return {{"dims", {w.dims.x, w.dims.y, w.dims.z}}, {"cubes", cubes}};
}

BlockWorld block_world_from_json(const json& j) {
  BlockWorld w;
  const auto& d = j.at("dims");
  w.dims = {d[0].get<int>(), d[1].get<int>(), d[2].get<int>()};
  for (const auto& q : j.at("cubes"))
    w.scene.push_back({{q[0].get<int>(), q[1].get<int>(), q[2].get<int>()}, q[3].get<int>()});
  return w;
}

json to_json(const std::vector<BlockOp>& ops) {
  json out = json::array();
  for (const auto& op : ops) out.push_back({{"from", {op.from.x, op.from.y, op.from.z}}, {"direction", op.direction}});
  return out;
}

std::vector<BlockOp> block_ops_from_json(const json& j) {
  std::vector<BlockOp> out;
  for (const auto& o : j) {
    const auto& f = o.at("from");
    out.push_back({{f[0].get<int>(), f[1].get<int>(), f[2].get<int>()}, o.at("direction").get<int>()});
  }
  return out;
}

json to_json(const std::vector<FoldOp>& ops) {
  json out = json::array();
  for (const auto& op : ops) {
    json o = {{"direction", to_string(op.direction)}, {"line", op.line}};
    if (op.direction == FoldDirection::Diagonal) o["corner"] = to_string(op.corner);
    out.push_back(o);
  }
  return out;
}

std::vector<FoldOp> fold_ops_from_json(const json& j) {
  std::vector<FoldOp> out;
  for (const auto& o : j) {
    FoldOp op;
    const std::string d = o.at("direction").get<std::string>();
    bool found = false;
    for (FoldDirection fd : {FoldDirection::Horizontal, FoldDirection::Vertical, FoldDirection::Diagonal})
      if (d == to_string(fd)) {
        op.direction = fd;
        found = true;
      }
    if (!found) throw Error("unknown fold direction " + d);
    op.line = o.at("line").get<int>();
    if (op.direction == FoldDirection::Diagonal) {
      const std::string c = o.at("corner").get<std::string>();
      found = false;
      for (Corner k : {Corner::TopLeft, Corner::TopRight, Corner::BottomRight, Corner::BottomLeft})
        if (c == to_string(k)) {
          op.corner = k;
          found = true;
        }
      if (!found) throw Error("unknown corner " + c);
    }
    out.push_back(op);
  }
  return out;
}

json to_json(const HoleGrid& g) {
  json holes = json::array();
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c)
      if (g.at(r, c)) holes.push_back({r, c});
  return {{"rows", g.rows}, {"cols", g.cols}, {"holes", holes}};
}

HoleGrid hole_grid_from_json(const json& j) {
  HoleGrid g{j.at("rows").get<int>(), j.at("cols").get<int>(), {}};
  g.holes.assign(static_cast<std::size_t>(g.rows) * g.cols, 0);
  for (const auto& h : j.at("holes")) g.set(h[0].get<int>(), h[1].get<int>(), true);
  return g;
}

}  // namespace spatialviz
