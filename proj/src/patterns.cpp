#include "spatialviz/patterns.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "json.hpp"

namespace spatialviz {

namespace {

struct PaletteEntry {
  const char* name;
  const char* hex;
};

constexpr std::array<PaletteEntry, kPaletteSize> kPalette = {{
    {"red", "#d62728"},
    {"blue", "#1f77b4"},
    {"green", "#2ca02c"},
    {"yellow", "#f2c40f"},
    {"purple", "#9467bd"},
    {"orange", "#ff7f0e"},
    {"cyan", "#17becf"},
    {"brown", "#8c564b"},
}};

struct GlyphDef {
  const char* name;
  std::vector<std::array<int, 2>> cells;
};

const std::array<GlyphDef, kGlyphCount>& glyph_defs() {
  static const std::array<GlyphDef, kGlyphCount> defs = {{
      {"F", {{1, 0}, {2, 0}, {0, 1}, {1, 1}, {1, 2}}},
      {"L", {{1, 0}, {1, 1}, {1, 2}, {1, 3}, {2, 3}}},
      {"N", {{2, 0}, {2, 1}, {1, 2}, {2, 2}, {1, 3}}},
      {"P", {{1, 0}, {2, 0}, {1, 1}, {2, 1}, {1, 2}}},
      {"Y", {{2, 0}, {1, 1}, {2, 1}, {2, 2}, {2, 3}}},
      {"L4", {{1, 0}, {1, 1}, {1, 2}, {2, 2}}},
  }};
  return defs;
}

using Dots = std::array<int, 9>;  // digits 0..3, row-major

Dots dots_from_code(int code) {
  Dots d{};
  for (int i = 0; i < 9; ++i) {
    d[static_cast<std::size_t>(i)] = code % 4;
    code /= 4;
  }
  return d;
}

int code_from_dots(const Dots& d) {
  int code = 0;
  for (int i = 8; i >= 0; --i) code = code * 4 + d[static_cast<std::size_t>(i)];
  return code;
}

Dots rotate_dots(const Dots& d) {
  Dots out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(r * 3 + c)] = d[static_cast<std::size_t>((2 - c) * 3 + r)];
  return out;
}

Dots flip_dots(const Dots& d) {
  Dots out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(r * 3 + c)] = d[static_cast<std::size_t>(r * 3 + 2 - c)];
  return out;
}

Dots displayed_dots(PatternCell c) {
  Dots d = dots_from_code(c.id - kDotBase);
  for (int k = 0; k < ((c.rotation % 4) + 4) % 4; ++k) d = rotate_dots(d);
  return d;
}

PatternCell dot_cell_from_digits(const Dots& shown) {
  Dots img = shown;
  int best_code = -1, best_k = 0;
  for (int k = 0; k < 4; ++k) {
    int code = code_from_dots(img);
    if (best_code < 0 || code < best_code) {
      best_code = code;
      best_k = k;
    }
    img = rotate_dots(img);
  }
  // shown rotated best_k times is the base, so shown = base rotated -best_k.
  return canonical({kDotBase + best_code, (4 - best_k) % 4});
}

using GlyphSet = std::set<std::array<int, 2>>;

GlyphSet rotate_glyph(const GlyphSet& s) {
  GlyphSet out;
  for (auto [c, r] : s) out.insert({kGlyphBox - 1 - r, c});
  return out;
}

}  // namespace

const char* palette_hex(int color) {
  if (color < 0 || color >= kPaletteSize) throw Error("palette index out of range");
  return kPalette[static_cast<std::size_t>(color)].hex;
}

const char* palette_name(int color) {
  if (color < 0 || color >= kPaletteSize) throw Error("palette index out of range");
  return kPalette[static_cast<std::size_t>(color)].name;
}

PatternKind pattern_kind(int id) {
  if (id >= 0 && id < kPaletteSize) return PatternKind::Solid;
  if (id >= kGlyphBase && id < kGlyphBase + 2 * kGlyphCount) return PatternKind::Glyph;
  if (id >= kDotBase && id < kDotBase + (1 << 18)) return PatternKind::Dots;
  throw Error("unknown pattern id " + std::to_string(id));
}

int pattern_period(int id) {
  switch (pattern_kind(id)) {
    case PatternKind::Solid: return 1;
    case PatternKind::Glyph: {
      const auto cells = glyph_cells(id);
      const GlyphSet base(cells.begin(), cells.end());
      GlyphSet cur = rotate_glyph(base);
      int k = 1;
      while (cur != base) {
        cur = rotate_glyph(cur);
        ++k;
      }
      return k;
    }
    case PatternKind::Dots: {
      const Dots base = dots_from_code(id - kDotBase);
      Dots cur = rotate_dots(base);
      int k = 1;
      while (cur != base) {
        cur = rotate_dots(cur);
        ++k;
      }
      return k;
    }
  }
  return 1;
}

PatternCell canonical(PatternCell c) {
  const int p = pattern_period(c.id);
  return {c.id, ((c.rotation % p) + p) % p};
}

PatternCell rotated(PatternCell c, int quarter_turns) {
  return canonical({c.id, c.rotation + quarter_turns});
}

PatternCell flipped(PatternCell c, FlipAxis axis) {
  PatternCell h = c;
  switch (pattern_kind(c.id)) {
    case PatternKind::Solid: h = canonical(c); break;
    case PatternKind::Glyph: h = canonical({c.id ^ 1, 4 - c.rotation}); break;
    case PatternKind::Dots: h = dot_cell_from_digits(flip_dots(displayed_dots(c))); break;
  }
  return axis == FlipAxis::Horizontal ? h : rotated(h, 2);
}

std::vector<std::array<int, 2>> glyph_cells(int id) {
  if (pattern_kind(id) != PatternKind::Glyph) throw Error("not a glyph id");
  const int g = (id - kGlyphBase) / 2;
  const bool mirrored = ((id - kGlyphBase) % 2) == 1;
  auto cells = glyph_defs()[static_cast<std::size_t>(g)].cells;
  if (mirrored)
    for (auto& cell : cells) cell[0] = kGlyphBox - 1 - cell[0];
  std::sort(cells.begin(), cells.end());
  return cells;
}

const char* glyph_name(int id) {
  if (pattern_kind(id) != PatternKind::Glyph) throw Error("not a glyph id");
  return glyph_defs()[static_cast<std::size_t>((id - kGlyphBase) / 2)].name;
}

std::array<int, 9> dot_colors(int id) {
  if (pattern_kind(id) != PatternKind::Dots) throw Error("not a dot pattern id");
  auto d = dots_from_code(id - kDotBase);
  std::array<int, 9> out{};
  for (std::size_t i = 0; i < 9; ++i) out[i] = kDotColors[static_cast<std::size_t>(d[i])];
  return out;
}

PatternCell make_dot_cell(const std::array<int, 9>& colors) {
  Dots d{};
  for (std::size_t i = 0; i < 9; ++i) {
    auto it = std::find(kDotColors.begin(), kDotColors.end(), colors[i]);
    if (it == kDotColors.end()) throw Error("dot colour outside the dot palette");
    d[i] = static_cast<int>(it - kDotColors.begin());
  }
  return dot_cell_from_digits(d);
}

std::string pattern_library_json() {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["version"] = 1;
  ordered_json palette = ordered_json::array();
  for (int i = 0; i < kPaletteSize; ++i)
    palette.push_back({{"index", i}, {"name", palette_name(i)}, {"hex", palette_hex(i)},
                       {"marker", i == kMarkerColor}});
  doc["palette"] = palette;
  ordered_json patterns = ordered_json::array();
  for (int i = 0; i < kPaletteSize; ++i) {
    if (i == kMarkerColor) continue;
    patterns.push_back({{"id", i},
                        {"kind", "solid"},
                        {"name", palette_name(i)},
                        {"symmetry", "C4"},
                        {"period", 1},
                        {"mirror", i}});
  }
  for (int id = kGlyphBase; id < kGlyphBase + 2 * kGlyphCount; ++id) {
    ordered_json cells = ordered_json::array();
    for (auto [c, r] : glyph_cells(id)) cells.push_back({c, r});
    const bool mirrored = ((id - kGlyphBase) % 2) == 1;
    patterns.push_back({{"id", id},
                        {"kind", "glyph"},
                        {"name", std::string(glyph_name(id)) + (mirrored ? "'" : "")},
                        {"symmetry", "C1"},
                        {"period", pattern_period(id)},
                        {"mirror", id ^ 1},
                        {"box", kGlyphBox},
                        {"cells", cells}});
  }
  doc["patterns"] = patterns;
  doc["dots"] = {{"base", kDotBase},
                 {"colors", kDotColors},
                 {"encoding",
                  "id = base + sum(digit[i] * 4^i) over the 3x3 dots in row-major order, "
                  "using the smallest code among the four rotations"}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

const char* to_string(Corner c) {
  switch (c) {
    case Corner::TopLeft: return "top_left";
    case Corner::TopRight: return "top_right";
    case Corner::BottomRight: return "bottom_right";
    case Corner::BottomLeft: return "bottom_left";
  }
  return "?";
}

Grid2D rotate_grid(const Grid2D& grid, int quarter_turns) {
  const int k = ((quarter_turns % 4) + 4) % 4;
  Grid2D g = grid;
  for (int t = 0; t < k; ++t) {
    Grid2D out(g.cols, g.rows);
    for (int r = 0; r < g.rows; ++r)
      for (int c = 0; c < g.cols; ++c)
        if (g.at(r, c)) out.at(c, g.rows - 1 - r) = rotated(*g.at(r, c), 1);
    if (g.marker) out.marker = static_cast<Corner>((static_cast<int>(*g.marker) + 1) % 4);
    g = std::move(out);
  }
  return g;
}

Grid2D flip_grid(const Grid2D& grid, FlipAxis axis) {
  Grid2D out(grid.rows, grid.cols);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (!grid.at(r, c)) continue;
      const int nr = axis == FlipAxis::Vertical ? grid.rows - 1 - r : r;
      const int nc = axis == FlipAxis::Horizontal ? grid.cols - 1 - c : c;
      out.at(nr, nc) = flipped(*grid.at(r, c), axis);
    }
  }
  if (grid.marker) {
    static constexpr std::array<Corner, 4> kH = {Corner::TopRight, Corner::TopLeft,
                                                 Corner::BottomLeft, Corner::BottomRight};
    static constexpr std::array<Corner, 4> kV = {Corner::BottomLeft, Corner::BottomRight,
                                                 Corner::TopRight, Corner::TopLeft};
    const auto i = static_cast<std::size_t>(*grid.marker);
    out.marker = axis == FlipAxis::Horizontal ? kH[i] : kV[i];
  }
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(Face f) {
  switch (f) {
    case Face::Top: return "Top";
    case Face::Bottom: return "Bottom";
    case Face::Left: return "Left";
    case Face::Right: return "Right";
    case Face::Front: return "Front";
    case Face::Back: return "Back";
  }
  return "?";
}

Face opposite(Face f) {
  switch (f) {
    case Face::Top: return Face::Bottom;
    case Face::Bottom: return Face::Top;
    case Face::Left: return Face::Right;
    case Face::Right: return Face::Left;
    case Face::Front: return Face::Back;
    case Face::Back: return Face::Front;
  }
  return f;
}

Vec3i face_normal(Face f) {
  switch (f) {
    case Face::Top: return {0, 0, 1};
    case Face::Bottom: return {0, 0, -1};
    case Face::Left: return {-1, 0, 0};
    case Face::Right: return {1, 0, 0};
    case Face::Front: return {0, -1, 0};
    case Face::Back: return {0, 1, 0};
  }
  return {0, 0, 0};
}

Face face_from_normal(const Vec3i& n) {
  for (Face f : kFaces)
    if (face_normal(f) == n) return f;
  throw Error("vector is not a face normal");
}

Vec3i cross(const Vec3i& a, const Vec3i& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3i operator-(const Vec3i& v) { return {-v[0], -v[1], -v[2]}; }

Vec3i mat_apply(const Mat3i& m, const Vec3i& v) {
  Vec3i out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(i)] += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
  return out;
}

Vec3i turn_clockwise(Vec3i v, const Vec3i& n, int k) {
  for (int i = 0; i < ((k % 4) + 4) % 4; ++i) v = cross(v, n);
  return v;
}

const std::vector<Mat3i>& cube_rotations() {
  static const std::vector<Mat3i> all = [] {
    const Mat3i rx = {{{1, 0, 0}, {0, 0, -1}, {0, 1, 0}}};
    const Mat3i rz = {{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}};
    auto mul = [](const Mat3i& a, const Mat3i& b) {
      Mat3i c{};
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          for (std::size_t k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
      return c;
    };
    std::vector<Mat3i> out{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const auto& g : {rx, rz}) {
        Mat3i m = mul(g, out[i]);
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
      }
    return out;
  }();
  return all;
}

namespace {

struct NetDef {
  const char* name;
  // (row, col) per Face in enum order: Top, Bottom, Left, Right, Front, Back.
  std::array<std::array<int, 2>, 6> cells;
};

const std::vector<NetDef>& net_defs() {
  static const std::vector<NetDef> defs = {
      {"1-4-1-0", {{{1, 2}, {1, 0}, {1, 3}, {1, 1}, {0, 0}, {2, 0}}}},
      {"1-4-1-1", {{{1, 2}, {1, 0}, {1, 3}, {1, 1}, {0, 1}, {2, 0}}}},
      {"1-4-1-2", {{{1, 2}, {1, 0}, {1, 3}, {1, 1}, {0, 2}, {2, 0}}}},
      {"1-4-1-3", {{{1, 2}, {1, 0}, {1, 3}, {1, 1}, {0, 3}, {2, 0}}}},
      {"1-4-1-4", {{{1, 2}, {1, 0}, {1, 3}, {1, 1}, {0, 1}, {2, 1}}}},
      {"1-4-1-5", {{{1, 2}, {1, 0}, {1, 3}, {1, 1}, {0, 2}, {2, 1}}}},
      {"2-3-1-0", {{{1, 2}, {1, 0}, {2, -1}, {1, 1}, {0, 0}, {2, 0}}}},
      {"2-3-1-1", {{{1, 2}, {1, 0}, {2, -1}, {1, 1}, {0, 1}, {2, 0}}}},
      {"2-3-1-2", {{{1, 2}, {1, 0}, {2, -1}, {1, 1}, {0, 2}, {2, 0}}}},
      {"2-2-2", {{{0, 2}, {1, 0}, {2, -1}, {1, 1}, {0, 1}, {2, 0}}}},
      {"3-3", {{{1, 2}, {1, 0}, {0, 3}, {1, 1}, {0, 2}, {0, 4}}}},
  };
  return defs;
}

}  // namespace

const std::vector<std::string>& net_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& d : net_defs()) out.emplace_back(d.name);
    return out;
  }();
  return names;
}

NetLayout canonical_net(const std::string& name) {
  for (const auto& d : net_defs()) {
    if (name != d.name) continue;
    NetLayout layout;
    layout.name = name;
    int min_col = 0;
    for (const auto& rc : d.cells) min_col = std::min(min_col, rc[1]);
    for (std::size_t i = 0; i < 6; ++i) layout.placement[i] = {d.cells[i][0], d.cells[i][1] - min_col};
    return layout;
  }
  throw Error("unknown net " + name);
}

std::array<SquareFrame, 6> fold_frames(const NetLayout& layout) {
  std::map<std::array<int, 2>, int> at;
  for (int f = 0; f < 6; ++f)
    if (!at.emplace(layout.placement[static_cast<std::size_t>(f)], f).second)
      throw Error("net layout: two faces share a square");
  std::array<std::optional<SquareFrame>, 6> frames;
  const int base = static_cast<int>(Face::Bottom);
  frames[static_cast<std::size_t>(base)] = SquareFrame{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
  std::deque<int> queue{base};
  static constexpr std::array<std::array<int, 2>, 4> kSteps = {{{0, 1}, {0, -1}, {-1, 0}, {1, 0}}};
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    const SquareFrame fs = *frames[static_cast<std::size_t>(s)];
    const auto pos = layout.placement[static_cast<std::size_t>(s)];
    for (auto [dr, dc] : kSteps) {
      auto it = at.find({pos[0] + dr, pos[1] + dc});
      if (it == at.end() || frames[static_cast<std::size_t>(it->second)]) continue;
      SquareFrame ft;
      if (dc == 1) ft = {-fs.normal, fs.up, fs.right};
      else if (dc == -1) ft = {fs.normal, fs.up, -fs.right};
      else if (dr == -1) ft = {fs.right, -fs.normal, fs.up};
      else ft = {fs.right, fs.normal, -fs.up};
      frames[static_cast<std::size_t>(it->second)] = ft;
      queue.push_back(it->second);
    }
  }
  std::array<SquareFrame, 6> out{};
  for (int f = 0; f < 6; ++f) {
    const auto& fr = frames[static_cast<std::size_t>(f)];
    if (!fr) throw Error("net layout " + layout.name + ": squares are not edge-connected");
    if (fr->normal != face_normal(static_cast<Face>(f)))
      throw Error("net layout " + layout.name + ": " + to_string(static_cast<Face>(f)) +
                  " does not fold onto its face");
    out[static_cast<std::size_t>(f)] = *fr;
  }
  return out;
}

Vec3i canonical_up(int pattern, const Vec3i& up) {
  const int p = pattern_period(pattern);
  if (p == 1) return {0, 0, 0};
  if (p == 2) return std::max(up, -up);
  return up;
}

PatternCell drawn_cell(const NetLayout& layout, const FaceMap& faces, Face f) {
  const auto i = static_cast<std::size_t>(f);
  return rotated(faces[i], layout.face_rotation[i]);
}

CubeModel fold_net(const NetLayout& layout, const FaceMap& faces) {
  const auto frames = fold_frames(layout);
  CubeModel cube;
  for (Face f : kFaces) {
    const auto i = static_cast<std::size_t>(f);
    const PatternCell cell = drawn_cell(layout, faces, f);
    const Vec3i up = turn_clockwise(frames[i].up, frames[i].normal, cell.rotation);
    cube.faces[i] = {cell.id, canonical_up(cell.id, up)};
  }
  return cube;
}

CubeModel rotate_cube(const CubeModel& cube, const Mat3i& r) {
  CubeModel out;
  for (Face f : kFaces) {
    const auto& src = cube.face(f);
    const Face g = face_from_normal(mat_apply(r, face_normal(f)));
    out.faces[static_cast<std::size_t>(g)] = {src.pattern, canonical_up(src.pattern, mat_apply(r, src.up))};
  }
  return out;
}

bool cubes_equivalent(const CubeModel& a, const CubeModel& b) {
  for (const auto& r : cube_rotations())
    if (rotate_cube(a, r) == b) return true;
  return false;
}

NetLayout equivalent_net(const std::string& target_net, const FaceMap& faces) {
  NetLayout layout = canonical_net(target_net);
  const auto target = fold_frames(layout);
  const auto pivot = fold_frames(canonical_net(kPivotNet));
  for (Face f : kFaces) {
    const auto i = static_cast<std::size_t>(f);
    int k = 0;
    while (turn_clockwise(target[i].up, target[i].normal, k) != pivot[i].up) ++k;
    layout.face_rotation[i] = k % pattern_period(faces[i].id);
  }
  return layout;
}

Face opposite_face(const CubeModel& cube, Face f) {
  (void)cube;
  return face_from_normal(-face_normal(f));
}

Vec3i corner_direction(int corner) {
  static constexpr std::array<std::array<int, 2>, 4> kXY = {{{1, -1}, {-1, -1}, {-1, 1}, {1, 1}}};
  if (corner < 1 || corner > 8) throw Error("corner must be in 1..8");
  const auto& xy = kXY[static_cast<std::size_t>((corner - 1) % 4)];
  return {xy[0], xy[1], corner <= 4 ? 1 : -1};
}

int corner_from_direction(const Vec3i& d) {
  for (int c = 1; c <= 8; ++c)
    if (corner_direction(c) == d) return c;
  throw Error("not a corner direction");
}

CornerView corner_view(const CubeModel& cube, int corner) {
  const Vec3i d = corner_direction(corner);
  CornerView v;
  v.corner = corner;
  const std::array<Vec3i, 3> normals = {Vec3i{0, 0, d[2]}, Vec3i{0, d[1], 0}, Vec3i{d[0], 0, 0}};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& f = cube.face(face_from_normal(normals[i]));
    v.slots[i] = {normals[i], f.pattern, f.up};
  }
  return v;
}

CornerView mirror_view(const CornerView& view, ViewMirror how) {
  const Vec3i d = corner_direction(view.corner);
  const int s = d[0] * d[1];
  auto reflect = [&](const Vec3i& v) -> Vec3i {
    if (how == ViewMirror::Diagonal) return {s * v[1], s * v[0], v[2]};
    return {v[0], v[1], -v[2]};
  };
  CornerView out;
  out.corner = corner_from_direction(reflect(d));
  std::array<CornerSlot, 3> slots{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& src = view.slots[i];
    const PatternCell m = flipped({src.pattern, 0}, FlipAxis::Horizontal);
    const Vec3i n = reflect(src.normal);
    const Vec3i up = turn_clockwise(reflect(src.up), n, m.rotation);
    slots[i] = {n, m.id, canonical_up(m.id, up)};
  }
  if (how == ViewMirror::Diagonal) std::swap(slots[1], slots[2]);
  out.slots = slots;
  return out;
}

bool view_consistent(const CubeModel& cube, const CornerView& view) {
  for (const auto& r : cube_rotations())
    if (corner_view(rotate_cube(cube, r), view.corner) == view) return true;
  return false;
}

}  // namespace spatialviz
