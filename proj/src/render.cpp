#include "spatialviz/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

namespace spatialviz {

RenderStyle default_style() {
  RenderStyle s;
  for (int i = 0; i < kPaletteSize; ++i) s.palette.emplace_back(palette_hex(i));
  return s;
}

std::string shade(const std::string& hex, double factor) {
  if (hex.size() != 7 || hex[0] != '#') throw Error("shade: bad colour " + hex);
  char out[8];
  int ch[3];
  for (int i = 0; i < 3; ++i) {
    const int v = std::stoi(hex.substr(static_cast<std::size_t>(1 + 2 * i), 2), nullptr, 16);
    ch[i] = std::clamp(static_cast<int>(std::lround(v * factor)), 0, 255);
  }
  std::snprintf(out, sizeof out, "#%02x%02x%02x", ch[0], ch[1], ch[2]);
  return out;
}

namespace {

const std::string& palette_at(const RenderStyle& st, int color) {
  if (color < 0 || color >= static_cast<int>(st.palette.size()))
    throw Error("render: palette index out of range");
  return st.palette[static_cast<std::size_t>(color)];
}

// Maps the unit square (a right, b down) onto the page.
struct Frame2 {
  double ox, oy, ax, ay, bx, by;
  std::pair<double, double> at(double a, double b) const {
    return {ox + a * ax + b * bx, oy + a * ay + b * by};
  }
  bool axis_aligned() const { return ay == 0 && bx == 0 && ax > 0 && by > 0; }
  bool similarity() const {
    return std::abs(ax * bx + ay * by) < 1e-9 &&
           std::abs(std::hypot(ax, ay) - std::hypot(bx, by)) < 1e-9;
  }
};

std::vector<double> quad(const Frame2& f, double a0, double b0, double a1, double b1) {
  auto [x0, y0] = f.at(a0, b0);
  auto [x1, y1] = f.at(a1, b0);
  auto [x2, y2] = f.at(a1, b1);
  auto [x3, y3] = f.at(a0, b1);
  return {x0, y0, x1, y1, x2, y2, x3, y3};
}

void square(Document& doc, const Frame2& f, const std::string& role, const std::string& fill,
            const std::string& stroke, double sw) {
  if (f.axis_aligned())
    doc.rect(role, f.ox, f.oy, f.ax, f.by, fill, stroke, sw);
  else
    doc.polygon(role, quad(f, 0, 0, 1, 1), fill, stroke, sw);
}

void draw_pattern(Document& doc, PatternCell cell, const Frame2& f, const RenderStyle& st) {
  const int k = ((cell.rotation % 4) + 4) % 4;
  switch (pattern_kind(cell.id)) {
    case PatternKind::Solid:
      square(doc, f, "face", palette_at(st, cell.id), st.line_color, st.stroke_width);
      break;
    case PatternKind::Glyph: {
      square(doc, f, "face", "#ffffff", st.line_color, st.stroke_width);
      const double unit = 0.8 / kGlyphBox;
      for (auto [c, r] : glyph_cells(cell.id)) {
        for (int i = 0; i < k; ++i) std::tie(c, r) = std::pair{kGlyphBox - 1 - r, c};
        doc.polygon("glyph", quad(f, 0.1 + c * unit, 0.1 + r * unit, 0.1 + (c + 1) * unit, 0.1 + (r + 1) * unit),
                    st.glyph_color);
      }
      break;
    }
    case PatternKind::Dots: {
      square(doc, f, "face", "#ffffff", st.line_color, st.stroke_width);
      auto colors = dot_colors(cell.id);
      for (int i = 0; i < k; ++i) {
        std::array<int, 9> next{};
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c)
            next[static_cast<std::size_t>(r * 3 + c)] = colors[static_cast<std::size_t>((2 - c) * 3 + r)];
        colors = next;
      }
      constexpr double kRadius = 0.11;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
          const auto& fill = palette_at(st, colors[static_cast<std::size_t>(r * 3 + c)]);
          const double ca = (c + 0.5) / 3, cb = (r + 0.5) / 3;
          if (f.similarity()) {
            auto [x, y] = f.at(ca, cb);
            doc.circle("dot", x, y, kRadius * std::hypot(f.ax, f.ay), fill);
          } else {
            std::vector<double> pts;
            for (int i = 0; i < 16; ++i) {
              const double t = 2 * std::numbers::pi * i / 16;
              auto [x, y] = f.at(ca + kRadius * std::cos(t), cb + kRadius * std::sin(t));
              pts.push_back(x);
              pts.push_back(y);
            }
            doc.polygon("dot", std::move(pts), fill);
          }
        }
      break;
    }
  }
}

Document blank(double w, double h, const RenderStyle& st) {
  Document d;
  d.width = w;
  d.height = h;
  d.background = st.background;
  return d;
}

}  // namespace

Document render_grid2d(const Grid2D& grid, const RenderStyle& st) {
  const double u = st.cell_px, m = st.margin;
  Document doc = blank(grid.cols * u + 2 * m, grid.rows * u + 2 * m, st);
  doc.rect("frame", m, m, grid.cols * u, grid.rows * u, "none", st.line_color, st.stroke_width);
  for (int r = 0; r < grid.rows; ++r)
    for (int c = 0; c < grid.cols; ++c)
      if (grid.at(r, c)) draw_pattern(doc, *grid.at(r, c), {m + c * u, m + r * u, u, 0, 0, u}, st);
  if (grid.marker) {
    const double s = u * 0.25;
    const double right = m + grid.cols * u - s, bottom = m + grid.rows * u - s;
    double x = m, y = m;
    switch (*grid.marker) {
      case Corner::TopLeft: break;
      case Corner::TopRight: x = right; break;
      case Corner::BottomRight: x = right; y = bottom; break;
      case Corner::BottomLeft: y = bottom; break;
    }
    doc.rect("marker", x, y, s, s, palette_at(st, kMarkerColor));
  }
  return doc;
}

// ---------------------------------------------------------------------------

namespace {

struct Iso {
  double u, cx, sy, ox = 0, oy = 0;
  Iso(const RenderStyle& st, double scale)
      : u(scale),
        cx(std::cos(st.iso_angle_deg * std::numbers::pi / 180)),
        sy(std::sin(st.iso_angle_deg * std::numbers::pi / 180)) {}
  std::pair<double, double> raw(double x, double y, double z) const {
    return {(x + y) * cx * u, (x - y) * sy * u - z * u};
  }
  std::pair<double, double> operator()(double x, double y, double z) const {
    auto [px, py] = raw(x, y, z);
    return {px + ox, py + oy};
  }
  // Fits the points into a canvas with the margin; returns width, height.
  std::pair<double, double> fit(const std::vector<Vec3>& pts, double margin) {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& p : pts) {
      auto [px, py] = raw(p.x, p.y, p.z);
      x0 = std::min(x0, px);
      y0 = std::min(y0, py);
      x1 = std::max(x1, px);
      y1 = std::max(y1, py);
    }
    ox = margin - x0;
    oy = margin - y0;
    return {x1 - x0 + 2 * margin, y1 - y0 + 2 * margin};
  }
  std::vector<double> poly(std::initializer_list<Vec3> pts) const {
    std::vector<double> out;
    for (const auto& p : pts) {
      auto [x, y] = (*this)(p.x, p.y, p.z);
      out.push_back(x);
      out.push_back(y);
    }
    return out;
  }
};

struct IsoCube {
  Cell c;
  std::string color;
};

Document iso_document(std::vector<IsoCube> cubes, Dims dims, const RenderStyle& st) {
  Iso iso(st, st.cell_px);
  const double X = dims.x, Y = dims.y, Z = dims.z;
  auto [w, h] = iso.fit({{0, 0, 0}, {X, 0, 0}, {0, Y, 0}, {X, Y, 0}, {0, 0, Z}, {X, 0, Z}, {0, Y, Z}, {X, Y, Z}},
                        st.margin);
  Document doc = blank(w, h, st);
  doc.polygon("floor", iso.poly({{0, 0, 0}, {X, 0, 0}, {X, Y, 0}, {0, Y, 0}}), "#eeeeee", "#bbbbbb",
              st.stroke_width * 0.5);
  std::set<Cell> occ;
  for (const auto& q : cubes) occ.insert(q.c);
  std::sort(cubes.begin(), cubes.end(), [](const IsoCube& a, const IsoCube& b) {
    const int da = a.c.x - a.c.y + a.c.z, db = b.c.x - b.c.y + b.c.z;
    if (da != db) return da < db;
    return std::tuple{a.c.z, -a.c.y, a.c.x} < std::tuple{b.c.z, -b.c.y, b.c.x};
  });
  for (const auto& q : cubes) {
    const double x = q.c.x, y = q.c.y, z = q.c.z;
    if (!occ.count({q.c.x, q.c.y, q.c.z + 1}))
      doc.polygon("face-top", iso.poly({{x, y, z + 1}, {x + 1, y, z + 1}, {x + 1, y + 1, z + 1}, {x, y + 1, z + 1}}),
                  shade(q.color, st.top_shade), st.line_color, st.stroke_width);
    if (!occ.count({q.c.x, q.c.y - 1, q.c.z}))
      doc.polygon("face-front", iso.poly({{x, y, z}, {x + 1, y, z}, {x + 1, y, z + 1}, {x, y, z + 1}}),
                  shade(q.color, st.left_shade), st.line_color, st.stroke_width);
    if (!occ.count({q.c.x + 1, q.c.y, q.c.z}))
      doc.polygon("face-right",
                  iso.poly({{x + 1, y, z}, {x + 1, y + 1, z}, {x + 1, y + 1, z + 1}, {x + 1, y, z + 1}}),
                  shade(q.color, st.right_shade), st.line_color, st.stroke_width);
  }
  return doc;
}

}  // namespace

Document render_isometric(const OccupancyGrid& grid, const RenderStyle& st,
                          const std::vector<Cell>& marks) {
  std::vector<IsoCube> cubes;
  for (const auto& c : grid.cells()) {
    const bool marked = std::find(marks.begin(), marks.end(), c) != marks.end();
    cubes.push_back({c, marked ? palette_at(st, kMarkerColor) : st.cube_color});
  }
  return iso_document(std::move(cubes), grid.dims(), st);
}

Document render_isometric(const BlockScene& scene, Dims dims, const RenderStyle& st) {
  std::vector<IsoCube> cubes;
  for (const auto& q : scene) cubes.push_back({q.pos, palette_at(st, q.color)});
  return iso_document(std::move(cubes), dims, st);
}

// ---------------------------------------------------------------------------

namespace {

struct ViewShape {
  int rows, cols;
};

ViewShape view_shape(const Dims& d, View v) {
  switch (v) {
    case View::Front: return {d.z, d.x};
    case View::Top: return {d.y, d.x};
    case View::Left:
    case View::Right: return {d.z, d.y};
  }
  return {0, 0};
}

// First cube met along the view ray through silhouette cell (r, c), and its
// distance from the viewer in cells.
std::optional<std::pair<Cell, int>> first_cube(const OccupancyGrid& g, View v, int r, int c) {
  const Dims& d = g.dims();
  switch (v) {
    case View::Front:
      for (int y = 0; y < d.y; ++y)
        if (g.at(c, y, d.z - 1 - r)) return std::pair{Cell{c, y, d.z - 1 - r}, y};
      break;
    case View::Top:
      for (int z = d.z - 1; z >= 0; --z)
        if (g.at(c, d.y - 1 - r, z)) return std::pair{Cell{c, d.y - 1 - r, z}, d.z - 1 - z};
      break;
    case View::Left:
      for (int x = 0; x < d.x; ++x)
        if (g.at(x, d.y - 1 - c, d.z - 1 - r)) return std::pair{Cell{x, d.y - 1 - c, d.z - 1 - r}, x};
      break;
    case View::Right:
      for (int x = d.x - 1; x >= 0; --x)
        if (g.at(x, c, d.z - 1 - r)) return std::pair{Cell{x, c, d.z - 1 - r}, d.x - 1 - x};
      break;
  }
  return std::nullopt;
}

std::pair<int, int> view_cell(const Dims& d, View v, const Cell& c) {
  switch (v) {
    case View::Front: return {d.z - 1 - c.z, c.x};
    case View::Top: return {d.y - 1 - c.y, c.x};
    case View::Left: return {d.z - 1 - c.z, d.y - 1 - c.y};
    case View::Right: return {d.z - 1 - c.z, c.y};
  }
  return {0, 0};
}

}  // namespace

bool visible_in_view(const OccupancyGrid& grid, View view, const Cell& c) {
  if (!grid.at(c)) return false;
  auto [r, col] = view_cell(grid.dims(), view, c);
  auto hit = first_cube(grid, view, r, col);
  return hit && hit->first == c;
}

Document render_view(const OccupancyGrid& grid, View view, const RenderStyle& st,
                     const std::vector<Cell>& marks) {
  const auto [rows, cols] = view_shape(grid.dims(), view);
  const double u = st.cell_px, m = st.margin;
  Document doc = blank(cols * u + 2 * m, rows * u + 2 * m, st);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      auto hit = first_cube(grid, view, r, c);
      if (!hit) continue;
      const bool marked = std::find(marks.begin(), marks.end(), hit->first) != marks.end();
      doc.rect("cell", m + c * u, m + r * u, u, u, marked ? palette_at(st, kMarkerColor) : st.cube_color,
               st.line_color, st.stroke_width);
    }
  return doc;
}

std::vector<Document> render_views(const OccupancyGrid& grid, const std::vector<View>& which,
                                   const RenderStyle& st, const std::vector<Cell>& marks) {
  for (const auto& mk : marks) {
    const bool seen = std::any_of(which.begin(), which.end(),
                                  [&](View v) { return visible_in_view(grid, v, mk); });
    if (!seen) throw Error("render_views: marked cube is hidden in every requested view");
  }
  std::vector<Document> out;
  for (View v : which) out.push_back(render_view(grid, v, st, marks));
  return out;
}

Document render_line_drawing(const OccupancyGrid& part, View view, const RenderStyle& st) {
  const auto [rows, cols] = view_shape(part.dims(), view);
  const double u = st.cell_px, m = st.margin, sw = st.stroke_width * 1.5;
  Document doc = blank(cols * u + 2 * m, rows * u + 2 * m, st);
  std::vector<int> depth(static_cast<std::size_t>(rows) * cols, -1);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (auto hit = first_cube(part, view, r, c)) depth[static_cast<std::size_t>(r) * cols + c] = hit->second;
  auto at = [&](int r, int c) {
    if (r < 0 || c < 0 || r >= rows || c >= cols) return -1;
    return depth[static_cast<std::size_t>(r) * cols + c];
  };
  // 0 none, 1 boundary, 2 internal
  auto edge_kind = [](int a, int b) {
    if (a == b) return 0;
    return (a < 0 || b < 0) ? 1 : 2;
  };
  auto emit = [&](int kind, double x1, double y1, double x2, double y2) {
    doc.line(kind == 1 ? "boundary" : "internal", x1, y1, x2, y2, st.line_color, sw);
  };
  for (int r = 0; r <= rows; ++r) {
    int run_kind = 0, run_start = 0;
    for (int c = 0; c <= cols; ++c) {
      const int k = c < cols ? edge_kind(at(r - 1, c), at(r, c)) : 0;
      if (k != run_kind) {
        if (run_kind) emit(run_kind, m + run_start * u, m + r * u, m + c * u, m + r * u);
        run_kind = k;
        run_start = c;
      }
    }
  }
  for (int c = 0; c <= cols; ++c) {
    int run_kind = 0, run_start = 0;
    for (int r = 0; r <= rows; ++r) {
      const int k = r < rows ? edge_kind(at(r, c - 1), at(r, c)) : 0;
      if (k != run_kind) {
        if (run_kind) emit(run_kind, m + c * u, m + run_start * u, m + c * u, m + r * u);
        run_kind = k;
        run_start = r;
      }
    }
  }
  return doc;
}

const char* to_string(ViewTransform t) {
  switch (t) {
    case ViewTransform::DeleteInternalLine: return "delete-internal-line";
    case ViewTransform::Rotate90: return "rotate-90";
    case ViewTransform::Flip: return "flip";
  }
  return "?";
}

Document transform_view_drawing(const Document& doc, ViewTransform mode, Rng& rng) {
  switch (mode) {
    case ViewTransform::DeleteInternalLine: {
      std::vector<std::size_t> internal;
      for (std::size_t i = 0; i < doc.items.size(); ++i)
        if (doc.items[i].role == "internal") internal.push_back(i);
      if (internal.empty()) throw Error("transform_view_drawing: no internal line to delete");
      Document out = doc;
      out.items.erase(out.items.begin() + static_cast<std::ptrdiff_t>(rng.pick(internal)));
      return out;
    }
    case ViewTransform::Rotate90: return rotate_document(doc, 1);
    case ViewTransform::Flip: return flip_document(doc);
  }
  return doc;
}

// ---------------------------------------------------------------------------

Document render_net(const NetLayout& layout, const FaceMap& faces, const RenderStyle& st) {
  int rows = 0, cols = 0;
  for (const auto& p : layout.placement) {
    rows = std::max(rows, p[0] + 1);
    cols = std::max(cols, p[1] + 1);
  }
  const double u = st.cell_px, m = st.margin;
  Document doc = blank(cols * u + 2 * m, rows * u + 2 * m, st);
  for (Face f : kFaces) {
    const auto& p = layout.placement[static_cast<std::size_t>(f)];
    draw_pattern(doc, drawn_cell(layout, faces, f), {m + p[1] * u, m + p[0] * u, u, 0, 0, u}, st);
  }
  return doc;
}

Document render_corner_view(const CornerView& view, const RenderStyle& st) {
  const Vec3i dir = corner_direction(view.corner);
  const Vec3 d = normalized({double(dir[0]), double(dir[1]), double(dir[2])});
  const Vec3 up = normalized(Vec3{0, 0, 1} - dot(Vec3{0, 0, 1}, d) * d);
  const Vec3 right = cross(up, d);
  const double s = st.cell_px * 2.5;
  auto to3 = [](const Vec3i& v) { return Vec3{double(v[0]), double(v[1]), double(v[2])}; };
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (int i = 0; i < 8; ++i) {
    const Vec3 p{(i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, (i & 4) ? 0.5 : -0.5};
    const double px = s * dot(p, right), py = -s * dot(p, up);
    x0 = std::min(x0, px);
    y0 = std::min(y0, py);
    x1 = std::max(x1, px);
    y1 = std::max(y1, py);
  }
  Document doc = blank(x1 - x0 + 2 * st.margin, y1 - y0 + 2 * st.margin, st);
  const double ox = st.margin - x0, oy = st.margin - y0;
  for (const auto& slot : view.slots) {
    Vec3i pup = slot.up;
    if (pup == Vec3i{0, 0, 0}) pup = slot.normal[2] != 0 ? Vec3i{0, 1, 0} : Vec3i{0, 0, 1};
    const Vec3 n = to3(slot.normal), vu = to3(pup), vr = to3(cross(pup, slot.normal));
    const Vec3 origin = 0.5 * n - 0.5 * vr + 0.5 * vu;
    const Frame2 f{ox + s * dot(origin, right), oy - s * dot(origin, up), s * dot(vr, right),
                   -s * dot(vr, up), -s * dot(vu, right), s * dot(vu, up)};
    draw_pattern(doc, {slot.pattern, 0}, f, st);
  }
  return doc;
}

Document render_section(const SectionPolygons& section, double half_extent, const RenderStyle& st) {
  if (half_extent <= 0) throw Error("render_section: half extent must be positive");
  const double side = st.cell_px * 8, m = st.margin;
  const double s = side / (2 * half_extent);
  Document doc = blank(side + 2 * m, side + 2 * m, st);
  const double c = m + side / 2;
  const int steps = static_cast<int>(std::floor(half_extent / 0.5));
  for (int i = -steps; i <= steps; ++i) {
    const double t = c + i * 0.5 * s;
    doc.line("grid", t, m, t, m + side, "#e3e3e3", 1.0);
    doc.line("grid", m, t, m + side, t, "#e3e3e3", 1.0);
  }
  for (const auto& loop : section.loops) {
    std::vector<double> pts;
    const std::size_t n = loop.size() > 1 && loop.front() == loop.back() ? loop.size() - 1 : loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(c + loop[i][0] * s);
      pts.push_back(c - loop[i][1] * s);
    }
    if (pts.size() >= 6) doc.polygon("section", std::move(pts), palette_at(st, 1), st.line_color, st.stroke_width);
  }
  return doc;
}

Document render_composite(const Mesh& mesh, const Plane& plane, const RenderStyle& st) {
  Iso iso(st, st.cell_px * 1.5);
  const Vec3 view = normalized({1, -1, 1});
  const Vec3 light = normalized({0.4, -0.7, 0.9});
  const Vec3 lo = mesh.bbox_min(), hi = mesh.bbox_max();
  const Vec3 centre = 0.5 * (lo + hi);
  const double half = 0.6 * std::sqrt(dot(hi - lo, hi - lo));
  const Vec3 pc = centre - (dot(plane.normal, centre) - plane.offset) * plane.normal;
  const PlaneFrame pf = plane_frame(plane);
  const std::vector<Vec3> patch = {pc - half * pf.u - half * pf.v, pc + half * pf.u - half * pf.v,
                                   pc + half * pf.u + half * pf.v, pc - half * pf.u + half * pf.v};
  std::vector<Vec3> all = patch;
  for (const auto& part : mesh.parts) all.insert(all.end(), part.vertices.begin(), part.vertices.end());
  auto [w, h] = iso.fit(all, st.margin);
  Document doc = blank(w, h, st);

  struct FaceDraw {
    double depth;
    std::vector<double> pts;
    std::string fill;
  };
  std::vector<FaceDraw> faces;
  for (const auto& part : mesh.parts)
    for (const auto& face : part.faces) {
      const Vec3& a = part.vertices[static_cast<std::size_t>(face[0])];
      const Vec3& b = part.vertices[static_cast<std::size_t>(face[1])];
      const Vec3& c = part.vertices[static_cast<std::size_t>(face[2])];
      const Vec3 n = normalized(cross(b - a, c - a));
      if (dot(n, view) <= 1e-9) continue;
      Vec3 centroid;
      FaceDraw fd;
      for (int idx : face) {
        const Vec3& p = part.vertices[static_cast<std::size_t>(idx)];
        centroid = centroid + p;
        auto [x, y] = iso(p.x, p.y, p.z);
        fd.pts.push_back(x);
        fd.pts.push_back(y);
      }
      centroid = (1.0 / face.size()) * centroid;
      fd.depth = dot(centroid, view);
      fd.fill = shade(st.cube_color, 0.55 + 0.45 * std::max(0.0, dot(n, light)));
      faces.push_back(std::move(fd));
    }
  std::stable_sort(faces.begin(), faces.end(), [](const FaceDraw& a, const FaceDraw& b) { return a.depth < b.depth; });
  for (auto& f : faces) doc.polygon("solid", std::move(f.pts), f.fill, st.line_color, st.stroke_width * 0.5);
  std::vector<double> outline;
  for (const auto& p : patch) {
    auto [x, y] = iso(p.x, p.y, p.z);
    outline.push_back(x);
    outline.push_back(y);
  }
  doc.polygon("plane", std::move(outline), "none", palette_at(st, kMarkerColor), st.stroke_width * 1.5);
  return doc;
}

// ---------------------------------------------------------------------------

namespace {

void draw_arrow_cell(Document& doc, double cx, double cy, double u, int orient, const std::string& fill,
                     const RenderStyle& st) {
  std::array<std::pair<double, double>, 3> pts = {{{0, -0.36}, {0.28, 0.3}, {-0.28, 0.3}}};
  std::vector<double> out;
  for (auto [x, y] : pts) {
    for (int i = 0; i < orient; ++i) std::tie(x, y) = std::pair{-y, x};
    out.push_back(cx + x * u);
    out.push_back(cy + y * u);
  }
  doc.polygon("arrow", std::move(out), fill, st.line_color, st.stroke_width);
}

Document arrow_grid(int width, int height, const RenderStyle& st) {
  const double u = st.cell_px, m = st.margin;
  Document doc = blank(width * u + 2 * m, height * u + 2 * m, st);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      doc.rect("cell", m + c * u, m + r * u, u, u, "none", "#999999", st.stroke_width * 0.5);
  return doc;
}

}  // namespace

Document render_arrow(const ArrowState& s, const RenderStyle& st) {
  Document doc = arrow_grid(s.width, s.height, st);
  const double u = st.cell_px, m = st.margin;
  draw_arrow_cell(doc, m + (s.x + 0.5) * u, m + (s.height - 1 - s.y + 0.5) * u, u, s.orient,
                  palette_at(st, 1), st);
  return doc;
}

Document render_arrow_map(const ArrowMapState& s, const RenderStyle& st) {
  Document doc = arrow_grid(s.width, s.height, st);
  const double u = st.cell_px, m = st.margin;
  for (int y = 0; y < s.height; ++y)
    for (int x = 0; x < s.width; ++x)
      if (const auto& a = s.at(x, y))
        draw_arrow_cell(doc, m + (x + 0.5) * u, m + (s.height - 1 - y + 0.5) * u, u, a->orient,
                        palette_at(st, a->color), st);
  return doc;
}

namespace {

Document sheet(int rows, int cols, const RenderStyle& st, auto cell_state) {
  const double u = st.cell_px, m = st.margin;
  Document doc = blank(cols * u + 2 * m, rows * u + 2 * m, st);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int v = cell_state(r, c);
      if (v < 0)
        doc.rect("outline", m + c * u, m + r * u, u, u, "none", "#d0d0d0", st.stroke_width * 0.5);
      else
        doc.rect("paper", m + c * u, m + r * u, u, u, st.paper_color, "#8a7a5a", st.stroke_width * 0.5);
    }
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (cell_state(r, c) == 1) doc.circle("hole", m + (c + 0.5) * u, m + (r + 0.5) * u, u * 0.22, "#222222");
  return doc;
}

}  // namespace

Document render_paper(const PaperState& state, const RenderStyle& st) {
  return sheet(state.original_rows(), state.original_cols(), st,
               [&](int r, int c) { return state.at(r, c); });
}

Document render_holes(const HoleGrid& holes, const RenderStyle& st) {
  return sheet(holes.rows, holes.cols, st, [&](int r, int c) { return holes.at(r, c) ? 1 : 0; });
}

}  // namespace spatialviz
