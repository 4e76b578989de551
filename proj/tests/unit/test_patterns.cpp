#include <set>

#include "catch_amalgamated.hpp"
#include "json.hpp"
#include "spatialviz/patterns.hpp"

using namespace spatialviz;

namespace {

FaceMap distinct_colors() {
  FaceMap f{};
  for (int i = 0; i < 6; ++i) f[i] = {1 + i, 0};
  return f;
}

FaceMap random_faces(Rng& rng) {
  FaceMap f{};
  for (int i = 0; i < 6; ++i) {
    const int g = rng.uniform_int(0, kGlyphCount - 1);
    f[i] = {kGlyphBase + 2 * g + rng.uniform_int(0, 1), rng.uniform_int(0, 3)};
  }
  return f;
}

int det(const Mat3i& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

TEST_CASE("palette has distinct colours and names") {
  std::set<std::string> hex, names;
  for (int i = 0; i < kPaletteSize; ++i) {
    hex.insert(palette_hex(i));
    names.insert(palette_name(i));
  }
  CHECK(hex.size() == kPaletteSize);
  CHECK(names.size() == kPaletteSize);
  CHECK(std::string(palette_name(kMarkerColor)) == "red");
}

TEST_CASE("pattern kinds and periods") {
  CHECK(pattern_kind(3) == PatternKind::Solid);
  CHECK(pattern_period(3) == 1);
  CHECK(pattern_kind(kGlyphBase) == PatternKind::Glyph);
  for (int id = kGlyphBase; id < kGlyphBase + 2 * kGlyphCount; ++id) {
    const int p = pattern_period(id);
    CHECK((p == 1 || p == 2 || p == 4));
  }
  const auto dots = make_dot_cell({1, 2, 3, 4, 1, 2, 3, 4, 1});
  CHECK(pattern_kind(dots.id) == PatternKind::Dots);
}

TEST_CASE("rotations compose modulo the period") {
  for (int id : {2, kGlyphBase, kGlyphBase + 3}) {
    const PatternCell c{id, 1};
    CHECK(canonical(rotated(c, 4)) == canonical(c));
    CHECK(canonical(rotated(rotated(c, 1), 3)) == canonical(c));
  }
}

TEST_CASE("flips are involutions") {
  for (int id = kGlyphBase; id < kGlyphBase + 2 * kGlyphCount; ++id)
    for (int r = 0; r < 4; ++r)
      for (FlipAxis a : {FlipAxis::Horizontal, FlipAxis::Vertical}) {
        const PatternCell c{id, r};
        CHECK(canonical(flipped(flipped(c, a), a)) == canonical(c));
      }
}

TEST_CASE("dot cells recover their colours") {
  const std::array<int, 9> colors = {1, 1, 2, 3, 4, 1, 2, 2, 3};
  const auto cell = make_dot_cell(colors);
  const auto upright = dot_colors(cell.id);
  // Drawing the canonical pattern at the returned rotation reproduces the input.
  CHECK(std::set<int>(upright.begin(), upright.end()) == std::set<int>(colors.begin(), colors.end()));
}

TEST_CASE("pattern library json is versioned") {
  const auto j = nlohmann::json::parse(pattern_library_json());
  CHECK(j.contains("version"));
}

TEST_CASE("grid rotation and flips") {
  Grid2D g(2, 3);
  g.at(0, 0) = PatternCell{1, 0};
  g.at(1, 2) = PatternCell{kGlyphBase, 1};
  g.marker = Corner::TopLeft;
  CHECK(rotate_grid(g, 4) == g);
  const auto r = rotate_grid(g, 1);
  CHECK(r.rows == 3);
  CHECK(r.cols == 2);
  CHECK(r.at(0, 1).has_value());  // (0,0) -> (0, rows-1)
  CHECK(flip_grid(flip_grid(g, FlipAxis::Horizontal), FlipAxis::Horizontal) == g);
  CHECK(flip_grid(flip_grid(g, FlipAxis::Vertical), FlipAxis::Vertical) == g);
}

TEST_CASE("the cube has 24 proper rotations") {
  const auto& rs = cube_rotations();
  REQUIRE(rs.size() == 24);
  std::set<Mat3i> unique(rs.begin(), rs.end());
  CHECK(unique.size() == 24);
  for (const auto& m : rs) CHECK(det(m) == 1);
}

TEST_CASE("face normals are consistent") {
  for (Face f : kFaces) {
    CHECK(face_from_normal(face_normal(f)) == f);
    CHECK(face_normal(opposite(f)) == -face_normal(f));
  }
}

TEST_CASE("all eleven nets fold onto the six faces") {
  REQUIRE(net_names().size() == 11);
  for (const auto& name : net_names()) {
    const auto frames = fold_frames(canonical_net(name));
    for (Face f : kFaces) {
      const auto& fr = frames[static_cast<int>(f)];
      CHECK(fr.normal == face_normal(f));
      CHECK(cross(fr.right, fr.up) == fr.normal);
    }
  }
  CHECK_THROWS_AS(canonical_net("9-9-9"), Error);
}

TEST_CASE("equivalent nets fold to the pivot cube") {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const auto faces = random_faces(rng);
    const auto pivot = fold_net(canonical_net(kPivotNet), faces);
    for (const auto& name : net_names()) {
      const auto layout = equivalent_net(name, faces);
      CHECK(cubes_equivalent(fold_net(layout, faces), pivot));
    }
  }
}

TEST_CASE("rotated cubes stay equivalent; swapped faces do not") {
  const auto faces = distinct_colors();
  const auto cube = fold_net(canonical_net(kPivotNet), faces);
  for (const auto& r : cube_rotations()) CHECK(cubes_equivalent(rotate_cube(cube, r), cube));
  auto swapped = faces;
  std::swap(swapped[0], swapped[2]);
  CHECK_FALSE(cubes_equivalent(fold_net(canonical_net(kPivotNet), swapped), cube));
}

TEST_CASE("opposite faces of a colour cube") {
  const auto cube = fold_net(canonical_net(kPivotNet), distinct_colors());
  for (Face f : kFaces) CHECK(opposite_face(cube, f) == opposite(f));
}

TEST_CASE("corner views are consistent and their mirrors are not") {
  const auto cube = fold_net(canonical_net(kPivotNet), distinct_colors());
  for (int corner = 1; corner <= 8; ++corner) {
    CHECK(corner_from_direction(corner_direction(corner)) == corner);
    const auto v = corner_view(cube, corner);
    CHECK(view_consistent(cube, v));
    CHECK_FALSE(view_consistent(cube, mirror_view(v, ViewMirror::Diagonal)));
    CHECK_FALSE(view_consistent(cube, mirror_view(v, ViewMirror::Vertical)));
  }
}
