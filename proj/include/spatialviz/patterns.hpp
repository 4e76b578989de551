#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "spatialviz/common.hpp"

namespace spatialviz {

// ---------------------------------------------------------------------------
// Pattern library
// ---------------------------------------------------------------------------

/// Palette index 0 is the red marker colour; face colours use 1..7.
inline constexpr int kPaletteSize = 8;
inline constexpr int kMarkerColor = 0;
const char* palette_hex(int color);
const char* palette_name(int color);

enum class PatternKind { Solid, Glyph, Dots };

inline constexpr int kGlyphBase = 100;
inline constexpr int kGlyphCount = 6;
inline constexpr int kDotBase = 1000;
/// Dot faces use these four palette colours, one per digit of the code.
inline constexpr std::array<int, 4> kDotColors = {1, 2, 3, 4};

/// A pattern drawn with `rotation` clockwise quarter turns.
///
/// Solid ids are palette indices. Glyph ids are kGlyphBase + 2*g + mirrored.
/// Dot ids are kDotBase + the smallest base-4 code in the rotation orbit of
/// the 3x3 colour grid.
struct PatternCell {
  int id = 1;
  int rotation = 0;
  auto operator<=>(const PatternCell&) const = default;
};

PatternKind pattern_kind(int id);
/// Smallest k > 0 with the pattern invariant under k clockwise quarter turns.
int pattern_period(int id);
/// Rotation reduced modulo the pattern's period.
PatternCell canonical(PatternCell c);
PatternCell rotated(PatternCell c, int quarter_turns);

enum class FlipAxis { Horizontal, Vertical };

/// Image of the cell under a left-right (Horizontal) or top-bottom (Vertical)
/// mirror.
PatternCell flipped(PatternCell c, FlipAxis axis);

/// Unit squares (col, row) of glyph g, rows growing downward, inside a
/// glyph_box() x glyph_box() box. Mirrored glyphs are reflected left-right.
std::vector<std::array<int, 2>> glyph_cells(int id);
inline constexpr int kGlyphBox = 4;
const char* glyph_name(int id);

/// Colours of the nine dots (row-major, as drawn at rotation 0).
std::array<int, 9> dot_colors(int id);
/// Canonical cell showing the given dot colours upright.
PatternCell make_dot_cell(const std::array<int, 9>& colors);

/// Versioned JSON description of the library (ids, symmetry, mirror links).
std::string pattern_library_json();

// ---------------------------------------------------------------------------
// 2D grids
// ---------------------------------------------------------------------------

enum class Corner { TopLeft, TopRight, BottomRight, BottomLeft };
const char* to_string(Corner c);

struct Grid2D {
  int rows = 0;
  int cols = 0;
  std::vector<std::optional<PatternCell>> cells;
  std::optional<Corner> marker;

  Grid2D() = default;
  Grid2D(int r, int c) : rows(r), cols(c), cells(static_cast<std::size_t>(r) * c) {}
  const std::optional<PatternCell>& at(int r, int c) const {
    return cells[static_cast<std::size_t>(r) * cols + c];
  }
  std::optional<PatternCell>& at(int r, int c) { return cells[static_cast<std::size_t>(r) * cols + c]; }
  bool operator==(const Grid2D&) const = default;
};

/// Clockwise quarter turns: cell (r, c) moves to (c, rows-1-r).
Grid2D rotate_grid(const Grid2D& grid, int quarter_turns);
Grid2D flip_grid(const Grid2D& grid, FlipAxis axis);

// ---------------------------------------------------------------------------
// Cubes and nets
// ---------------------------------------------------------------------------

enum class Face { Top, Bottom, Left, Right, Front, Back };
inline constexpr std::array<Face, 6> kFaces = {Face::Top,   Face::Bottom, Face::Left,
                                               Face::Right, Face::Front,  Face::Back};
const char* to_string(Face f);
Face opposite(Face f);

using Vec3i = std::array<int, 3>;
using Mat3i = std::array<std::array<int, 3>, 3>;

/// Outward normals: Top +z, Bottom -z, Right +x, Left -x, Front -y, Back +y.
Vec3i face_normal(Face f);
Face face_from_normal(const Vec3i& n);
Vec3i cross(const Vec3i& a, const Vec3i& b);
Vec3i operator-(const Vec3i& v);
Vec3i mat_apply(const Mat3i& m, const Vec3i& v);
/// Rotates v clockwise by k quarter turns about n, as seen from outside.
Vec3i turn_clockwise(Vec3i v, const Vec3i& n, int k);
/// The 24 proper rotations of the cube.
const std::vector<Mat3i>& cube_rotations();

using FaceMap = std::array<PatternCell, 6>;  // indexed by Face

struct NetLayout {
  std::string name;
  std::array<std::array<int, 2>, 6> placement{};  // (row, col) per Face
  std::array<int, 6> face_rotation{};            // clockwise quarter turns per Face
  bool operator==(const NetLayout&) const = default;
};

/// The 11 canonical net names; "1-4-1-0" is the pivot.
const std::vector<std::string>& net_names();
inline constexpr const char* kPivotNet = "1-4-1-0";
/// Layout with zero face rotations. Throws on an unknown name.
NetLayout canonical_net(const std::string& name);

/// Orientation of one net square after folding: right, up and outward normal.
struct SquareFrame {
  Vec3i right{};
  Vec3i up{};
  Vec3i normal{};
};

/// Hinge-folds the layout around the Bottom square (right +x, up -y, outward
/// -z). Throws when the squares are not edge-connected, overlap, or land on
/// normals other than their face names.
std::array<SquareFrame, 6> fold_frames(const NetLayout& layout);

struct CubeFace {
  int pattern = 1;
  /// Direction of the pattern's up edge, canonical for the pattern period:
  /// zero for period 1, the larger of +/-up for period 2.
  Vec3i up{};
  bool operator==(const CubeFace&) const = default;
};

struct CubeModel {
  std::array<CubeFace, 6> faces{};  // indexed by Face
  const CubeFace& face(Face f) const { return faces[static_cast<int>(f)]; }
  bool operator==(const CubeModel&) const = default;
};

Vec3i canonical_up(int pattern, const Vec3i& up);
CubeModel fold_net(const NetLayout& layout, const FaceMap& faces);
/// Rotates the whole cube by a proper rotation matrix.
CubeModel rotate_cube(const CubeModel& cube, const Mat3i& r);
bool cubes_equivalent(const CubeModel& a, const CubeModel& b);
/// Layout of target_net whose fold matches the pivot net's fold of `faces`.
NetLayout equivalent_net(const std::string& target_net, const FaceMap& faces);
/// Pattern drawn on the net square of face f.
PatternCell drawn_cell(const NetLayout& layout, const FaceMap& faces, Face f);
Face opposite_face(const CubeModel& cube, Face f);

/// Corners 1-4 see Top with (+x,-y), (-x,-y), (-x,+y), (+x,+y); corners 5-8
/// are the same columns seen from below.
Vec3i corner_direction(int corner);
int corner_from_direction(const Vec3i& d);

struct CornerSlot {
  Vec3i normal{};
  int pattern = 1;
  Vec3i up{};
  bool operator==(const CornerSlot&) const = default;
};

/// The three faces seen from a corner, ordered z-face, y-face, x-face.
struct CornerView {
  int corner = 1;
  std::array<CornerSlot, 3> slots{};
  bool operator==(const CornerView&) const = default;
};

CornerView corner_view(const CubeModel& cube, int corner);
/// Mirror image of a view. Diagonal reflects across the vertical plane
/// through the corner direction; Vertical reflects z.
enum class ViewMirror { Diagonal, Vertical };
CornerView mirror_view(const CornerView& view, ViewMirror how);
/// True iff some rotation of the cube shows exactly this view.
bool view_consistent(const CubeModel& cube, const CornerView& view);

}  // namespace spatialviz
