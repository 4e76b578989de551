#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spatialviz/common.hpp"
#include "spatialviz/document.hpp"
#include "spatialviz/patterns.hpp"
#include "spatialviz/sim.hpp"
#include "spatialviz/solids.hpp"
#include "spatialviz/voxel.hpp"

namespace spatialviz {

struct RenderStyle {
  std::vector<std::string> palette;  // indexed like palette_hex
  double top_shade = 1.0;
  double left_shade = 0.8;
  double right_shade = 0.65;
  double iso_angle_deg = 30.0;
  double stroke_width = 1.5;
  double cell_px = 40.0;
  double margin = 16.0;
  std::string line_color = "#222222";
  std::string cube_color = "#b8c4d6";
  std::string paper_color = "#f3e3c3";
  std::string glyph_color = "#333333";
  std::string background = "#ffffff";
};

RenderStyle default_style();
/// Multiplies each channel by factor and rounds.
std::string shade(const std::string& hex, double factor);

Document render_grid2d(const Grid2D& grid, const RenderStyle& style);

/// x runs right-down and y right-up on screen, z up; the visible faces are
/// top, front (-y, left-hand shade) and +x (right-hand shade). Marked cells
/// are filled with the marker colour.
Document render_isometric(const OccupancyGrid& grid, const RenderStyle& style,
                          const std::vector<Cell>& marks = {});
Document render_isometric(const BlockScene& scene, Dims dims, const RenderStyle& style);

/// Orthographic silhouette with one square per visible cell. A marked cube
/// turns its cell red when it is the first cube along the view direction.
Document render_view(const OccupancyGrid& grid, View view, const RenderStyle& style,
                     const std::vector<Cell>& marks = {});
/// Throws when some mark is hidden in every requested view.
std::vector<Document> render_views(const OccupancyGrid& grid, const std::vector<View>& which,
                                   const RenderStyle& style, const std::vector<Cell>& marks = {});
/// Whether the cube is the first one met along the view direction.
bool visible_in_view(const OccupancyGrid& grid, View view, const Cell& c);

/// Engineering-style drawing: maximal segments where the visible depth
/// changes. Segments bordering empty space have role "boundary", the rest
/// "internal".
Document render_line_drawing(const OccupancyGrid& part, View view, const RenderStyle& style);

enum class ViewTransform { DeleteInternalLine, Rotate90, Flip };
const char* to_string(ViewTransform t);
/// DeleteInternalLine removes one random "internal" segment and throws when
/// there is none.
Document transform_view_drawing(const Document& doc, ViewTransform mode, Rng& rng);

Document render_net(const NetLayout& layout, const FaceMap& faces, const RenderStyle& style);
Document render_corner_view(const CornerView& view, const RenderStyle& style);

/// Loops drawn at a fixed scale on a square canvas of +-half_extent units so
/// that sections of different solids compare by size as well as shape.
Document render_section(const SectionPolygons& section, double half_extent,
                        const RenderStyle& style);
/// Shaded composite with the cutting plane outlined in red.
Document render_composite(const Mesh& mesh, const Plane& plane, const RenderStyle& style);

Document render_arrow(const ArrowState& state, const RenderStyle& style);
Document render_arrow_map(const ArrowMapState& state, const RenderStyle& style);

/// Sheet with folded-away cells left blank and punched cells drawn as holes.
Document render_paper(const PaperState& state, const RenderStyle& style);
Document render_holes(const HoleGrid& holes, const RenderStyle& style);

}  // namespace spatialviz
