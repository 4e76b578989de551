#pragma once

#include <string>
#include <vector>

namespace spatialviz {

enum class PrimKind { Rect, Polygon, Line, Circle, Text };
const char* to_string(PrimKind k);

/// One drawing primitive. `coords` holds x, y, width, height for rects; x0, y0,
/// x1, y1, ... for polygons; x1, y1, x2, y2 for lines; cx, cy, r for circles and
/// x, y, font size for text (baseline-left anchor).
struct Primitive {
  PrimKind kind = PrimKind::Rect;
  std::string role;
  std::vector<double> coords;
  std::string fill = "none";
  std::string stroke = "none";
  double stroke_width = 0;
  std::string text;
  bool operator==(const Primitive&) const = default;
};

struct Document {
  double width = 0;
  double height = 0;
  std::string background = "#ffffff";
  std::vector<Primitive> items;

  Primitive& rect(const std::string& role, double x, double y, double w, double h,
                  const std::string& fill, const std::string& stroke = "none", double sw = 0);
  Primitive& polygon(const std::string& role, std::vector<double> pts, const std::string& fill,
                     const std::string& stroke = "none", double sw = 0);
  Primitive& line(const std::string& role, double x1, double y1, double x2, double y2,
                  const std::string& stroke, double sw);
  Primitive& circle(const std::string& role, double cx, double cy, double r,
                    const std::string& fill, const std::string& stroke = "none", double sw = 0);
  Primitive& text(const std::string& role, double x, double y, double size, const std::string& s,
                  const std::string& fill);
  bool operator==(const Document&) const = default;
};

/// Fixed three-decimal formatting used by both the SVG writer and the digest.
std::string format_number(double v);

std::string to_svg(const Document& doc);
/// Reads documents written by to_svg. Throws Error on anything else.
Document parse_svg(const std::string& svg);
/// Hash of the quantised primitives, independent of their order and roles.
std::string digest(const Document& doc);

/// x' = a x + c y + e, y' = b x + d y + f.
struct Affine2 {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;
};

/// Applies an affine map to every primitive. Rects must stay axis-aligned.
Document transform(const Document& doc, const Affine2& m, double new_width, double new_height);
/// Clockwise quarter turns of the whole canvas.
Document rotate_document(const Document& doc, int quarter_turns);
Document flip_document(const Document& doc);

}  // namespace spatialviz
