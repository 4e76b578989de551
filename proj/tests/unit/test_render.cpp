#include "catch_amalgamated.hpp"
#include "spatialviz/raster.hpp"
#include "spatialviz/render.hpp"

using namespace spatialviz;

namespace {

Document sample() {
  Document d;
  d.width = 120;
  d.height = 80;
  d.rect("cell", 10, 10, 30, 20, "#ff0000", "#000000", 1.5);
  d.polygon("face", {50, 10, 90, 10, 70, 40}, "#00ff00");
  d.line("edge", 0, 79, 119, 0, "#222222", 2);
  d.circle("hole", 100, 60, 8, "#ffffff", "#000000", 1);
  d.text("label", 5, 75, 12, "A & <b>", "#000000");
  return d;
}

}  // namespace

TEST_CASE("svg round trip is exact after one normalisation") {
  const Document once = parse_svg(to_svg(sample()));
  CHECK(parse_svg(to_svg(once)) == once);
  CHECK(to_svg(parse_svg(to_svg(once))) == to_svg(once));
  CHECK(once.items.size() == 5);
  CHECK(once.items[4].text == "A & <b>");
}

TEST_CASE("parse_svg rejects foreign input") {
  CHECK_THROWS_AS(parse_svg("<html></html>"), Error);
  CHECK_THROWS_AS(parse_svg(""), Error);
}

TEST_CASE("digest ignores primitive order and roles") {
  Document a = sample();
  Document b = a;
  std::reverse(b.items.begin(), b.items.end());
  for (auto& p : b.items) p.role = "x";
  CHECK(digest(a) == digest(b));
  b.items[0].coords[0] += 1;
  CHECK(digest(a) != digest(b));
}

TEST_CASE("whole-canvas rotations and flips") {
  const Document d = sample();
  Document turned = d;
  for (int i = 0; i < 4; ++i) turned = rotate_document(turned, 1);
  CHECK(digest(turned) == digest(d));
  const Document q = rotate_document(d, 1);
  CHECK(q.width == d.height);
  CHECK(q.height == d.width);
  CHECK(digest(flip_document(flip_document(d))) == digest(d));
  CHECK(digest(flip_document(d)) != digest(d));
}

TEST_CASE("number formatting is fixed") {
  CHECK(format_number(1) == "1.000");
  CHECK(format_number(-0.0004) == "0.000");
  CHECK(format_number(2.5) == "2.500");
}

TEST_CASE("colour parsing") {
  CHECK(parse_color("#ff8000") == std::array<std::uint8_t, 3>{255, 128, 0});
  CHECK_THROWS_AS(parse_color("red"), Error);
  CHECK(shade("#808080", 0.5) == "#404040");
}

TEST_CASE("rasterization fills shapes and is repeatable") {
  const Document d = sample();
  const Image a = rasterize(d, 240);
  const Image b = rasterize(d, 240);
  CHECK(a.width == 240);
  CHECK(a.height == 160);
  CHECK(a.rgb == b.rgb);
  CHECK(a.pixel(50, 40) == std::array<std::uint8_t, 3>{255, 0, 0});
  CHECK(a.pixel(140, 30) == std::array<std::uint8_t, 3>{0, 255, 0});
  CHECK(a.pixel(2, 2) == std::array<std::uint8_t, 3>{255, 255, 255});
  const auto png = encode_png(a);
  REQUIRE(png.size() > 8);
  CHECK(png[1] == 'P');
  CHECK(png[2] == 'N');
  CHECK(png[3] == 'G');
  CHECK(encode_png(b) == png);
}

TEST_CASE("isometric and view renderers") {
  const auto style = default_style();
  const auto g = OccupancyGrid::from_cells({2, 2, 2}, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const auto iso = render_isometric(g, style);
  CHECK(iso.width > 0);
  CHECK_FALSE(iso.items.empty());
  CHECK(digest(render_isometric(g, style, {{0, 0, 1}})) != digest(iso));
  CHECK(visible_in_view(g, View::Front, {0, 0, 0}));
  CHECK_FALSE(visible_in_view(g, View::Top, {0, 0, 0}));
  CHECK(digest(render_view(g, View::Left, style)) != digest(render_view(g, View::Right, style)));
  CHECK_THROWS_AS(render_views(g, {View::Top}, style, {{0, 0, 0}}), Error);
}

TEST_CASE("line drawings separate boundary and internal segments") {
  const auto style = default_style();
  const auto cube = OccupancyGrid::from_cells({1, 1, 1}, {{0, 0, 0}});
  const auto plain = render_line_drawing(cube, View::Front, style);
  for (const auto& p : plain.items)
    if (p.kind == PrimKind::Line) CHECK(p.role == "boundary");
  Rng rng(1);
  CHECK_THROWS_AS(transform_view_drawing(plain, ViewTransform::DeleteInternalLine, rng), Error);

  // A step seen from the front has a depth change inside the outline.
  const auto step = OccupancyGrid::from_cells({2, 2, 1}, {{0, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  const auto d = render_line_drawing(step, View::Front, style);
  const auto internal = std::count_if(d.items.begin(), d.items.end(), [](const Primitive& p) { return p.role == "internal"; });
  CHECK(internal > 0);
  const auto cut = transform_view_drawing(d, ViewTransform::DeleteInternalLine, rng);
  CHECK(cut.items.size() + 1 == d.items.size());
}

TEST_CASE("net, corner view, section and paper renderers") {
  const auto style = default_style();
  FaceMap faces{};
  for (int i = 0; i < 6; ++i) faces[i] = {1 + i, 0};
  const auto net = canonical_net(kPivotNet);
  const auto nd = render_net(net, faces, style);
  CHECK(std::count_if(nd.items.begin(), nd.items.end(), [](const Primitive& p) { return p.kind == PrimKind::Rect; }) >= 6);
  const auto cube = fold_net(net, faces);
  CHECK(digest(render_corner_view(corner_view(cube, 1), style)) != digest(render_corner_view(corner_view(cube, 2), style)));
  SectionPolygons sq{{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}}}};
  CHECK_FALSE(render_section(sq, 2, style).items.empty());
  auto paper = paper_punch(paper_fold(PaperState(4, 4), {FoldDirection::Vertical, 2}), {{0, 0}});
  CHECK_FALSE(render_paper(paper, style).items.empty());
  CHECK_FALSE(render_holes(paper_unfold(paper), style).items.empty());
}
