#include "spatialviz/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "spatialviz/common.hpp"

namespace spatialviz {

std::array<std::uint8_t, 3> Image::pixel(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

std::array<std::uint8_t, 3> parse_color(const std::string& hex) {
  if (hex.size() != 7 || hex[0] != '#') throw Error("unsupported colour '" + hex + "'");
  std::array<std::uint8_t, 3> out{};
  for (int i = 0; i < 3; ++i) {
    int v = 0;
    for (int j = 1; j <= 2; ++j) {
      const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[2 * i + j])));
      if (c >= '0' && c <= '9')
        v = v * 16 + (c - '0');
      else if (c >= 'a' && c <= 'f')
        v = v * 16 + (c - 'a' + 10);
      else
        throw Error("unsupported colour '" + hex + "'");
    }
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
  }
  return out;
}

namespace {

using Poly = std::vector<std::array<double, 2>>;

// 3x5 bitmap font, rows top to bottom.
struct FontGlyph {
  char ch;
  const char* bits;
};

constexpr FontGlyph kFont[] = {
    {'0', "111101101101111"}, {'1', "010110010010111"}, {'2', "111001111100111"},
    {'3', "111001111001111"}, {'4', "101101111001001"}, {'5', "111100111001111"},
    {'6', "111100111101111"}, {'7', "111001001010010"}, {'8', "111101111101111"},
    {'9', "111101111001111"}, {'A', "010101111101101"}, {'B', "110101110101110"},
    {'C', "011100100100011"}, {'D', "110101101101110"}, {'E', "111100110100111"},
    {'F', "111100110100100"}, {'G', "011100101101011"}, {'H', "101101111101101"},
    {'I', "111010010010111"}, {'J', "001001001101010"}, {'K', "101101110101101"},
    {'L', "100100100100111"}, {'M', "101111111101101"}, {'N', "110101101101101"},
    {'O', "010101101101010"}, {'P', "110101110100100"}, {'Q', "010101101110011"},
    {'R', "110101110101101"}, {'S', "011100010001110"}, {'T', "111010010010010"},
    {'U', "101101101101111"}, {'V', "101101101101010"}, {'W', "101101111111101"},
    {'X', "101101010101101"}, {'Y', "101101010010010"}, {'Z', "111001010100111"},
    {'-', "000000111000000"}, {'.', "000000000000010"}, {':', "000010000010000"},
    {'?', "111001010000010"}, {'(', "010100100100010"}, {')', "010001001001010"},
    {',', "000000000010100"}, {'+', "000010111010000"}, {' ', "000000000000000"},
};

const char* glyph_bits(char c) {
  const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& g : kFont)
    if (g.ch == u) return g.bits;
  return glyph_bits('?');
}

class Canvas {
 public:
  Canvas(int w, int h, std::array<std::uint8_t, 3> bg) : w_(w), h_(h), px_(static_cast<std::size_t>(w) * h, bg) {}

  // Even-odd fill, sampling at pixel centres.
  void fill(const std::vector<Poly>& polys, std::array<std::uint8_t, 3> color) {
    double y_min = 1e300, y_max = -1e300;
    for (const auto& p : polys)
      for (const auto& v : p) {
        y_min = std::min(y_min, v[1]);
        y_max = std::max(y_max, v[1]);
      }
    if (y_min > y_max) return;
    const int r0 = std::max(0, static_cast<int>(std::floor(y_min)));
    const int r1 = std::min(h_ - 1, static_cast<int>(std::ceil(y_max)));
    std::vector<double> xs;
    for (int row = r0; row <= r1; ++row) {
      const double yc = row + 0.5;
      xs.clear();
      for (const auto& p : polys)
        for (std::size_t i = 0; i < p.size(); ++i) {
          const auto& a = p[i];
          const auto& b = p[(i + 1) % p.size()];
          if ((a[1] <= yc && yc < b[1]) || (b[1] <= yc && yc < a[1]))
            xs.push_back(a[0] + (yc - a[1]) * (b[0] - a[0]) / (b[1] - a[1]));
        }
      std::sort(xs.begin(), xs.end());
      for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
        const int c0 = std::max(0, static_cast<int>(std::ceil(xs[i] - 0.5)));
        const int c1 = std::min(w_ - 1, static_cast<int>(std::ceil(xs[i + 1] - 0.5)) - 1);
        for (int c = c0; c <= c1; ++c) px_[static_cast<std::size_t>(row) * w_ + c] = color;
      }
    }
  }

  Image downsample(int factor) const {
    Image img;
    img.width = w_ / factor;
    img.height = h_ / factor;
    img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    const int n = factor * factor;
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        for (int ch = 0; ch < 3; ++ch) {
          int sum = 0;
          for (int dy = 0; dy < factor; ++dy)
            for (int dx = 0; dx < factor; ++dx)
              sum += px_[static_cast<std::size_t>(y * factor + dy) * w_ + x * factor + dx][static_cast<std::size_t>(ch)];
          img.rgb[(static_cast<std::size_t>(y) * img.width + x) * 3 + static_cast<std::size_t>(ch)] =
              static_cast<std::uint8_t>((sum + n / 2) / n);
        }
    return img;
  }

 private:
  int w_, h_;
  std::vector<std::array<std::uint8_t, 3>> px_;
};

Poly segment_quad(double x1, double y1, double x2, double y2, double width) {
  const double len = std::hypot(x2 - x1, y2 - y1);
  const double h = width / 2;
  if (len < 1e-12) return {{x1 - h, y1 - h}, {x1 + h, y1 - h}, {x1 + h, y1 + h}, {x1 - h, y1 + h}};
  const double nx = -(y2 - y1) / len * h, ny = (x2 - x1) / len * h;
  const double tx = (x2 - x1) / len * h, ty = (y2 - y1) / len * h;
  return {{x1 - tx + nx, y1 - ty + ny},
          {x2 + tx + nx, y2 + ty + ny},
          {x2 + tx - nx, y2 + ty - ny},
          {x1 - tx - nx, y1 - ty - ny}};
}

void stroke_outline(Canvas& cv, const Poly& p, double width, std::array<std::uint8_t, 3> color) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % p.size()];
    cv.fill({segment_quad(a[0], a[1], b[0], b[1], width)}, color);
  }
}

Poly circle_poly(double cx, double cy, double r) {
  constexpr int kSegments = 48;
  Poly p;
  for (int i = 0; i < kSegments; ++i) {
    const double t = 2 * std::numbers::pi * i / kSegments;
    p.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
  }
  return p;
}

}  // namespace

Image rasterize(const Document& doc, int width_px) {
  if (width_px < 1 || doc.width <= 0 || doc.height <= 0) throw Error("rasterize: empty canvas");
  const int height_px = std::max(1, static_cast<int>(std::lround(doc.height * width_px / doc.width)));
  const double s = static_cast<double>(width_px) * kSupersample / doc.width;
  Canvas cv(width_px * kSupersample, height_px * kSupersample, parse_color(doc.background));
  auto stroke_width = [&](double w) { return std::max(1.0, w * s); };

  for (const auto& p : doc.items) {
    const auto& c = p.coords;
    const bool has_fill = p.fill != "none";
    const bool has_stroke = p.stroke != "none" && p.stroke_width > 0;
    switch (p.kind) {
      case PrimKind::Rect: {
        const Poly q = {{c[0] * s, c[1] * s},
                        {(c[0] + c[2]) * s, c[1] * s},
                        {(c[0] + c[2]) * s, (c[1] + c[3]) * s},
                        {c[0] * s, (c[1] + c[3]) * s}};
        if (has_fill) cv.fill({q}, parse_color(p.fill));
        if (has_stroke) stroke_outline(cv, q, stroke_width(p.stroke_width), parse_color(p.stroke));
        break;
      }
      case PrimKind::Polygon: {
        Poly q;
        for (std::size_t i = 0; i < c.size(); i += 2) q.push_back({c[i] * s, c[i + 1] * s});
        if (has_fill) cv.fill({q}, parse_color(p.fill));
        if (has_stroke) stroke_outline(cv, q, stroke_width(p.stroke_width), parse_color(p.stroke));
        break;
      }
      case PrimKind::Line:
        if (has_stroke)
          cv.fill({segment_quad(c[0] * s, c[1] * s, c[2] * s, c[3] * s, stroke_width(p.stroke_width))},
                  parse_color(p.stroke));
        break;
      case PrimKind::Circle: {
        const Poly q = circle_poly(c[0] * s, c[1] * s, c[2] * s);
        if (has_fill) cv.fill({q}, parse_color(p.fill));
        if (has_stroke) stroke_outline(cv, q, stroke_width(p.stroke_width), parse_color(p.stroke));
        break;
      }
      case PrimKind::Text: {
        if (!has_fill) break;
        const double unit = c[2] * s / 5.0;
        const double top = c[1] * s - c[2] * s;
        std::vector<Poly> cells;
        double x = c[0] * s;
        for (char ch : p.text) {
          const char* bits = glyph_bits(ch);
          for (int r = 0; r < 5; ++r)
            for (int col = 0; col < 3; ++col)
              if (bits[r * 3 + col] == '1') {
                const double x0 = x + col * unit, y0 = top + r * unit;
                cells.push_back({{x0, y0}, {x0 + unit, y0}, {x0 + unit, y0 + unit}, {x0, y0 + unit}});
              }
          x += 4 * unit;
        }
        for (const auto& cell : cells) cv.fill({cell}, parse_color(p.fill));
        break;
      }
    }
  }
  return cv.downsample(kSupersample);
}

namespace {

void write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
  if (image.width < 1 || image.height < 1) throw Error("encode_png: empty image");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("encode_png: libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("encode_png: libpng init failed");
  }
  std::vector<std::uint8_t> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("encode_png: libpng error");
  }
  png_set_write_fn(png, &out, write_to_vector, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y)
    png_write_row(png, const_cast<png_bytep>(image.rgb.data() + static_cast<std::size_t>(y) * image.width * 3));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace spatialviz
