#include "spatialviz/document.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <tuple>

#include "spatialviz/common.hpp"

namespace spatialviz {

const char* to_string(PrimKind k) {
  switch (k) {
    case PrimKind::Rect: return "rect";
    case PrimKind::Polygon: return "polygon";
    case PrimKind::Line: return "line";
    case PrimKind::Circle: return "circle";
    case PrimKind::Text: return "text";
  }
  return "?";
}

Primitive& Document::rect(const std::string& role, double x, double y, double w, double h,
                          const std::string& fill, const std::string& stroke, double sw) {
  items.push_back({PrimKind::Rect, role, {x, y, w, h}, fill, stroke, sw, {}});
  return items.back();
}

Primitive& Document::polygon(const std::string& role, std::vector<double> pts,
                             const std::string& fill, const std::string& stroke, double sw) {
  if (pts.size() < 6 || pts.size() % 2) throw Error("polygon needs at least three points");
  items.push_back({PrimKind::Polygon, role, std::move(pts), fill, stroke, sw, {}});
  return items.back();
}

Primitive& Document::line(const std::string& role, double x1, double y1, double x2, double y2,
                          const std::string& stroke, double sw) {
  items.push_back({PrimKind::Line, role, {x1, y1, x2, y2}, "none", stroke, sw, {}});
  return items.back();
}

Primitive& Document::circle(const std::string& role, double cx, double cy, double r,
                            const std::string& fill, const std::string& stroke, double sw) {
  items.push_back({PrimKind::Circle, role, {cx, cy, r}, fill, stroke, sw, {}});
  return items.back();
}

Primitive& Document::text(const std::string& role, double x, double y, double size,
                          const std::string& s, const std::string& fill) {
  items.push_back({PrimKind::Text, role, {x, y, size}, fill, "none", 0, s});
  return items.back();
}

std::string format_number(double v) {
  const long long q = std::llround(v * 1000.0);
  const long long m = q < 0 ? -q : q;
  std::string frac = std::to_string(m % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return (q < 0 ? "-" : "") + std::to_string(m / 1000) + "." + frac;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape(const std::string& s) {
  static const std::pair<const char*, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool hit = false;
    if (s[i] == '&')
      for (const auto& [ent, ch] : kEntities) {
        const std::size_t n = std::char_traits<char>::length(ent);
        if (s.compare(i, n, ent) == 0) {
          out += ch;
          i += n;
          hit = true;
          break;
        }
      }
    if (!hit) out += s[i++];
  }
  return out;
}

std::string attr(const char* name, double v) {
  return std::string(" ") + name + "=\"" + format_number(v) + "\"";
}

std::string attr(const char* name, const std::string& v) {
  return std::string(" ") + name + "=\"" + escape(v) + "\"";
}

std::string paint_attrs(const Primitive& p) {
  std::string s = attr("fill", p.fill) + attr("stroke", p.stroke);
  if (p.stroke != "none") s += attr("stroke-width", p.stroke_width);
  return s;
}

std::string point_list(const std::vector<double>& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); i += 2) {
    if (i) s += ' ';
    s += format_number(c[i]) + "," + format_number(c[i + 1]);
  }
  return s;
}

std::string element(const Primitive& p) {
  const auto& c = p.coords;
  const std::string cls = p.role.empty() ? "" : attr("class", p.role);
  switch (p.kind) {
    case PrimKind::Rect:
      return "<rect" + cls + attr("x", c[0]) + attr("y", c[1]) + attr("width", c[2]) +
             attr("height", c[3]) + paint_attrs(p) + "/>";
    case PrimKind::Polygon:
      return "<polygon" + cls + " points=\"" + point_list(c) + "\"" + paint_attrs(p) + "/>";
    case PrimKind::Line:
      return "<line" + cls + attr("x1", c[0]) + attr("y1", c[1]) + attr("x2", c[2]) +
             attr("y2", c[3]) + paint_attrs(p) + "/>";
    case PrimKind::Circle:
      return "<circle" + cls + attr("cx", c[0]) + attr("cy", c[1]) + attr("r", c[2]) +
             paint_attrs(p) + "/>";
    case PrimKind::Text:
      return "<text" + cls + attr("x", c[0]) + attr("y", c[1]) + attr("font-size", c[2]) +
             attr("fill", p.fill) + ">" + escape(p.text) + "</text>";
  }
  return {};
}

}  // namespace

std::string to_svg(const Document& doc) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"" +
                  attr("width", doc.width) + attr("height", doc.height) + " viewBox=\"0 0 " +
                  format_number(doc.width) + " " + format_number(doc.height) + "\">\n";
  s += "<rect class=\"background\" x=\"0.000\" y=\"0.000\"" + attr("width", doc.width) +
       attr("height", doc.height) + attr("fill", doc.background) + " stroke=\"none\"/>\n";
  for (const auto& p : doc.items) s += element(p) + "\n";
  s += "</svg>\n";
  return s;
}

namespace {

struct Tag {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::string body;
};

class SvgReader {
 public:
  explicit SvgReader(const std::string& s) : s_(s) {}

  bool next(Tag& tag) {
    pos_ = s_.find('<', pos_);
    if (pos_ == std::string::npos) return false;
    std::size_t end = s_.find('>', pos_);
    if (end == std::string::npos) throw Error("parse_svg: unterminated tag");
    std::string inner = s_.substr(pos_ + 1, end - pos_ - 1);
    pos_ = end + 1;
    tag = {};
    if (!inner.empty() && inner[0] == '/') {
      tag.name = inner;
      return true;
    }
    const bool self_closing = !inner.empty() && inner.back() == '/';
    if (self_closing) inner.pop_back();
    std::size_t i = 0;
    while (i < inner.size() && !std::isspace(static_cast<unsigned char>(inner[i]))) ++i;
    tag.name = inner.substr(0, i);
    while (i < inner.size()) {
      while (i < inner.size() && std::isspace(static_cast<unsigned char>(inner[i]))) ++i;
      if (i >= inner.size()) break;
      const std::size_t eq = inner.find('=', i);
      if (eq == std::string::npos || eq + 1 >= inner.size() || inner[eq + 1] != '"')
        throw Error("parse_svg: malformed attribute");
      const std::size_t close = inner.find('"', eq + 2);
      if (close == std::string::npos) throw Error("parse_svg: unterminated attribute");
      tag.attrs[inner.substr(i, eq - i)] = unescape(inner.substr(eq + 2, close - eq - 2));
      i = close + 1;
    }
    if (tag.name == "text" && !self_closing) {
      const std::size_t close = s_.find("</text>", pos_);
      if (close == std::string::npos) throw Error("parse_svg: unterminated text");
      tag.body = unescape(s_.substr(pos_, close - pos_));
      pos_ = close + 7;
    }
    return true;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

double num(const Tag& t, const std::string& key) {
  auto it = t.attrs.find(key);
  if (it == t.attrs.end()) throw Error("parse_svg: missing attribute " + key + " on " + t.name);
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str()) throw Error("parse_svg: bad number in " + key);
  return v;
}

std::string str(const Tag& t, const std::string& key, const std::string& fallback = "none") {
  auto it = t.attrs.find(key);
  return it == t.attrs.end() ? fallback : it->second;
}

void read_paint(const Tag& t, Primitive& p) {
  p.role = str(t, "class", "");
  p.fill = str(t, "fill");
  p.stroke = str(t, "stroke");
  p.stroke_width = p.stroke == "none" ? 0 : num(t, "stroke-width");
}

}  // namespace

Document parse_svg(const std::string& svg) {
  SvgReader reader(svg);
  Tag t;
  Document doc;
  bool seen_root = false;
  while (reader.next(t)) {
    if (t.name.empty() || t.name[0] == '/' || t.name[0] == '?' || t.name[0] == '!') continue;
    if (t.name == "svg") {
      doc.width = num(t, "width");
      doc.height = num(t, "height");
      seen_root = true;
      continue;
    }
    if (!seen_root) throw Error("parse_svg: missing svg root");
    Primitive p;
    if (t.name == "rect") {
      if (str(t, "class", "") == "background") {
        doc.background = str(t, "fill");
        continue;
      }
      p.kind = PrimKind::Rect;
      p.coords = {num(t, "x"), num(t, "y"), num(t, "width"), num(t, "height")};
    } else if (t.name == "polygon") {
      p.kind = PrimKind::Polygon;
      std::string pts = str(t, "points", "");
      for (char& c : pts)
        if (c == ',') c = ' ';
      const char* cur = pts.c_str();
      char* end = nullptr;
      for (double v = std::strtod(cur, &end); end != cur; v = std::strtod(cur, &end)) {
        p.coords.push_back(v);
        cur = end;
      }
      if (p.coords.size() < 6 || p.coords.size() % 2) throw Error("parse_svg: bad polygon");
    } else if (t.name == "line") {
      p.kind = PrimKind::Line;
      p.coords = {num(t, "x1"), num(t, "y1"), num(t, "x2"), num(t, "y2")};
    } else if (t.name == "circle") {
      p.kind = PrimKind::Circle;
      p.coords = {num(t, "cx"), num(t, "cy"), num(t, "r")};
    } else if (t.name == "text") {
      p.kind = PrimKind::Text;
      p.coords = {num(t, "x"), num(t, "y"), num(t, "font-size")};
      p.text = t.body;
    } else {
      throw Error("parse_svg: unsupported element <" + t.name + ">");
    }
    read_paint(t, p);
    doc.items.push_back(std::move(p));
  }
  if (!seen_root) throw Error("parse_svg: missing svg root");
  return doc;
}

std::string digest(const Document& doc) {
  std::vector<std::string> lines;
  lines.reserve(doc.items.size());
  for (Primitive p : doc.items) {
    p.role.clear();
    auto& c = p.coords;
    if (p.kind == PrimKind::Line && std::pair{c[2], c[3]} < std::pair{c[0], c[1]}) {
      std::swap(c[0], c[2]);
      std::swap(c[1], c[3]);
    } else if (p.kind == PrimKind::Polygon) {
      // Same outline whatever the starting vertex or winding.
      using Pt = std::pair<long long, long long>;
      std::vector<Pt> pts;
      for (std::size_t i = 0; i < c.size(); i += 2)
        pts.emplace_back(std::llround(c[i] * 1000.0), std::llround(c[i + 1] * 1000.0));
      const std::size_t n = pts.size();
      std::vector<Pt> best;
      for (int dir = 0; dir < 2; ++dir) {
        for (std::size_t s = 0; s < n; ++s) {
          std::vector<Pt> cand(n);
          for (std::size_t i = 0; i < n; ++i)
            cand[i] = dir == 0 ? pts[(s + i) % n] : pts[(s + n - i) % n];
          if (best.empty() || cand < best) best = std::move(cand);
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        c[2 * i] = static_cast<double>(best[i].first) / 1000.0;
        c[2 * i + 1] = static_cast<double>(best[i].second) / 1000.0;
      }
    }
    lines.push_back(element(p));
  }
  std::sort(lines.begin(), lines.end());
  std::string all = format_number(doc.width) + "x" + format_number(doc.height) + ";" + doc.background + "\n";
  for (const auto& l : lines) all += l + "\n";
  return sha256_hex(all);
}

Document transform(const Document& doc, const Affine2& m, double new_width, double new_height) {
  const double scale = std::sqrt(std::abs(m.a * m.d - m.b * m.c));
  auto map = [&](double x, double y) {
    return std::pair{m.a * x + m.c * y + m.e, m.b * x + m.d * y + m.f};
  };
  Document out = doc;
  out.width = new_width;
  out.height = new_height;
  for (auto& p : out.items) {
    auto& c = p.coords;
    p.stroke_width *= scale;
    switch (p.kind) {
      case PrimKind::Rect: {
        auto [x0, y0] = map(c[0], c[1]);
        auto [x1, y1] = map(c[0] + c[2], c[1] + c[3]);
        c = {std::min(x0, x1), std::min(y0, y1), std::abs(x1 - x0), std::abs(y1 - y0)};
        break;
      }
      case PrimKind::Polygon:
      case PrimKind::Line:
        for (std::size_t i = 0; i < c.size(); i += 2) std::tie(c[i], c[i + 1]) = map(c[i], c[i + 1]);
        break;
      case PrimKind::Circle:
      case PrimKind::Text:
        std::tie(c[0], c[1]) = map(c[0], c[1]);
        c[2] *= scale;
        break;
    }
  }
  return out;
}

Document rotate_document(const Document& doc, int quarter_turns) {
  Document out = doc;
  for (int k = ((quarter_turns % 4) + 4) % 4; k > 0; --k)
    out = transform(out, {0, 1, -1, 0, out.height, 0}, out.height, out.width);
  return out;
}

Document flip_document(const Document& doc) {
  return transform(doc, {-1, 0, 0, 1, doc.width, 0}, doc.width, doc.height);
}

}  // namespace spatialviz
