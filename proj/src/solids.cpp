#include "spatialviz/solids.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace spatialviz {

const char* to_string(Profile p) {
  switch (p) {
    case Profile::Triangular: return "triangular";
    case Profile::Rectangular: return "rectangular";
    case Profile::Circular: return "circular";
  }
  return "?";
}

const char* to_string(SolidForm f) {
  switch (f) {
    case SolidForm::Prism: return "prism";
    case SolidForm::Pyramid: return "pyramid";
    case SolidForm::Frustum: return "frustum";
  }
  return "?";
}

void validate(const CompositeSolid& specs) {
  if (specs.size() < 2 || specs.size() > 3) throw Error("composite needs 2 or 3 solids");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    if (s.a <= 0 || s.height <= 0 || (s.profile == Profile::Rectangular && s.b <= 0))
      throw Error("solid dimensions must be positive");
    if (s.form == SolidForm::Frustum && !(s.top_scale > 0 && s.top_scale < 1))
      throw Error("frustum top scale must lie in (0, 1)");
    if (s.form == SolidForm::Pyramid && i + 1 != specs.size())
      throw Error("only the top solid may be a pyramid");
  }
}

Vec3 normalized(Vec3 v) {
  const double n = std::sqrt(dot(v, v));
  if (n == 0) throw Error("cannot normalise a zero vector");
  return (1.0 / n) * v;
}

Vec3 Mesh::bbox_min() const {
  Vec3 lo{1e300, 1e300, 1e300};
  for (const auto& p : parts)
    for (const auto& v : p.vertices) lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
  return lo;
}

Vec3 Mesh::bbox_max() const {
  Vec3 hi{-1e300, -1e300, -1e300};
  for (const auto& p : parts)
    for (const auto& v : p.vertices) hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  return hi;
}

namespace {

std::vector<Point2> profile_points(const SolidSpec& s) {
  std::vector<Point2> pts;
  switch (s.profile) {
    case Profile::Triangular: {
      const double r = s.a / std::sqrt(3.0);
      for (int i = 0; i < 3; ++i) {
        const double t = std::numbers::pi / 2 + 2 * std::numbers::pi * i / 3;
        pts.push_back({r * std::cos(t), r * std::sin(t)});
      }
      break;
    }
    case Profile::Rectangular:
      pts = {{-s.a / 2, -s.b / 2}, {s.a / 2, -s.b / 2}, {s.a / 2, s.b / 2}, {-s.a / 2, s.b / 2}};
      break;
    case Profile::Circular:
      for (int i = 0; i < kCircleSegments; ++i) {
        const double t = 2 * std::numbers::pi * i / kCircleSegments;
        pts.push_back({s.a * std::cos(t), s.a * std::sin(t)});
      }
      break;
  }
  return pts;
}

}  // namespace

Polyhedron build_solid(const SolidSpec& s, double z0) {
  const auto prof = profile_points(s);
  const int n = static_cast<int>(prof.size());
  Polyhedron p;
  for (const auto& q : prof) p.vertices.push_back({q[0], q[1], z0});
  std::vector<int> bottom;
  for (int i = n - 1; i >= 0; --i) bottom.push_back(i);
  p.faces.push_back(bottom);
  const double z1 = z0 + s.height;
  if (s.form == SolidForm::Pyramid) {
    p.vertices.push_back({0, 0, z1});
    for (int i = 0; i < n; ++i) p.faces.push_back({i, (i + 1) % n, n});
    return p;
  }
  const double k = s.form == SolidForm::Frustum ? s.top_scale : 1.0;
  for (const auto& q : prof) p.vertices.push_back({k * q[0], k * q[1], z1});
  std::vector<int> top;
  for (int i = 0; i < n; ++i) top.push_back(n + i);
  p.faces.push_back(top);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    p.faces.push_back({i, j, n + j, n + i});
  }
  return p;
}

Mesh build_composite(const CompositeSolid& specs) {
  validate(specs);
  Mesh m;
  double z = 0;
  for (const auto& s : specs) {
    m.parts.push_back(build_solid(s, z));
    z += s.height;
  }
  return m;
}

double mesh_volume(const Mesh& mesh) {
  double v = 0;
  for (const auto& p : mesh.parts)
    for (const auto& f : p.faces)
      for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        const Vec3 a = p.vertices[static_cast<std::size_t>(f[0])];
        const Vec3 b = p.vertices[static_cast<std::size_t>(f[i])];
        const Vec3 c = p.vertices[static_cast<std::size_t>(f[i + 1])];
        v += dot(a, cross(b, c)) / 6.0;
      }
  return v;
}

Mesh scale_mesh(const Mesh& mesh, double k) {
  Mesh out = mesh;
  for (auto& p : out.parts)
    for (auto& v : p.vertices) v = k * v;
  return out;
}

PlaneFrame plane_frame(const Plane& plane) {
  const Vec3 n = plane.normal;
  const Vec3 z{0, 0, 1};
  Vec3 v = z - dot(z, n) * n;
  if (dot(v, v) < 1e-12)
    v = {0, 1, 0};
  else
    v = normalized(v);
  return {cross(v, n), v};
}

Plane nudge_plane(const Mesh& mesh, Plane plane) {
  const Vec3 lo = mesh.bbox_min(), hi = mesh.bbox_max();
  const double extent = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z, 1e-9});
  const double eps = 1e-7 * extent;
  for (int guard = 0; guard < 16; ++guard) {
    bool touching = false;
    for (const auto& p : mesh.parts)
      for (const auto& v : p.vertices)
        if (std::abs(dot(plane.normal, v) - plane.offset) < eps) touching = true;
    if (!touching) break;
    plane.offset += eps;
  }
  return plane;
}

namespace {

double cross2(Point2 o, Point2 a, Point2 b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Counter-clockwise convex hull without collinear points, closed.
Loop convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point2& a, const Point2& b) {
                          return std::abs(a[0] - b[0]) < 1e-12 && std::abs(a[1] - b[1]) < 1e-12;
                        }),
            pts.end());
  if (pts.size() < 3) return {};
  Loop h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 1e-15) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]) <= 1e-15) --k;
    h[k++] = pts[i];
  }
  h.resize(k);  // last equals first
  return h;
}

bool near(Point2 a, Point2 b, double tol) {
  return std::abs(a[0] - b[0]) <= tol && std::abs(a[1] - b[1]) <= tol;
}

/// Removes repeated and collinear vertices from an open vertex cycle.
std::vector<Point2> simplify(std::vector<Point2> v, double tol) {
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size() && v.size() >= 3; ++i) {
      const auto& a = v[(i + v.size() - 1) % v.size()];
      const auto& b = v[i];
      const auto& c = v[(i + 1) % v.size()];
      const double len = std::hypot(c[0] - a[0], c[1] - a[1]) + 1e-30;
      if (near(a, b, tol) || std::abs(cross2(a, b, c)) / len <= tol) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return v;
}

/// Merges two counter-clockwise loops that share a stretch of boundary along
/// opposite, collinear edges. Returns false when they do not touch that way.
bool merge_touching(const std::vector<Point2>& a, const std::vector<Point2>& b, double tol,
                    std::vector<Point2>& out) {
  const std::size_t na = a.size(), nb = b.size();
  for (std::size_t i = 0; i < na; ++i) {
    const Point2 p = a[i], q = a[(i + 1) % na];
    const double ex = q[0] - p[0], ey = q[1] - p[1];
    const double elen = std::hypot(ex, ey);
    if (elen <= tol) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      const Point2 r = b[j], s = b[(j + 1) % nb];
      // r and s must lie on line pq, with rs pointing against pq.
      if (std::abs(cross2(p, q, r)) / elen > tol || std::abs(cross2(p, q, s)) / elen > tol) continue;
      const double tr = ((r[0] - p[0]) * ex + (r[1] - p[1]) * ey) / elen;
      const double ts = ((s[0] - p[0]) * ex + (s[1] - p[1]) * ey) / elen;
      if (ts >= tr) continue;
      const double lo = std::max(0.0, ts), hi = std::min(elen, tr);
      if (hi - lo <= tol) continue;
      // Walk a up to p, jump to s, walk b from s round to r, jump to q.
      out.clear();
      for (std::size_t k = 0; k <= i; ++k) out.push_back(a[k]);
      for (std::size_t k = 1; k <= nb; ++k) out.push_back(b[(j + k) % nb]);
      for (std::size_t k = i + 1; k < na; ++k) out.push_back(a[k]);
      out = simplify(out, tol);
      return true;
    }
  }
  return false;
}

}  // namespace

SectionPolygons slice(const Mesh& mesh, const Plane& raw) {
  const Plane plane = nudge_plane(mesh, raw);
  const PlaneFrame fr = plane_frame(plane);
  std::vector<std::vector<Point2>> pieces;
  for (const auto& part : mesh.parts) {
    std::vector<Point2> pts;
    for (const auto& f : part.faces) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3 a = part.vertices[static_cast<std::size_t>(f[i])];
        const Vec3 b = part.vertices[static_cast<std::size_t>(f[(i + 1) % f.size()])];
        const double da = dot(plane.normal, a) - plane.offset;
        const double db = dot(plane.normal, b) - plane.offset;
        if ((da < 0) == (db < 0)) continue;
        const Vec3 x = a + (da / (da - db)) * (b - a);
        pts.push_back({dot(x, fr.u), dot(x, fr.v)});
      }
    }
    Loop hull = convex_hull(pts);
    if (hull.size() >= 4) {
      hull.pop_back();
      pieces.push_back(hull);
    }
  }
  const Vec3 lo = mesh.bbox_min(), hi = mesh.bbox_max();
  const double tol = 1e-6 * std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z, 1e-9});
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < pieces.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < pieces.size() && !merged; ++j) {
        std::vector<Point2> out;
        if (merge_touching(pieces[i], pieces[j], tol, out) ||
            merge_touching(pieces[j], pieces[i], tol, out)) {
          pieces[i] = out;
          pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
      }
  }
  SectionPolygons s;
  for (auto& p : pieces) {
    p.push_back(p.front());
    s.loops.push_back(std::move(p));
  }
  return s;
}

double loop_area(const Loop& loop) {
  double a = 0;
  for (std::size_t i = 0; i + 1 < loop.size(); ++i)
    a += loop[i][0] * loop[i + 1][1] - loop[i + 1][0] * loop[i][1];
  return a / 2;
}

std::string section_digest(const SectionPolygons& s) {
  std::vector<std::string> loops;
  for (const auto& loop : s.loops) {
    std::vector<std::string> pts;
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.4f,%.4f", std::round(loop[i][0] * 1e4) / 1e4 + 0.0,
                    std::round(loop[i][1] * 1e4) / 1e4 + 0.0);
      pts.emplace_back(buf);
    }
    auto start = std::min_element(pts.begin(), pts.end());
    std::rotate(pts.begin(), start, pts.end());
    std::string joined;
    for (const auto& p : pts) joined += p + ";";
    loops.push_back(joined);
  }
  std::sort(loops.begin(), loops.end());
  std::string all;
  for (const auto& l : loops) all += l + "|";
  return sha256_hex(all);
}

bool point_in_section(const SectionPolygons& s, Point2 p) {
  bool inside = false;
  for (const auto& loop : s.loops)
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
      const Point2 a = loop[i], b = loop[i + 1];
      if ((a[1] > p[1]) != (b[1] > p[1])) {
        const double x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
        if (p[0] < x) inside = !inside;
      }
    }
  return inside;
}

bool point_in_mesh(const Mesh& mesh, Vec3 p) {
  for (const auto& part : mesh.parts) {
    bool inside = true;
    for (const auto& f : part.faces) {
      const Vec3 a = part.vertices[static_cast<std::size_t>(f[0])];
      const Vec3 b = part.vertices[static_cast<std::size_t>(f[1])];
      const Vec3 c = part.vertices[static_cast<std::size_t>(f[2])];
      if (dot(cross(b - a, c - a), p - a) > 0) {
        inside = false;
        break;
      }
    }
    if (inside) return true;
  }
  return false;
}

namespace {

double draw_factor(Rng& rng) {
  // Equal chance of shrinking or growing.
  return rng.chance(0.5) ? rng.uniform_real(0.6, 0.85) : rng.uniform_real(1.2, 1.6);
}

}  // namespace

CompositeSolid perturb_proportions(const CompositeSolid& specs, const Plane& plane, Rng& rng) {
  const std::string base = section_digest(slice(build_composite(specs), plane));
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    CompositeSolid out = specs;
    auto& s = out[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(out.size()) - 1))];
    std::vector<double*> dims{&s.a, &s.height};
    if (s.profile == Profile::Rectangular) dims.push_back(&s.b);
    if (s.form == SolidForm::Frustum) dims.push_back(&s.top_scale);
    double* d = dims[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(dims.size()) - 1))];
    *d *= draw_factor(rng);
    if (s.form == SolidForm::Frustum && s.top_scale >= 0.95) continue;
    const auto sec = slice(build_composite(out), plane);
    if (sec.loops.empty() || section_digest(sec) == base) continue;
    return out;
  }
  throw Error("perturb_proportions: resample budget exhausted");
}

CompositeSolid random_composite(int count, Rng& rng) {
  if (count < 2 || count > 3) throw Error("random_composite: count must be 2 or 3");
  CompositeSolid out;
  for (int i = 0; i < count; ++i) {
    SolidSpec s;
    s.profile = static_cast<Profile>(rng.uniform_int(0, 2));
    const bool top = i + 1 == count;
    s.form = static_cast<SolidForm>(top ? rng.uniform_int(0, 2) : rng.uniform_int(0, 1) * 2);
    s.a = rng.uniform_real(1.2, 3.0);
    if (s.profile == Profile::Circular) s.a *= 0.5;
    s.b = rng.uniform_real(1.2, 3.0);
    s.height = rng.uniform_real(0.8, 2.0);
    s.top_scale = rng.uniform_real(0.35, 0.75);
    out.push_back(s);
  }
  return out;
}

}  // namespace spatialviz
