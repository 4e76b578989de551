#pragma once

#include <array>
#include <string>
#include <vector>

#include "spatialviz/common.hpp"

namespace spatialviz {

enum class Profile { Triangular, Rectangular, Circular };
enum class SolidForm { Prism, Pyramid, Frustum };

const char* to_string(Profile p);
const char* to_string(SolidForm f);

/// One of the nine basic solids, centred on the vertical axis.
///
/// `a` is the triangle side, the rectangle width (x) or the circle radius;
/// `b` is the rectangle depth (y) and ignored otherwise.
struct SolidSpec {
  Profile profile = Profile::Rectangular;
  SolidForm form = SolidForm::Prism;
  double a = 1.0;
  double b = 1.0;
  double height = 1.0;
  double top_scale = 0.5;  // frustum only, in (0, 1)
  bool operator==(const SolidSpec&) const = default;
};

/// Bottom-to-top stack of 2 or 3 solids.
using CompositeSolid = std::vector<SolidSpec>;

void validate(const CompositeSolid& specs);

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
Vec3 normalized(Vec3 v);

/// Closed convex polyhedron; faces list vertex indices counter-clockwise seen
/// from outside.
struct Polyhedron {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;
};

struct Mesh {
  std::vector<Polyhedron> parts;
  Vec3 bbox_min() const;
  Vec3 bbox_max() const;
};

inline constexpr int kCircleSegments = 64;

Polyhedron build_solid(const SolidSpec& spec, double z0);
Mesh build_composite(const CompositeSolid& specs);
double mesh_volume(const Mesh& mesh);
Mesh scale_mesh(const Mesh& mesh, double k);

/// Points p with dot(normal, p) == offset. normal must be unit length.
struct Plane {
  Vec3 normal{0, 0, 1};
  double offset = 0;
};

/// In-plane axes: v is +z projected into the plane (or +y for horizontal
/// planes) and u = v x normal.
struct PlaneFrame {
  Vec3 u, v;
};
PlaneFrame plane_frame(const Plane& plane);

using Point2 = std::array<double, 2>;
using Loop = std::vector<Point2>;  // closed: last vertex repeats the first

struct SectionPolygons {
  std::vector<Loop> loops;
};

/// Moves the plane offset off any mesh vertex by 1e-7 x bbox extent.
Plane nudge_plane(const Mesh& mesh, Plane plane);
SectionPolygons slice(const Mesh& mesh, const Plane& plane);
/// Hash of the loops quantised to 1e-4, independent of loop order and start.
std::string section_digest(const SectionPolygons& s);
double loop_area(const Loop& loop);
/// Even-odd point test against all loops.
bool point_in_section(const SectionPolygons& s, Point2 p);
/// Exact point-in-solid test (union of the parts).
bool point_in_mesh(const Mesh& mesh, Vec3 p);

/// Scales one dimension of one solid by a factor from [0.6,0.85] u [1.2,1.6]
/// so that the section at `plane` changes and stays non-empty.
CompositeSolid perturb_proportions(const CompositeSolid& specs, const Plane& plane, Rng& rng);

CompositeSolid random_composite(int count, Rng& rng);

}  // namespace spatialviz
