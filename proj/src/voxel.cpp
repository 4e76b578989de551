#include "spatialviz/voxel.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace spatialviz {

OccupancyGrid::OccupancyGrid(Dims dims) : dims_(dims) {
  if (dims.x <= 0 || dims.y <= 0 || dims.z <= 0) throw Error("OccupancyGrid: dims must be positive");
  occ_.assign(static_cast<std::size_t>(dims.x) * dims.y * dims.z, 0);
}

bool OccupancyGrid::at(int x, int y, int z) const {
  return in_bounds(x, y, z) && occ_[index(x, y, z)] != 0;
}

void OccupancyGrid::set(int x, int y, int z, bool v) {
  if (!in_bounds(x, y, z)) throw Error("OccupancyGrid::set out of bounds");
  occ_[index(x, y, z)] = v ? 1 : 0;
}

int OccupancyGrid::count() const {
  return static_cast<int>(std::count(occ_.begin(), occ_.end(), std::uint8_t{1}));
}

std::vector<Cell> OccupancyGrid::cells() const {
  std::vector<Cell> out;
  for (int z = 0; z < dims_.z; ++z)
    for (int y = 0; y < dims_.y; ++y)
      for (int x = 0; x < dims_.x; ++x)
        if (occ_[index(x, y, z)]) out.push_back({x, y, z});
  return out;
}

int OccupancyGrid::column_count(int x, int y) const {
  int n = 0;
  for (int z = 0; z < dims_.z; ++z) n += at(x, y, z) ? 1 : 0;
  return n;
}

std::string OccupancyGrid::key() const {
  std::string s = std::to_string(dims_.x) + "x" + std::to_string(dims_.y) + "x" +
                  std::to_string(dims_.z) + ":";
  for (auto v : occ_) s.push_back(v ? '1' : '0');
  return s;
}

OccupancyGrid OccupancyGrid::from_cells(Dims dims, const std::vector<Cell>& cells) {
  OccupancyGrid g(dims);
  for (const auto& c : cells) g.set(c, true);
  return g;
}

OccupancyGrid OccupancyGrid::fit(const std::vector<Cell>& cells) {
  if (cells.empty()) throw Error("OccupancyGrid::fit: no cells");
  Cell lo = cells.front(), hi = cells.front();
  for (const auto& c : cells) {
    lo = {std::min(lo.x, c.x), std::min(lo.y, c.y), std::min(lo.z, c.z)};
    hi = {std::max(hi.x, c.x), std::max(hi.y, c.y), std::max(hi.z, c.z)};
  }
  OccupancyGrid g({hi.x - lo.x + 1, hi.y - lo.y + 1, hi.z - lo.z + 1});
  for (const auto& c : cells) g.set(c.x - lo.x, c.y - lo.y, c.z - lo.z, true);
  return g;
}

const char* to_string(View v) {
  switch (v) {
    case View::Front: return "front";
    case View::Top: return "top";
    case View::Left: return "left";
    case View::Right: return "right";
  }
  return "?";
}

int Silhouette::column_sum(int c) const {
  int n = 0;
  for (int r = 0; r < rows; ++r) n += at(r, c) ? 1 : 0;
  return n;
}

int Silhouette::row_sum(int r) const {
  int n = 0;
  for (int c = 0; c < cols; ++c) n += at(r, c) ? 1 : 0;
  return n;
}

OccupancyGrid create_supported_stack(Dims dims, double fill_probability, Rng& rng) {
  OccupancyGrid g(dims);
  for (int z = 0; z < dims.z; ++z)
    for (int y = 0; y < dims.y; ++y)
      for (int x = 0; x < dims.x; ++x)
        if ((z == 0 || g.at(x, y, z - 1)) && rng.chance(fill_probability)) g.set(x, y, z, true);
  return g;
}

namespace {

constexpr std::array<std::array<int, 2>, 8> kDir8 = {
    {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};

std::vector<std::vector<std::array<int, 2>>> ground_regions(const OccupancyGrid& g) {
  const auto& d = g.dims();
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(d.x) * d.y, 0);
  std::vector<std::vector<std::array<int, 2>>> regions;
  for (int y = 0; y < d.y; ++y) {
    for (int x = 0; x < d.x; ++x) {
      if (!g.at(x, y, 0) || visited[static_cast<std::size_t>(y) * d.x + x]) continue;
      std::vector<std::array<int, 2>> region;
      std::deque<std::array<int, 2>> queue{{x, y}};
      visited[static_cast<std::size_t>(y) * d.x + x] = 1;
      while (!queue.empty()) {
        auto [cx, cy] = queue.front();
        queue.pop_front();
        region.push_back({cx, cy});
        for (auto [dx, dy] : kDir8) {
          int nx = cx + dx, ny = cy + dy;
          if (nx < 0 || ny < 0 || nx >= d.x || ny >= d.y) continue;
          auto& v = visited[static_cast<std::size_t>(ny) * d.x + nx];
          if (v || !g.at(nx, ny, 0)) continue;
          v = 1;
          queue.push_back({nx, ny});
        }
      }
      regions.push_back(std::move(region));
    }
  }
  return regions;
}

int sign(int v) { return (v > 0) - (v < 0); }

}  // namespace

OccupancyGrid connect_isolated_regions(const OccupancyGrid& grid) {
  OccupancyGrid g = grid;
  auto regions = ground_regions(g);
  for (std::size_t i = 0; i + 1 < regions.size(); ++i) {
    std::array<int, 2> a{}, b{};
    int best = -1;
    for (const auto& p : regions[i]) {
      for (const auto& q : regions[i + 1]) {
        int dist = std::abs(p[0] - q[0]) + std::abs(p[1] - q[1]);
        if (best < 0 || dist < best) {
          best = dist;
          a = p;
          b = q;
        }
      }
    }
    int x = a[0], y = a[1];
    while (x != b[0] || y != b[1]) {
      if (x != b[0] && y != b[1]) {
        x += sign(b[0] - x);
        y += sign(b[1] - y);
      } else if (x != b[0]) {
        x += sign(b[0] - x);
      } else {
        y += sign(b[1] - y);
      }
      if (!g.at(x, y, 0)) g.set(x, y, 0, true);
    }
  }
  return g;
}

int ground_region_count(const OccupancyGrid& grid) {
  return static_cast<int>(ground_regions(grid).size());
}

OccupancyGrid rotate_stack(const OccupancyGrid& grid, Axis axis, int quarter_turns) {
  int k = ((quarter_turns % 4) + 4) % 4;
  OccupancyGrid g = grid;
  for (int t = 0; t < k; ++t) {
    const Dims d = g.dims();
    Dims nd = d;
    switch (axis) {
      case Axis::X: nd = {d.x, d.z, d.y}; break;
      case Axis::Y: nd = {d.z, d.y, d.x}; break;
      case Axis::Z: nd = {d.y, d.x, d.z}; break;
    }
    OccupancyGrid out(nd);
    for (const auto& c : g.cells()) {
      Cell n = c;
      switch (axis) {
        // (y, z) -> (-z, y)
        case Axis::X: n = {c.x, d.z - 1 - c.z, c.y}; break;
        // (z, x) -> (-x, z): x' = z, z' = -x
        case Axis::Y: n = {c.z, c.y, d.x - 1 - c.x}; break;
        // (x, y) -> (-y, x)
        case Axis::Z: n = {d.y - 1 - c.y, c.x, c.z}; break;
      }
      out.set(n, true);
    }
    g = std::move(out);
  }
  return g;
}

OccupancyGrid mirror_stack(const OccupancyGrid& grid) {
  OccupancyGrid out(grid.dims());
  for (const auto& c : grid.cells()) out.set(grid.dims().x - 1 - c.x, c.y, c.z, true);
  return out;
}

Silhouette project_silhouette(const OccupancyGrid& grid, View view) {
  const Dims d = grid.dims();
  Silhouette s;
  s.view = view;
  switch (view) {
    case View::Front: s.rows = d.z; s.cols = d.x; break;
    case View::Top: s.rows = d.y; s.cols = d.x; break;
    case View::Left:
    case View::Right: s.rows = d.z; s.cols = d.y; break;
  }
  s.cells.assign(static_cast<std::size_t>(s.rows) * s.cols, 0);
  for (const auto& c : grid.cells()) {
    int r = 0, col = 0;
    switch (view) {
      case View::Front: r = d.z - 1 - c.z; col = c.x; break;
      case View::Top: r = d.y - 1 - c.y; col = c.x; break;
      case View::Left: r = d.z - 1 - c.z; col = d.y - 1 - c.y; break;
      case View::Right: r = d.z - 1 - c.z; col = c.y; break;
    }
    s.cells[static_cast<std::size_t>(r) * s.cols + col] = 1;
  }
  return s;
}

CountBounds count_bounds(const Silhouette& front, const Silhouette& top, const Silhouette* left) {
  if (front.view != View::Front || top.view != View::Top || (left && left->view != View::Left))
    throw Error("count_bounds: views passed in the wrong slots");
  if (front.cols != top.cols) throw Error("count_bounds: front and top widths differ");
  const int X = top.cols;
  const int Y = top.rows;
  CountBounds b{0, 0};
  for (int x = 0; x < X; ++x) {
    const int F = front.column_sum(x);
    const int T = top.column_sum(x);
    if ((F > 0) != (T > 0)) throw Error("count_bounds: front and top views are inconsistent");
    if (F == 0) continue;
    b.max_count += F * T;
    b.min_count += T - 1 + F;
  }
  if (!left) return b;

  if (left->cols != Y) throw Error("count_bounds: left view depth differs from top view");
  // Top row r and left column r both describe y = Y-1-r.
  int max3 = 0, min3 = 0;
  for (int r = 0; r < Y; ++r) {
    const int L = left->column_sum(r);
    const int Trow = top.row_sum(r);
    if ((L > 0) != (Trow > 0)) throw Error("count_bounds: left and top views are inconsistent");
    if (L == 0) continue;
    for (int c = 0; c < X; ++c)
      if (top.at(r, c)) max3 += std::min(front.column_sum(c), L);
    min3 += Trow - 1 + L;
  }
  return {std::max(min3, b.min_count), max3};
}

namespace {

constexpr std::array<Cell, 6> kDir6 = {
    {{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}}};

std::set<Cell> region_growing(const std::vector<Cell>& cells, int max_cubes, Rng& rng) {
  const std::set<Cell> domain(cells.begin(), cells.end());
  std::set<Cell> part;
  std::deque<Cell> queue{rng.pick(cells)};
  while (!queue.empty() && static_cast<int>(part.size()) < max_cubes) {
    Cell cur = queue.front();
    queue.pop_front();
    if (part.count(cur)) continue;
    part.insert(cur);
    for (const auto& d : kDir6) {
      Cell n{cur.x + d.x, cur.y + d.y, cur.z + d.z};
      if (domain.count(n) && !part.count(n)) queue.push_back(n);
    }
  }
  return part;
}

std::vector<Cell> minus(const std::vector<Cell>& all, const std::set<Cell>& part) {
  std::vector<Cell> out;
  for (const auto& c : all)
    if (!part.count(c)) out.push_back(c);
  return out;
}

}  // namespace

bool is_connected6(const std::vector<Cell>& cells) {
  if (cells.empty()) return false;
  const std::set<Cell> domain(cells.begin(), cells.end());
  std::set<Cell> visited{cells.front()};
  std::deque<Cell> queue{cells.front()};
  while (!queue.empty()) {
    Cell cur = queue.front();
    queue.pop_front();
    for (const auto& d : kDir6) {
      Cell n{cur.x + d.x, cur.y + d.y, cur.z + d.z};
      if (domain.count(n) && visited.insert(n).second) queue.push_back(n);
    }
  }
  return visited.size() == domain.size();
}

std::vector<std::vector<Cell>> split_connected(const OccupancyGrid& grid, int max_part_cubes,
                                               int parts, Rng& rng) {
  if (parts != 2 && parts != 3) throw Error("split_connected: parts must be 2 or 3");
  if (max_part_cubes < 1) throw Error("split_connected: max_part_cubes must be positive");
  const auto all = grid.cells();
  if (all.empty() || !is_connected6(all)) throw Error("split_connected: stack is not connected");
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    auto p1 = region_growing(all, max_part_cubes, rng);
    std::vector<Cell> part1(p1.begin(), p1.end());
    auto rest = minus(all, p1);
    if (!is_connected6(part1) || !is_connected6(rest)) continue;
    std::vector<std::vector<Cell>> out;
    if (parts == 2) {
      out = {part1, rest};
    } else {
      auto p2 = region_growing(rest, max_part_cubes, rng);
      std::vector<Cell> part2(p2.begin(), p2.end());
      auto part3 = minus(rest, p2);
      if (!is_connected6(part2) || !is_connected6(part3)) continue;
      out = {part1, part2, part3};
    }
    for (auto& p : out) std::sort(p.begin(), p.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
  }
  throw Error("split_connected: resample budget exhausted");
}

OccupancyGrid create_pyramid_stack(Dims dims, Rng& rng) {
  if (dims.z < 2) throw Error("create_pyramid_stack: Z must be at least 2");
  OccupancyGrid g(dims);
  int num = 1;
  for (int y = 0; y < dims.y; ++y) {
    num = rng.uniform_int(num, std::min(y + 2, dims.x));
    for (int x = 0; x < num; ++x) g.set(x, y, 0, true);
  }
  for (int z = 1; z <= dims.z - 2; ++z) {
    num = 0;
    for (int y = 0; y < dims.y; ++y) {
      int below = 0;
      for (int x = 0; x < dims.x; ++x) below += g.at(x, y, z - 1) ? 1 : 0;
      num = rng.uniform_int(num, std::max(num, below));
      for (int x = 0; x < num; ++x) g.set(x, y, z, true);
    }
  }
  const int top = dims.z - 1;
  for (int y = 0; y < dims.y; ++y)
    for (int x = 0; x < dims.x; ++x)
      if (rng.chance(0.5) && g.at(x, y, top - 1)) g.set(x, y, top, true);
  return g;
}

BlockScene settle(const BlockScene& scene) {
  BlockScene cubes = scene;
  std::sort(cubes.begin(), cubes.end(), [](const ColoredCube& a, const ColoredCube& b) {
    return std::tie(a.pos.z, a.pos.y, a.pos.x) < std::tie(b.pos.z, b.pos.y, b.pos.x);
  });
  std::set<Cell> occupied;
  for (const auto& c : cubes) occupied.insert(c.pos);
  for (auto& c : cubes) {
    occupied.erase(c.pos);
    while (c.pos.z > 0 && !occupied.count({c.pos.x, c.pos.y, c.pos.z - 1})) --c.pos.z;
    occupied.insert(c.pos);
  }
  std::sort(cubes.begin(), cubes.end());
  return cubes;
}

bool is_supported(const OccupancyGrid& grid) {
  for (const auto& c : grid.cells())
    if (c.z > 0 && !grid.at(c.x, c.y, c.z - 1)) return false;
  return true;
}

bool is_supported(const BlockScene& scene) {
  std::set<Cell> occupied;
  for (const auto& c : scene) occupied.insert(c.pos);
  for (const auto& c : scene)
    if (c.pos.z > 0 && !occupied.count({c.pos.x, c.pos.y, c.pos.z - 1})) return false;
  return true;
}

}  // namespace spatialviz
