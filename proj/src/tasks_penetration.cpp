#include <algorithm>
#include <cmath>
#include <set>

#include "spatialviz/dataset.hpp"
#include "tasks_internal.hpp"

namespace spatialviz {

using nlohmann::json;
using namespace detail;

namespace {

const RenderStyle& style() {
  static const RenderStyle s = default_style();
  return s;
}

// ---------------------------------------------------------------------------
// Cross-section

SectionPolygons cut(const CompositeSolid& comp, const Plane& plane) {
  const Mesh mesh = build_composite(comp);
  return slice(mesh, nudge_plane(mesh, plane));
}

double section_reach(const SectionPolygons& s) {
  double r = 0;
  for (const auto& loop : s.loops)
    for (const auto& p : loop) r = std::max({r, std::abs(p[0]), std::abs(p[1])});
  return r;
}

double section_area(const SectionPolygons& s) {
  double a = 0;
  for (const auto& loop : s.loops) a += std::abs(loop_area(loop));
  return a;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct PlaneChoice {
  Plane plane;
  std::string description;
};

PlaneChoice random_plane(const std::string& kind, const Mesh& mesh, Rng& rng) {
  const Vec3 lo = mesh.bbox_min(), hi = mesh.bbox_max();
  const double zmid = 0.5 * (lo.z + hi.z);
  if (kind == "horizontal") {
    const double z = rng.uniform_real(lo.z + 0.15 * (hi.z - lo.z), hi.z - 0.15 * (hi.z - lo.z));
    return {{{0, 0, 1}, z}, "horizontal, " + fmt2(z) + " units above the base"};
  }
  if (kind == "vertical") {
    const bool along_x = rng.chance(0.5);
    const double lo_c = along_x ? lo.x : lo.y, hi_c = along_x ? hi.x : hi.y;
    const double c = rng.uniform_real(0.6 * lo_c, 0.6 * hi_c);
    if (along_x) return {{{1, 0, 0}, c}, "vertical, facing the viewer's right, " + fmt2(c) + " units from the central axis"};
    return {{{0, 1, 0}, c}, "vertical, facing the viewer, " + fmt2(c) + " units from the central axis"};
  }
  const double s = std::sqrt(0.5);
  const double z = rng.uniform_real(zmid - 0.2 * (hi.z - lo.z), zmid + 0.2 * (hi.z - lo.z));
  if (kind == "oblique45") return {{{-s, 0, s}, s * z}, "tilted 45 degrees, rising to the right and crossing the axis " + fmt2(z) + " units above the base"};
  return {{{s, 0, s}, s * z}, "tilted 135 degrees, falling to the right and crossing the axis " + fmt2(z) + " units above the base"};
}

}  // namespace

PuzzleInstance generate_cross_section(int level, Rng& rng) {
  const auto& p = level_params(TaskId::CrossSection, level);
  const std::vector<int> counts = p["solids"];
  const std::vector<std::string> kinds = p["planes"];
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    const CompositeSolid comp = random_composite(rng.pick(counts), rng);
    const Mesh mesh = build_composite(comp);
    const PlaneChoice choice = random_plane(rng.pick(kinds), mesh, rng);
    const SectionPolygons truth = cut(comp, choice.plane);
    if (truth.loops.empty() || section_area(truth) < 0.2) continue;

    std::set<std::string> seen = {section_digest(truth)};
    std::vector<CompositeSolid> wrong;
    bool ok = true;
    for (int tries = 0; wrong.size() < 3 && tries < 12; ++tries) {
      CompositeSolid c;
      try {
        c = perturb_proportions(comp, choice.plane, rng);
      } catch (const Error&) {
        ok = false;
        break;
      }
      const SectionPolygons s = cut(c, choice.plane);
      if (s.loops.empty() || !seen.insert(section_digest(s)).second) continue;
      wrong.push_back(c);
    }
    if (!ok || wrong.size() < 3) continue;

    double reach = section_reach(truth);
    for (const auto& c : wrong) reach = std::max(reach, section_reach(cut(c, choice.plane)));
    const double half_extent = std::ceil(reach * 1.15 * 2.0) / 2.0;

    std::vector<Option> distractors;
    std::set<std::string> used = {digest(render_section(truth, half_extent, style()))};
    for (const auto& c : wrong) {
      Document d = render_section(cut(c, choice.plane), half_extent, style());
      if (!used.insert(digest(d)).second) break;
      distractors.push_back(image_option(std::move(d), "proportion-altered",
                                         "This section comes from a solid with one piece resized.",
                                         {{"solids", to_json(c)}}));
    }
    if (distractors.size() < 3) continue;
    Option positive = image_option(render_section(truth, half_extent, style()), "correct",
                                   "This is where the plane meets the solid.", {{"solids", to_json(comp)}});
    const std::string question =
        "The first image shows a solid made of " + std::to_string(comp.size()) +
        " stacked pieces and a cutting plane outlined in red. The plane is " + choice.description +
        ". Which option shows the cross-section of the solid by this plane? All options use the same scale.";
    PuzzleInstance inst = assemble_instance(question, {render_composite(mesh, choice.plane, style())},
                                            std::move(positive), std::move(distractors), NoneMode::Off, rng);
    inst.model = {{"solids", to_json(comp)}, {"plane", to_json(choice.plane)}, {"half_extent", half_extent}};
    return inst;
  }
  throw Error("generate_cross_section: resample budget exhausted");
}

std::vector<std::string> check_cross_section(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  const CompositeSolid comp = composite_from_json(inst.model.at("solids"));
  const Plane plane = plane_from_json(inst.model.at("plane"));
  const double half_extent = inst.model.at("half_extent");
  expect_reference(inst, 0, render_composite(build_composite(comp), plane, style()), errs);
  const std::string truth = section_digest(cut(comp, plane));
  std::vector<std::optional<bool>> verdicts(4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& o = inst.options[i];
    if (is_none(o)) continue;
    const SectionPolygons s = cut(composite_from_json(o.model.at("solids")), plane);
    expect_image(o, render_section(s, half_extent, style()), option_name(i), errs);
    verdicts[i] = section_digest(s) == truth;
  }
  judge(inst, verdicts, errs);
  return errs;
}

// ---------------------------------------------------------------------------
// Cube counting

namespace {

/// Largest supported stack with the given views: every top-view cell rises to
/// the lowest height its front (and left) columns allow.
OccupancyGrid max_fill(const OccupancyGrid& g, bool use_left) {
  const Dims d = g.dims();
  const Silhouette front = project_silhouette(g, View::Front);
  const Silhouette top = project_silhouette(g, View::Top);
  const Silhouette left = project_silhouette(g, View::Left);
  OccupancyGrid out(d);
  for (int y = 0; y < d.y; ++y)
    for (int x = 0; x < d.x; ++x) {
      if (!top.at(d.y - 1 - y, x)) continue;
      int h = front.column_sum(x);
      if (use_left) h = std::min(h, left.column_sum(d.y - 1 - y));
      for (int z = 0; z < h; ++z) out.set(x, y, z, true);
    }
  return out;
}

std::vector<View> counting_views(int n) {
  return n == 2 ? std::vector<View>{View::Front, View::Top} : std::vector<View>{View::Front, View::Top, View::Left};
}

CountBounds bounds_for(const OccupancyGrid& g, int views) {
  const Silhouette front = project_silhouette(g, View::Front);
  const Silhouette top = project_silhouette(g, View::Top);
  if (views == 2) return count_bounds(front, top);
  const Silhouette left = project_silhouette(g, View::Left);
  return count_bounds(front, top, &left);
}

}  // namespace

PuzzleInstance generate_cube_counting(int level, Rng& rng) {
  const auto& p = level_params(TaskId::CubeCounting, level);
  const Dims dims{p["dims"][0], p["dims"][1], p["dims"][2]};
  const int views = p["views"];
  const double fill = p["fill"];
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    const OccupancyGrid seed_stack = connect_isolated_regions(create_supported_stack(dims, fill, rng));
    const OccupancyGrid stack = max_fill(seed_stack, views == 3);
    const CountBounds b = bounds_for(stack, views);
    if (b.max_count != stack.count() || b.max_count - b.min_count < 3) continue;
    std::vector<int> pool;
    for (int n = b.min_count; n < b.max_count; ++n) pool.push_back(n);
    rng.shuffle(pool);
    std::vector<Option> distractors;
    for (std::size_t i = 0; i < 3; ++i)
      distractors.push_back(number_option(pool[i], "wrong-count",
                                          "More cubes fit behind the visible ones than " + std::to_string(pool[i]) + ".",
                                          {{"count", pool[i]}}));
    Option positive = number_option(b.max_count, "correct",
                                    "Filling every column to the height its views allow gives " +
                                        std::to_string(b.max_count) + " cubes.",
                                    {{"count", b.max_count}});
    std::vector<Document> refs;
    for (View v : counting_views(views)) refs.push_back(render_view(stack, v, style()));
    const std::string which = views == 2 ? "front view and top view" : "front view, top view and left view";
    const std::string question =
        "The images show the " + which +
        " of a stack of unit cubes. Every cube rests on the ground or on another cube. What is the largest "
        "number of cubes the stack could contain?";
    PuzzleInstance inst =
        assemble_instance(question, std::move(refs), std::move(positive), std::move(distractors), NoneMode::Off, rng);
    inst.model = {{"stack", to_json(stack)}, {"views", views}, {"bounds", {b.min_count, b.max_count}}};
    return inst;
  }
  throw Error("generate_cube_counting: resample budget exhausted");
}

std::vector<std::string> check_cube_counting(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  const OccupancyGrid stack = grid_from_json(inst.model.at("stack"));
  const int views = inst.model.at("views");
  const auto which = counting_views(views);
  if (inst.references.size() != which.size()) errs.push_back("wrong number of views");
  for (std::size_t i = 0; i < which.size(); ++i) expect_reference(inst, i, render_view(stack, which[i], style()), errs);
  if (!is_supported(stack)) errs.push_back("hidden stack is not supported");
  // Independent maximum: each column can rise to the lowest silhouette height over it.
  const Dims d = stack.dims();
  std::vector<int> front(static_cast<std::size_t>(d.x), 0), side(static_cast<std::size_t>(d.y), 0);
  for (const auto& c : stack.cells()) {
    front[static_cast<std::size_t>(c.x)] = std::max(front[static_cast<std::size_t>(c.x)], c.z + 1);
    side[static_cast<std::size_t>(c.y)] = std::max(side[static_cast<std::size_t>(c.y)], c.z + 1);
  }
  int most = 0;
  for (int y = 0; y < d.y; ++y)
    for (int x = 0; x < d.x; ++x)
      if (stack.column_count(x, y) > 0)
        most += views == 3 ? std::min(front[static_cast<std::size_t>(x)], side[static_cast<std::size_t>(y)])
                           : front[static_cast<std::size_t>(x)];
  if (most != stack.count()) errs.push_back("hidden stack is not the largest one with these views");
  const int lo = inst.model.at("bounds")[0];
  std::vector<std::optional<bool>> verdicts(4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& o = inst.options[i];
    if (is_none(o)) continue;
    if (o.number < lo || o.number > most) errs.push_back(option_name(i) + " lies outside the count bounds");
    verdicts[i] = o.number == most;
  }
  judge(inst, verdicts, errs);
  return errs;
}

// ---------------------------------------------------------------------------
// Cube assembly

namespace {

json cell_list(const std::vector<Cell>& cells) {
  json out = json::array();
  for (const auto& c : cells) out.push_back({c.x, c.y, c.z});
  return out;
}

std::vector<Cell> cells_from(const json& j) {
  std::vector<Cell> out;
  for (const auto& c : j) out.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<int>()});
  std::sort(out.begin(), out.end());
  return out;
}

Document render_part(const std::vector<Cell>& cells) { return render_isometric(OccupancyGrid::fit(cells), style()); }

std::vector<Cell> normalized(std::vector<Cell> cells) {
  if (cells.empty()) return cells;
  int x0 = cells[0].x, y0 = cells[0].y, z0 = cells[0].z;
  for (const auto& c : cells) {
    x0 = std::min(x0, c.x);
    y0 = std::min(y0, c.y);
    z0 = std::min(z0, c.z);
  }
  for (auto& c : cells) c = {c.x - x0, c.y - y0, c.z - z0};
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::vector<Cell> mutate_part(const std::vector<Cell>& part, int delta, Dims dims, Rng& rng) {
  constexpr std::array<Cell, 6> kDir = {{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  std::set<Cell> cur(part.begin(), part.end());
  const bool add = rng.chance(0.5);
  for (int step = 0; step < delta; ++step) {
    std::vector<Cell> choices;
    if (add) {
      for (const auto& c : cur)
        for (const auto& d : kDir) {
          const Cell n{c.x + d.x, c.y + d.y, c.z + d.z};
          if (n.x >= 0 && n.y >= 0 && n.z >= 0 && n.x < dims.x && n.y < dims.y && n.z < dims.z && !cur.count(n))
            choices.push_back(n);
        }
    } else {
      for (const auto& c : cur) {
        std::vector<Cell> rest;
        for (const auto& o : cur)
          if (!(o == c)) rest.push_back(o);
        if (!rest.empty() && is_connected6(rest)) choices.push_back(c);
      }
    }
    if (choices.empty()) return {};
    const Cell c = rng.pick(choices);
    if (add) cur.insert(c);
    else cur.erase(c);
  }
  return {cur.begin(), cur.end()};
}

}  // namespace

PuzzleInstance generate_cube_assembly(int level, Rng& rng) {
  const auto& p = level_params(TaskId::CubeAssembly, level);
  const Dims dims{p["dims"][0], p["dims"][1], p["dims"][2]};
  const int nparts = p["parts"], max_delta = p["max_delta"];
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    const OccupancyGrid whole = create_pyramid_stack(dims, rng);
    if (whole.count() < 2 * nparts || !is_connected6(whole.cells())) continue;
    std::vector<std::vector<Cell>> parts;
    try {
      parts = split_connected(whole, (whole.count() + nparts - 1) / nparts, nparts, rng);
    } catch (const Error&) {
      continue;
    }
    const std::size_t last = static_cast<std::size_t>(rng.uniform_int(0, nparts - 1));
    std::swap(parts[last], parts.back());
    const std::vector<Cell> answer = parts.back();

    std::set<std::string> used = {digest(render_part(answer))};
    std::vector<Option> distractors;
    for (int tries = 0; tries < 32 && distractors.size() < 3; ++tries) {
      const int delta = rng.uniform_int(1, max_delta);
      const auto cells = mutate_part(answer, delta, dims, rng);
      if (cells.empty()) continue;
      Document d = render_part(cells);
      if (!used.insert(digest(d)).second) continue;
      const bool more = cells.size() > answer.size();
      distractors.push_back(image_option(
          std::move(d), more ? "cube-added" : "cube-removed",
          std::string("This piece has ") + std::to_string(delta) + (delta == 1 ? " cube " : " cubes ") +
              (more ? "too many." : "too few."),
          {{"cells", cell_list(normalized(cells))}}));
    }
    if (distractors.size() < 3) continue;
    Option positive = image_option(render_part(answer), "correct", "This piece fills exactly the remaining space.",
                                   {{"cells", cell_list(normalized(answer))}});
    std::vector<Document> refs = {render_isometric(whole, style())};
    json shown = json::array();
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      refs.push_back(render_part(parts[i]));
      shown.push_back(cell_list(parts[i]));
    }
    const std::string question =
        "The first image shows a stack of cubes that is built from " + std::to_string(nparts) +
        " pieces. The following images show every piece except one, each drawn in the same orientation as in the "
        "stack. Which option is the missing piece?";
    PuzzleInstance inst =
        assemble_instance(question, std::move(refs), std::move(positive), std::move(distractors), NoneMode::Off, rng);
    inst.model = {{"whole", to_json(whole)}, {"shown", shown}};
    return inst;
  }
  throw Error("generate_cube_assembly: resample budget exhausted");
}

std::vector<std::string> check_cube_assembly(const PuzzleInstance& inst) {
  std::vector<std::string> errs;
  const OccupancyGrid whole = grid_from_json(inst.model.at("whole"));
  expect_reference(inst, 0, render_isometric(whole, style()), errs);
  std::set<Cell> remaining;
  for (const auto& c : whole.cells()) remaining.insert(c);
  std::size_t ref = 1;
  for (const auto& part_json : inst.model.at("shown")) {
    const auto part = cells_from(part_json);
    if (!is_connected6(part)) errs.push_back("a shown piece is not connected");
    expect_reference(inst, ref++, render_part(part), errs);
    for (const auto& c : part)
      if (!remaining.erase(c)) errs.push_back("shown pieces overlap or leave the stack");
  }
  const std::vector<Cell> missing = normalized({remaining.begin(), remaining.end()});
  std::vector<std::optional<bool>> verdicts(4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& o = inst.options[i];
    if (is_none(o)) continue;
    const auto cells = cells_from(o.model.at("cells"));
    if (!is_connected6(cells)) errs.push_back(option_name(i) + " is not connected");
    expect_image(o, render_part(cells), option_name(i), errs);
    verdicts[i] = normalized(cells) == missing;
  }
  judge(inst, verdicts, errs);
  return errs;
}

}  // namespace spatialviz
