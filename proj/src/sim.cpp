#include "spatialviz/sim.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

namespace spatialviz {

const char* to_string(FoldDirection d) {
  switch (d) {
    case FoldDirection::Horizontal: return "horizontal";
    case FoldDirection::Vertical: return "vertical";
    case FoldDirection::Diagonal: return "diagonal";
  }
  return "?";
}

PaperState::PaperState(int rows, int cols)
    : rows_(rows), cols_(cols), rect_{0, 0, rows, cols} {
  if (rows < 1 || cols < 1) throw Error("paper dimensions must be positive");
  grid_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

bool PaperState::has_diagonal() const {
  return std::any_of(folds_.begin(), folds_.end(),
                     [](const ResolvedFold& f) { return f.op.direction == FoldDirection::Diagonal; });
}

std::vector<Cell2> PaperState::visible_cells() const {
  std::vector<Cell2> out;
  for (int r = rect_.row; r < rect_.row + rect_.rows; ++r)
    for (int c = rect_.col; c < rect_.col + rect_.cols; ++c)
      if (at(r, c) != -1) out.push_back({r, c});
  return out;
}

namespace {

// Local coordinates of a diagonal fold, mapped so the folded corner is the
// top-left one.
Cell2 to_corner_frame(const Rect& r, Corner corner, Cell2 c) {
  int lr = c.row - r.row, lc = c.col - r.col;
  if (corner == Corner::TopRight || corner == Corner::BottomRight) lc = r.cols - 1 - lc;
  if (corner == Corner::BottomLeft || corner == Corner::BottomRight) lr = r.rows - 1 - lr;
  return {lr, lc};
}

Cell2 from_corner_frame(const Rect& r, Corner corner, Cell2 c) {
  int lr = c.row, lc = c.col;
  if (corner == Corner::TopRight || corner == Corner::BottomRight) lc = r.cols - 1 - lc;
  if (corner == Corner::BottomLeft || corner == Corner::BottomRight) lr = r.rows - 1 - lr;
  return {r.row + lr, r.col + lc};
}

}  // namespace

Cell2 PaperState::reflect(const ResolvedFold& f, Cell2 c) {
  const Rect& b = f.before;
  switch (f.op.direction) {
    case FoldDirection::Horizontal: return {2 * (b.row + f.op.line) - 1 - c.row, c.col};
    case FoldDirection::Vertical: return {c.row, 2 * (b.col + f.op.line) - 1 - c.col};
    case FoldDirection::Diagonal: {
      const int k = f.op.line;
      const Cell2 l = to_corner_frame(b, f.op.corner, c);
      return from_corner_frame(b, f.op.corner, {k - 1 - l.col, k - 1 - l.row});
    }
  }
  return c;
}

PaperState paper_fold(const PaperState& state, const FoldOp& op) {
  if (state.has_diagonal()) throw Error("paper_fold: no fold may follow a diagonal fold");
  PaperState next = state;
  const Rect b = state.rect_;
  ResolvedFold rf;
  rf.op = op;
  rf.before = b;
  auto mark = [&](int r, int c) {
    if (next.at(r, c) == -1) return;
    rf.folded.push_back({r, c});
  };
  switch (op.direction) {
    case FoldDirection::Horizontal: {
      if (op.line < 1 || op.line >= b.rows) throw Error("paper_fold: fold line out of range");
      const bool top_moves = op.line <= b.rows - op.line;
      const int r_begin = top_moves ? b.row : b.row + op.line;
      const int r_end = top_moves ? b.row + op.line : b.row + b.rows;
      for (int r = r_begin; r < r_end; ++r)
        for (int c = b.col; c < b.col + b.cols; ++c) mark(r, c);
      rf.after = top_moves ? Rect{b.row + op.line, b.col, b.rows - op.line, b.cols}
                           : Rect{b.row, b.col, op.line, b.cols};
      break;
    }
    case FoldDirection::Vertical: {
      if (op.line < 1 || op.line >= b.cols) throw Error("paper_fold: fold line out of range");
      const bool left_moves = op.line <= b.cols - op.line;
      const int c_begin = left_moves ? b.col : b.col + op.line;
      const int c_end = left_moves ? b.col + op.line : b.col + b.cols;
      for (int r = b.row; r < b.row + b.rows; ++r)
        for (int c = c_begin; c < c_end; ++c) mark(r, c);
      rf.after = left_moves ? Rect{b.row, b.col + op.line, b.rows, b.cols - op.line}
                            : Rect{b.row, b.col, b.rows, op.line};
      break;
    }
    case FoldDirection::Diagonal: {
      if (op.line < 2 || op.line > std::min(b.rows, b.cols))
        throw Error("paper_fold: diagonal leg out of range");
      for (int lr = 0; lr < op.line; ++lr)
        for (int lc = 0; lc + lr < op.line - 1; ++lc) {
          const Cell2 c = from_corner_frame(b, op.corner, {lr, lc});
          mark(c.row, c.col);
        }
      rf.after = b;
      break;
    }
  }
  for (const auto& c : rf.folded) next.grid_[static_cast<std::size_t>(c.row) * next.cols_ + c.col] = -1;
  next.rect_ = rf.after;
  next.folds_.push_back(std::move(rf));
  return next;
}

PaperState paper_punch(const PaperState& state, const std::vector<Cell2>& points) {
  PaperState next = state;
  const Rect& r = state.rect_;
  for (const auto& p : points) {
    if (p.row < 0 || p.col < 0 || p.row >= r.rows || p.col >= r.cols)
      throw Error("paper_punch: point outside the folded paper");
    const int ar = r.row + p.row, ac = r.col + p.col;
    auto& v = next.grid_[static_cast<std::size_t>(ar) * next.cols_ + ac];
    if (v == -1) throw Error("paper_punch: cell is folded away");
    if (v == 1) throw Error("paper_punch: cell already punched");
    v = 1;
    next.punches_.push_back({ar, ac});
  }
  return next;
}

int HoleGrid::count() const {
  return static_cast<int>(std::count(holes.begin(), holes.end(), std::uint8_t{1}));
}

HoleGrid paper_unfold(const PaperState& state) {
  std::set<Cell2> holes(state.punches().begin(), state.punches().end());
  const auto& folds = state.folds();
  for (auto it = folds.rbegin(); it != folds.rend(); ++it)
    for (const auto& c : it->folded)
      if (holes.count(PaperState::reflect(*it, c))) holes.insert(c);
  HoleGrid g{state.original_rows(), state.original_cols(), {}};
  g.holes.assign(static_cast<std::size_t>(g.rows) * g.cols, 0);
  for (const auto& h : holes) g.set(h.row, h.col, true);
  return g;
}

bool refold_matches(const PaperState& state, const HoleGrid& candidate) {
  if (candidate.rows != state.original_rows() || candidate.cols != state.original_cols())
    return false;
  std::vector<std::set<Cell2>> folded_sets;
  for (const auto& f : state.folds()) folded_sets.emplace_back(f.folded.begin(), f.folded.end());
  std::map<Cell2, std::vector<bool>> stacks;
  for (int r = 0; r < candidate.rows; ++r)
    for (int c = 0; c < candidate.cols; ++c) {
      Cell2 p{r, c};
      for (std::size_t i = 0; i < state.folds().size(); ++i)
        if (folded_sets[i].count(p)) p = PaperState::reflect(state.folds()[i], p);
      stacks[p].push_back(candidate.at(r, c));
    }
  const std::set<Cell2> punched(state.punches().begin(), state.punches().end());
  for (const auto& [top, layers] : stacks) {
    const bool first = layers.front();
    for (bool v : layers)
      if (v != first) return false;
    if (first != (punched.count(top) > 0)) return false;
  }
  return true;
}

std::vector<FoldOp> random_folds(int rows, int cols, int steps, Rng& rng) {
  if (steps < 1) throw Error("random_folds: need at least one fold");
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    PaperState s(rows, cols);
    std::vector<FoldOp> ops;
    bool ok = true;
    for (int step = 1; step <= steps && ok; ++step) {
      const Rect& r = s.current();
      FoldOp op;
      if (step == steps) {
        if (std::min(r.rows, r.cols) < 2) {
          ok = false;
          break;
        }
        op.direction = FoldDirection::Diagonal;
        op.line = rng.uniform_int(2, std::min(r.rows, r.cols));
        op.corner = static_cast<Corner>(rng.uniform_int(0, 3));
      } else {
        op.direction = rng.chance(0.5) ? FoldDirection::Horizontal : FoldDirection::Vertical;
        int extent = op.direction == FoldDirection::Horizontal ? r.rows : r.cols;
        if (extent < 2) {
          op.direction = op.direction == FoldDirection::Horizontal ? FoldDirection::Vertical
                                                                   : FoldDirection::Horizontal;
          extent = op.direction == FoldDirection::Horizontal ? r.rows : r.cols;
        }
        if (extent < 2) {
          ok = false;
          break;
        }
        op.line = rng.uniform_int(1, extent - 1);
      }
      s = paper_fold(s, op);
      ops.push_back(op);
    }
    if (ok) return ops;
  }
  throw Error("random_folds: resample budget exhausted");
}

// ---------------------------------------------------------------------------

const char* to_string(RelDir d) {
  switch (d) {
    case RelDir::Forward: return "forward";
    case RelDir::Backward: return "backward";
    case RelDir::Left: return "left";
    case RelDir::Right: return "right";
  }
  return "?";
}

int update_orientation(RelDir rel, int orient) {
  switch (rel) {
    case RelDir::Forward: return orient;
    case RelDir::Backward: return (orient + 2) % 4;
    case RelDir::Left: return (orient + 3) % 4;
    case RelDir::Right: return (orient + 1) % 4;
  }
  return orient;
}

std::array<int, 2> relative_vector(RelDir rel, int orient) {
  const auto f = kArrowDirections[static_cast<std::size_t>(orient)];
  switch (rel) {
    case RelDir::Forward: return f;
    case RelDir::Backward: return {-f[0], -f[1]};
    case RelDir::Left: return kArrowDirections[static_cast<std::size_t>((orient + 3) % 4)];
    case RelDir::Right: return kArrowDirections[static_cast<std::size_t>((orient + 1) % 4)];
  }
  return f;
}

std::optional<ArrowState> arrow_move(const ArrowState& s, RelDir rel, int steps) {
  if (steps < 0) return std::nullopt;
  const auto d = relative_vector(rel, s.orient);
  ArrowState n = s;
  n.x = s.x + d[0] * steps;
  n.y = s.y + d[1] * steps;
  n.orient = update_orientation(rel, s.orient);
  if (n.x < 0 || n.y < 0 || n.x >= s.width || n.y >= s.height) return std::nullopt;
  if (n == s) return std::nullopt;
  return n;
}

std::optional<ArrowMapResult> arrowmap_move(const ArrowMapState& s, int x, int y, RelDir rel,
                                            int steps) {
  if (x < 0 || y < 0 || x >= s.width || y >= s.height || steps < 0) return std::nullopt;
  const auto& mover = s.at(x, y);
  if (!mover) return std::nullopt;
  const auto d = relative_vector(rel, mover->orient);
  const int nx = x + d[0] * steps, ny = y + d[1] * steps;
  if (nx < 0 || ny < 0 || nx >= s.width || ny >= s.height) return std::nullopt;
  const int new_orient = update_orientation(rel, mover->orient);
  if (nx == x && ny == y && new_orient == mover->orient) return std::nullopt;
  ArrowMapResult out{s, false};
  const Arrow moved{mover->color, new_orient};
  if (nx == x && ny == y) {
    out.state.at(x, y) = moved;
    return out;
  }
  const auto& target = s.at(nx, ny);
  if (!target) {
    out.state.at(x, y).reset();
  } else {
    const std::array<int, 2> back{-d[0], -d[1]};
    RelDir target_rel = RelDir::Forward;
    for (RelDir r : {RelDir::Forward, RelDir::Backward, RelDir::Left, RelDir::Right})
      if (relative_vector(r, target->orient) == back) target_rel = r;
    out.state.at(x, y) = Arrow{target->color, update_orientation(target_rel, target->orient)};
    out.swapped = true;
  }
  out.state.at(nx, ny) = moved;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool occupied(const BlockScene& scene, const Cell& c) {
  return std::any_of(scene.begin(), scene.end(), [&](const ColoredCube& q) { return q.pos == c; });
}

bool in_dims(const Dims& d, const Cell& c) {
  return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < d.x && c.y < d.y && c.z < d.z;
}

}  // namespace

std::optional<BlockWorld> block_move(const BlockWorld& w, const Cell& from, int direction) {
  if (direction < 0 || direction >= 6) return std::nullopt;
  const Cell d = kBlockDirections[static_cast<std::size_t>(direction)];
  const Cell to{from.x + d.x, from.y + d.y, from.z + d.z};
  if (!in_dims(w.dims, to)) return std::nullopt;
  if (to.z > 0 && !occupied(w.scene, {to.x, to.y, to.z - 1})) return std::nullopt;
  auto src = std::find_if(w.scene.begin(), w.scene.end(),
                          [&](const ColoredCube& q) { return q.pos == from; });
  if (src == w.scene.end()) return std::nullopt;
  const bool dest_full = occupied(w.scene, to);
  if (!dest_full && direction == 4) return std::nullopt;
  BlockWorld out = w;
  for (auto& q : out.scene) {
    if (q.pos == from)
      q.pos = to;
    else if (dest_full && q.pos == to)
      q.pos = from;
  }
  out.scene = settle(out.scene);
  return out;
}

std::vector<BlockOp> valid_block_moves(const BlockWorld& w) {
  std::vector<BlockOp> out;
  for (const auto& q : w.scene)
    for (int d = 0; d < 6; ++d)
      if (block_move(w, q.pos, d)) out.push_back({q.pos, d});
  return out;
}

// ---------------------------------------------------------------------------

std::string state_key(const ArrowState& s) {
  return std::to_string(s.width) + "x" + std::to_string(s.height) + "|" + std::to_string(s.x) +
         "," + std::to_string(s.y) + "," + std::to_string(s.orient);
}

std::string state_key(const ArrowMapState& s) {
  std::string k = std::to_string(s.width) + "x" + std::to_string(s.height) + "|";
  for (const auto& c : s.cells) k += c ? std::to_string(c->color) + ":" + std::to_string(c->orient) + ";" : ".;";
  return k;
}

std::string state_key(const BlockWorld& w) {
  std::string k = std::to_string(w.dims.x) + "x" + std::to_string(w.dims.y) + "x" +
                  std::to_string(w.dims.z) + "|";
  for (const auto& q : w.scene)
    k += std::to_string(q.pos.x) + "," + std::to_string(q.pos.y) + "," + std::to_string(q.pos.z) +
         ":" + std::to_string(q.color) + ";";
  return k;
}

namespace {

RelDir random_rel(Rng& rng) { return static_cast<RelDir>(rng.uniform_int(0, 3)); }

template <typename State, typename Op, typename Draw>
Trace<State, Op> sample_sequence(const State& start, int k,
                                 const std::optional<std::string>& forbidden_end, Rng& rng,
                                 Draw draw) {
  if (k < 1) throw Error("generate_sequence: k must be at least 1");
  for (int restart = 0; restart < kResampleBudget; ++restart) {
    Trace<State, Op> t;
    t.states.push_back(start);
    bool ok = true;
    for (int step = 1; step <= k && ok; ++step) {
      const bool last = step == k;
      bool accepted = false;
      for (int attempt = 0; attempt < kResampleBudget && !accepted; ++attempt) {
        auto next = draw(t.states.back(), rng);
        if (!next) continue;
        if (last && forbidden_end && state_key(next->second) == *forbidden_end) continue;
        t.ops.push_back(next->first);
        t.states.push_back(next->second);
        accepted = true;
      }
      ok = accepted;
    }
    if (ok) return t;
  }
  throw Error("generate_sequence: resample budget exhausted");
}

}  // namespace

ArrowTrace generate_sequence(const ArrowState& start, int k,
                             const std::optional<std::string>& forbidden_end, Rng& rng) {
  const int max_step = std::min(start.width, start.height);
  return sample_sequence<ArrowState, ArrowOp>(
      start, k, forbidden_end, rng,
      [&](const ArrowState& s, Rng& r) -> std::optional<std::pair<ArrowOp, ArrowState>> {
        const RelDir rel = random_rel(r);
        const int steps = r.uniform_int(1, max_step);
        auto n = arrow_move(s, rel, steps);
        if (!n) return std::nullopt;
        return std::make_pair(ArrowOp{s.x, s.y, rel, steps}, *n);
      });
}

ArrowMapTrace generate_sequence(const ArrowMapState& start, int k,
                                const std::optional<std::string>& forbidden_end, Rng& rng) {
  const int max_step = std::min(start.width, start.height);
  return sample_sequence<ArrowMapState, ArrowOp>(
      start, k, forbidden_end, rng,
      [&](const ArrowMapState& s, Rng& r) -> std::optional<std::pair<ArrowOp, ArrowMapState>> {
        std::vector<std::array<int, 2>> arrows;
        for (int y = 0; y < s.height; ++y)
          for (int x = 0; x < s.width; ++x)
            if (s.at(x, y)) arrows.push_back({x, y});
        if (arrows.empty()) throw Error("generate_sequence: arrow map has no arrows");
        const auto pos = r.pick(arrows);
        const RelDir rel = random_rel(r);
        const int steps = r.uniform_int(1, max_step);
        auto n = arrowmap_move(s, pos[0], pos[1], rel, steps);
        if (!n) return std::nullopt;
        return std::make_pair(ArrowOp{pos[0], pos[1], rel, steps}, n->state);
      });
}

BlockTrace generate_sequence(const BlockWorld& start, int k,
                             const std::optional<std::string>& forbidden_end, Rng& rng) {
  if (k < 1) throw Error("generate_sequence: k must be at least 1");
  for (int restart = 0; restart < kResampleBudget; ++restart) {
    BlockTrace t;
    t.states.push_back(start);
    bool ok = true;
    for (int step = 1; step <= k && ok; ++step) {
      auto moves = valid_block_moves(t.states.back());
      std::vector<std::pair<BlockOp, BlockWorld>> options;
      for (const auto& m : moves) {
        auto n = block_move(t.states.back(), m.from, m.direction);
        if (step == k && forbidden_end && state_key(*n) == *forbidden_end) continue;
        options.emplace_back(m, *n);
      }
      if (options.empty()) {
        ok = false;
        break;
      }
      const auto& choice = options[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(options.size()) - 1))];
      t.ops.push_back(choice.first);
      t.states.push_back(choice.second);
    }
    if (ok) return t;
  }
  throw Error("generate_sequence: resample budget exhausted");
}

std::optional<ArrowTrace> replay(const ArrowState& start, const std::vector<ArrowOp>& ops) {
  ArrowTrace t;
  t.states.push_back(start);
  for (const auto& op : ops) {
    auto n = arrow_move(t.states.back(), op.rel, op.steps);
    if (!n) return std::nullopt;
    t.ops.push_back(op);
    t.states.push_back(*n);
  }
  return t;
}

std::optional<ArrowMapTrace> replay(const ArrowMapState& start, const std::vector<ArrowOp>& ops) {
  ArrowMapTrace t;
  t.states.push_back(start);
  for (const auto& op : ops) {
    auto n = arrowmap_move(t.states.back(), op.x, op.y, op.rel, op.steps);
    if (!n) return std::nullopt;
    t.ops.push_back(op);
    t.states.push_back(n->state);
  }
  return t;
}

std::optional<BlockTrace> replay(const BlockWorld& start, const std::vector<BlockOp>& ops) {
  BlockTrace t;
  t.states.push_back(start);
  for (const auto& op : ops) {
    auto n = block_move(t.states.back(), op.from, op.direction);
    if (!n) return std::nullopt;
    t.ops.push_back(op);
    t.states.push_back(*n);
  }
  return t;
}

namespace {

nlohmann::json op_json(const ArrowOp& op) {
  return {{"x", op.x}, {"y", op.y}, {"rel", to_string(op.rel)}, {"steps", op.steps}};
}

nlohmann::json op_json(const BlockOp& op) {
  return {{"from", {op.from.x, op.from.y, op.from.z}}, {"direction", op.direction}};
}

template <typename T>
std::string dump_trace(const T& t) {
  std::string out;
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    nlohmann::json line;
    line["step"] = i;
    if (i > 0) line["op"] = op_json(t.ops[i - 1]);
    line["digest"] = sha256_hex(state_key(t.states[i]));
    out += line.dump() + "\n";
  }
  return out;
}

}  // namespace

std::string trace_jsonl(const ArrowTrace& t) { return dump_trace(t); }
std::string trace_jsonl(const ArrowMapTrace& t) { return dump_trace(t); }
std::string trace_jsonl(const BlockTrace& t) { return dump_trace(t); }

ArrowMapState random_arrow_map(int width, int height, const std::vector<int>& colors, Rng& rng) {
  ArrowMapState s;
  s.width = width;
  s.height = height;
  s.cells.assign(static_cast<std::size_t>(width) * height, std::nullopt);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (rng.chance(0.5)) {
        const int color = rng.pick(colors);
        s.at(x, y) = Arrow{color, rng.uniform_int(0, 3)};
      }
  return s;
}

BlockWorld random_block_world(Dims dims, const std::vector<int>& colors, Rng& rng) {
  OccupancyGrid g = create_supported_stack(dims, 0.5, rng);
  BlockWorld w{dims, {}};
  for (const auto& c : g.cells()) w.scene.push_back({c, rng.pick(colors)});
  w.scene = settle(w.scene);
  return w;
}

std::string describe(const ArrowOp& op, bool with_position) {
  std::string s;
  if (with_position) s = "(" + std::to_string(op.x) + ", " + std::to_string(op.y) + ") ";
  return s + to_string(op.rel) + " " + std::to_string(op.steps);
}

std::string describe(const BlockOp& op) {
  static constexpr std::array<const char*, 6> kNames = {"+x", "-x", "+y", "-y", "up", "down"};
  return "(" + std::to_string(op.from.x) + ", " + std::to_string(op.from.y) + ", " +
         std::to_string(op.from.z) + ") " + kNames[static_cast<std::size_t>(op.direction)];
}

}  // namespace spatialviz
