#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spatialviz/common.hpp"
#include "spatialviz/patterns.hpp"
#include "spatialviz/voxel.hpp"

namespace spatialviz {

// ---------------------------------------------------------------------------
// Paper folding
// ---------------------------------------------------------------------------

enum class FoldDirection { Horizontal, Vertical, Diagonal };
const char* to_string(FoldDirection d);

/// Horizontal folds use a line between rows, vertical folds a line between
/// columns, both counted from the top-left of the current rectangle. A
/// diagonal fold turns the corner triangle with legs `line` over the 45 degree
/// line through that corner square.
struct FoldOp {
  FoldDirection direction = FoldDirection::Horizontal;
  int line = 1;
  Corner corner = Corner::TopLeft;  // diagonal only
  bool operator==(const FoldOp&) const = default;
};

struct Rect {
  int row = 0, col = 0, rows = 0, cols = 0;
  bool operator==(const Rect&) const = default;
};

struct Cell2 {
  int row = 0, col = 0;
  auto operator<=>(const Cell2&) const = default;
};

/// Folds applied to the original sheet, resolved to absolute coordinates.
struct ResolvedFold {
  FoldOp op;
  Rect before;
  Rect after;
  std::vector<Cell2> folded;  // cells that move, in original coordinates
};

class PaperState {
 public:
  PaperState(int rows, int cols);

  int original_rows() const { return rows_; }
  int original_cols() const { return cols_; }
  const Rect& current() const { return rect_; }
  /// -1 folded away, 0 blank, 1 hole; original dimensions, row-major.
  const std::vector<int>& complete_grid() const { return grid_; }
  int at(int row, int col) const { return grid_[static_cast<std::size_t>(row) * cols_ + col]; }
  const std::vector<ResolvedFold>& folds() const { return folds_; }
  /// Punched cells in original coordinates.
  const std::vector<Cell2>& punches() const { return punches_; }
  bool has_diagonal() const;
  /// Visible cells (not folded away) of the current rectangle.
  std::vector<Cell2> visible_cells() const;

  /// Mirror image of a cell across the fold line. Only cells listed in
  /// `folded` actually move.
  static Cell2 reflect(const ResolvedFold& f, Cell2 c);

 private:
  friend PaperState paper_fold(const PaperState&, const FoldOp&);
  friend PaperState paper_punch(const PaperState&, const std::vector<Cell2>&);
  int rows_, cols_;
  Rect rect_;
  std::vector<int> grid_;
  std::vector<ResolvedFold> folds_;
  std::vector<Cell2> punches_;
};

/// The smaller side folds onto the larger; on a tie the top (or left) side
/// moves. Throws on an out-of-range line or any fold after a diagonal one.
PaperState paper_fold(const PaperState& state, const FoldOp& op);
/// Points are relative to the current rectangle.
PaperState paper_punch(const PaperState& state, const std::vector<Cell2>& points);

/// Hole matrix over the original sheet, row-major.
struct HoleGrid {
  int rows = 0, cols = 0;
  std::vector<std::uint8_t> holes;
  bool at(int r, int c) const { return holes[static_cast<std::size_t>(r) * cols + c] != 0; }
  void set(int r, int c, bool v) { holes[static_cast<std::size_t>(r) * cols + c] = v ? 1 : 0; }
  int count() const;
  bool operator==(const HoleGrid&) const = default;
};

HoleGrid paper_unfold(const PaperState& state);
/// Refolds a candidate unfolded pattern through the state's folds. True iff
/// every stack of layers is uniformly holed or blank and the holed stacks are
/// exactly the punched cells.
bool refold_matches(const PaperState& state, const HoleGrid& candidate);

/// Random fold sequence ending with a diagonal fold.
std::vector<FoldOp> random_folds(int rows, int cols, int steps, Rng& rng);

// ---------------------------------------------------------------------------
// Arrows
// ---------------------------------------------------------------------------

enum class RelDir { Forward, Backward, Left, Right };
const char* to_string(RelDir d);
inline constexpr std::array<std::array<int, 2>, 4> kArrowDirections = {
    {{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};

/// forward +0, backward +2, left -1, right +1 (mod 4).
int update_orientation(RelDir rel, int orient);
std::array<int, 2> relative_vector(RelDir rel, int orient);

struct ArrowState {
  int width = 3, height = 3;
  int x = 0, y = 0;
  int orient = 0;
  bool operator==(const ArrowState&) const = default;
};

struct ArrowOp {
  int x = 0, y = 0;  // mover position (arrow maps only)
  RelDir rel = RelDir::Forward;
  int steps = 1;
  bool operator==(const ArrowOp&) const = default;
};

std::optional<ArrowState> arrow_move(const ArrowState& s, RelDir rel, int steps);

struct Arrow {
  int color = 1;
  int orient = 0;
  bool operator==(const Arrow&) const = default;
};

/// Cells indexed [y * width + x], y growing upward.
struct ArrowMapState {
  int width = 3, height = 3;
  std::vector<std::optional<Arrow>> cells;
  const std::optional<Arrow>& at(int x, int y) const {
    return cells[static_cast<std::size_t>(y) * width + x];
  }
  std::optional<Arrow>& at(int x, int y) { return cells[static_cast<std::size_t>(y) * width + x]; }
  bool operator==(const ArrowMapState&) const = default;
};

struct ArrowMapResult {
  ArrowMapState state;
  bool swapped = false;
};

std::optional<ArrowMapResult> arrowmap_move(const ArrowMapState& s, int x, int y, RelDir rel,
                                            int steps);

// ---------------------------------------------------------------------------
// Blocks
// ---------------------------------------------------------------------------

struct BlockWorld {
  Dims dims;
  BlockScene scene;  // kept settled and sorted
  bool operator==(const BlockWorld&) const = default;
};

inline constexpr std::array<Cell, 6> kBlockDirections = {
    {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

struct BlockOp {
  Cell from;
  int direction = 0;  // index into kBlockDirections
  bool operator==(const BlockOp&) const = default;
};

std::optional<BlockWorld> block_move(const BlockWorld& w, const Cell& from, int direction);
std::vector<BlockOp> valid_block_moves(const BlockWorld& w);

// ---------------------------------------------------------------------------
// Digests and sequences
// ---------------------------------------------------------------------------

std::string state_key(const ArrowState& s);
std::string state_key(const ArrowMapState& s);
std::string state_key(const BlockWorld& w);

template <typename State, typename Op>
struct Trace {
  std::vector<Op> ops;
  std::vector<State> states;  // ops.size() + 1 entries
};

using ArrowTrace = Trace<ArrowState, ArrowOp>;
using ArrowMapTrace = Trace<ArrowMapState, ArrowOp>;
using BlockTrace = Trace<BlockWorld, BlockOp>;

/// Random valid k-step sequences. When `forbidden_end` is given the final
/// state's key differs from it; the last step is resampled and the whole
/// sequence restarted within the resample budget.
ArrowTrace generate_sequence(const ArrowState& start, int k,
                             const std::optional<std::string>& forbidden_end, Rng& rng);
ArrowMapTrace generate_sequence(const ArrowMapState& start, int k,
                                const std::optional<std::string>& forbidden_end, Rng& rng);
BlockTrace generate_sequence(const BlockWorld& start, int k,
                             const std::optional<std::string>& forbidden_end, Rng& rng);

/// Replays ops; nullopt when any op is invalid.
std::optional<ArrowTrace> replay(const ArrowState& start, const std::vector<ArrowOp>& ops);
std::optional<ArrowMapTrace> replay(const ArrowMapState& start, const std::vector<ArrowOp>& ops);
std::optional<BlockTrace> replay(const BlockWorld& start, const std::vector<BlockOp>& ops);

/// One JSON object per line: step index, op (absent on line 0), state digest.
std::string trace_jsonl(const ArrowTrace& t);
std::string trace_jsonl(const ArrowMapTrace& t);
std::string trace_jsonl(const BlockTrace& t);

ArrowMapState random_arrow_map(int width, int height, const std::vector<int>& colors, Rng& rng);
BlockWorld random_block_world(Dims dims, const std::vector<int>& colors, Rng& rng);

std::string describe(const ArrowOp& op, bool with_position);
std::string describe(const BlockOp& op);

}  // namespace spatialviz
