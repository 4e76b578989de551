#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "spatialviz/common.hpp"
#include "spatialviz/document.hpp"
#include "spatialviz/patterns.hpp"
#include "spatialviz/render.hpp"
#include "spatialviz/sim.hpp"
#include "spatialviz/solids.hpp"
#include "spatialviz/voxel.hpp"

namespace spatialviz {

inline constexpr const char* kGeneratorVersion = "1.0.0";

enum class TaskId {
  Rotation2D,
  Rotation3D,
  ThreeView,
  PaperFolding,
  CubeUnfolding,
  CubeReconstruction,
  CrossSection,
  CubeCounting,
  CubeAssembly,
  ArrowMoving,
  BlockMoving,
};

struct TaskInfo {
  TaskId id;
  const char* code;   // "2DR"
  const char* slug;   // "2d_rotation"
  const char* title;  // "2D Rotation"
  int levels;
  int suite_count;
};

const std::vector<TaskInfo>& all_tasks();
const TaskInfo& task_info(TaskId id);
/// Accepts the code or the slug, case-insensitively.
TaskId parse_task(const std::string& name);

enum class OptionKind { Image, Text, Number };
const char* to_string(OptionKind k);

inline constexpr const char* kNoneText = "All three other options are incorrect";
inline constexpr const char* kNoneTag = "none-of-the-others";

struct Option {
  OptionKind kind = OptionKind::Image;
  Document image;
  std::string text;
  long long number = 0;
  std::string tag;          // "correct" or the distractor construction
  std::string explanation;  // one sentence
  nlohmann::json model;     // hidden ground truth for the oracle
  bool operator==(const Option&) const = default;
};

struct PuzzleInstance {
  std::string id;
  TaskId task = TaskId::Rotation2D;
  int level = 0;
  std::string question;
  std::vector<Document> references;
  std::vector<Option> options;  // exactly 4
  int answer = 0;               // index into options
  std::uint64_t seed = 0;
  std::string version = kGeneratorVersion;
  nlohmann::json model;  // hidden task state
  char answer_letter() const { return static_cast<char>('A' + answer); }
  bool operator==(const PuzzleInstance&) const = default;
};

/// How the "none of the others" slot is used by one instance.
enum class NoneMode { Off, WithPositive, NoneCorrect };

struct NonePolicy {
  double rate = 0.0;          // share of instances with the slot
  double correct_rate = 0.0;  // share of those where it is the answer
};

/// Per-task "none of the others" policy.
NonePolicy none_policy(TaskId task, int level);
NoneMode draw_none_mode(const NonePolicy& policy, Rng& rng);

/// Versioned per-level size table as JSON.
std::string level_table_json();

/// Deterministic generation of one instance. Throws Error when a resample
/// budget runs out.
PuzzleInstance generate_instance(TaskId task, int level, std::uint64_t seed);
std::string instance_id(TaskId task, int level, int index);

/// Runs the task oracle; empty when the designated answer is the only
/// correct option and every stored image matches its model.
std::vector<std::string> check_instance(const PuzzleInstance& inst);

// Per-task generators (seeded Rng already derived from the instance seed).
PuzzleInstance generate_2d_rotation(int level, Rng& rng);
PuzzleInstance generate_3d_rotation(int level, Rng& rng);
PuzzleInstance generate_three_view(int level, Rng& rng);
PuzzleInstance generate_paper_folding(int level, Rng& rng);
PuzzleInstance generate_cube_unfolding(int level, Rng& rng);
PuzzleInstance generate_cube_reconstruction(int level, Rng& rng);
PuzzleInstance generate_cross_section(int level, Rng& rng);
PuzzleInstance generate_cube_counting(int level, Rng& rng);
PuzzleInstance generate_cube_assembly(int level, Rng& rng);
PuzzleInstance generate_arrow_moving(int level, Rng& rng);
PuzzleInstance generate_block_moving(int level, Rng& rng);

std::vector<std::string> check_2d_rotation(const PuzzleInstance& inst);
std::vector<std::string> check_3d_rotation(const PuzzleInstance& inst);
std::vector<std::string> check_three_view(const PuzzleInstance& inst);
std::vector<std::string> check_paper_folding(const PuzzleInstance& inst);
std::vector<std::string> check_cube_unfolding(const PuzzleInstance& inst);
std::vector<std::string> check_cube_reconstruction(const PuzzleInstance& inst);
std::vector<std::string> check_cross_section(const PuzzleInstance& inst);
std::vector<std::string> check_cube_counting(const PuzzleInstance& inst);
std::vector<std::string> check_cube_assembly(const PuzzleInstance& inst);
std::vector<std::string> check_arrow_moving(const PuzzleInstance& inst);
std::vector<std::string> check_block_moving(const PuzzleInstance& inst);

/// Synthetic bracket, slot and boss parts used by the line-drawing level of
/// the three-view task.
const std::vector<OccupancyGrid>& part_corpus();

// JSON codecs for the model records.
nlohmann::json to_json(const OccupancyGrid& g);
OccupancyGrid grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Grid2D& g);
Grid2D grid2d_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FaceMap& f);
FaceMap facemap_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CornerView& v);
CornerView corner_view_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CompositeSolid& c);
CompositeSolid composite_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Plane& p);
Plane plane_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<ArrowOp>& ops);
std::vector<ArrowOp> arrow_ops_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ArrowState& s);
ArrowState arrow_state_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ArrowMapState& s);
ArrowMapState arrow_map_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BlockWorld& w);
BlockWorld block_world_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<BlockOp>& ops);
std::vector<BlockOp> block_ops_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<FoldOp>& ops);
std::vector<FoldOp> fold_ops_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HoleGrid& g);
HoleGrid hole_grid_from_json(const nlohmann::json& j);

}  // namespace spatialviz
