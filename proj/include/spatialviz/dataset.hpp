#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spatialviz/tasks.hpp"

namespace spatialviz {

/// Shuffles the positive and distractors into four options. NoneMode::Off
/// uses three distractors over A-D; WithPositive puts the positive and two
/// distractors over A-C and the "none" text in D; NoneCorrect puts three
/// distractors over A-C and makes D the answer. `permutation`, when given,
/// replaces the shuffle (entry i is the slot of the i-th candidate).
PuzzleInstance assemble_instance(std::string question, std::vector<Document> references,
                                 Option positive, std::vector<Option> distractors, NoneMode mode,
                                 Rng& rng, const std::vector<int>* permutation = nullptr);

struct ManifestEntry {
  std::string id;
  std::string task;  // code
  int level = 0;
  std::string path;  // relative to the root
  std::uint64_t seed = 0;
  char answer = 'A';
};

struct Manifest {
  std::string version = kGeneratorVersion;
  std::uint64_t seed = 0;
  std::map<std::string, std::map<int, int>> counts;  // task code -> level -> count
  std::vector<ManifestEntry> entries;
  int total() const { return static_cast<int>(entries.size()); }
};

std::string instance_dir(const PuzzleInstance& inst);
/// question.json contents for the instance (images referenced by relative path).
std::string question_json(const PuzzleInstance& inst);
/// Image files of the instance, keyed by path relative to its directory.
std::vector<std::pair<std::string, std::string>> instance_files(const PuzzleInstance& inst);

/// Writes root/<task>/<level>/<id>/question.json and images/*.svg plus
/// root/manifest.json. Rewriting identical content is a no-op; differing
/// content at an existing path throws.
Manifest write_dataset(const std::vector<PuzzleInstance>& instances,
                       const std::filesystem::path& root, std::uint64_t seed);
PuzzleInstance read_instance(const std::filesystem::path& dir);
Manifest read_manifest(const std::filesystem::path& root);
std::string manifest_json(const Manifest& m);
/// Counts instance directories on disk, per task code and level.
std::map<std::string, std::map<int, int>> recount(const std::filesystem::path& root);

struct DatasetStats {
  std::array<int, 4> letters{};
  std::map<std::string, int> modality;  // image / text / number option counts
  std::map<std::string, std::map<int, int>> counts;
  int total = 0;
  std::string to_text() const;
};

DatasetStats dataset_stats(const Manifest& m, const std::filesystem::path& root);

/// Generates instances index 0..count-1 of one task and level.
std::vector<PuzzleInstance> generate_batch(TaskId task, int level, int count, std::uint64_t seed,
                                           int jobs = 1);
/// Full suite with the per-task counts split evenly over the levels.
std::vector<PuzzleInstance> generate_suite(std::uint64_t seed, int jobs = 1, double fraction = 1.0);

struct VerifyReport {
  int checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Regenerates every instance from its seed, compares the files byte for
/// byte and runs the task oracle.
VerifyReport verify_dataset(const std::filesystem::path& root, int jobs = 1);

}  // namespace spatialviz
