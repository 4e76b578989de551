#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "json.hpp"
#include "spatialviz/dataset.hpp"

using namespace spatialviz;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("spatialviz-" + name)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Option text_option(const std::string& text, const std::string& tag) {
  Option o;
  o.kind = OptionKind::Text;
  o.text = text;
  o.tag = tag;
  return o;
}

std::vector<Option> three_distractors() {
  return {text_option("x", "d1"), text_option("y", "d2"), text_option("z", "d3")};
}

std::vector<PuzzleInstance> small_set() {
  std::vector<PuzzleInstance> out;
  for (TaskId t : {TaskId::Rotation2D, TaskId::CubeCounting, TaskId::BlockMoving, TaskId::CrossSection}) {
    auto batch = generate_batch(t, 0, 3, 5);
    out.insert(out.end(), batch.begin(), batch.end());
  }
  return out;
}

}  // namespace

TEST_CASE("answer slots are uniform over the shuffled letters") {
  Rng rng(2024);
  const int n = 8000;
  std::array<int, 4> off{};
  std::array<int, 3> with{};
  for (int i = 0; i < n; ++i) {
    off[static_cast<std::size_t>(assemble_instance("q", {}, text_option("p", "correct"), three_distractors(),
                                                   NoneMode::Off, rng)
                                     .answer)]++;
    const auto w = assemble_instance("q", {}, text_option("p", "correct"), three_distractors(),
                                     NoneMode::WithPositive, rng);
    REQUIRE(w.answer < 3);
    REQUIRE(w.options[3].tag == kNoneTag);
    with[static_cast<std::size_t>(w.answer)]++;
  }
  auto chi2 = [](const auto& counts, double expected) {
    double s = 0;
    for (int c : counts) s += (c - expected) * (c - expected) / expected;
    return s;
  };
  // Critical values at p = 0.001 for 3 and 2 degrees of freedom.
  CHECK(chi2(off, n / 4.0) < 16.27);
  CHECK(chi2(with, n / 3.0) < 13.82);
}

TEST_CASE("none-correct puts the answer on D") {
  Rng rng(1);
  const auto inst = assemble_instance("q", {}, text_option("p", "correct"), three_distractors(), NoneMode::NoneCorrect, rng);
  CHECK(inst.answer == 3);
  CHECK(inst.options[3].text == kNoneText);
  for (int i = 0; i < 3; ++i) CHECK(inst.options[static_cast<std::size_t>(i)].tag != "correct");
}

TEST_CASE("explicit permutations place the candidates") {
  Rng rng(1);
  const std::vector<int> perm = {2, 0, 3, 1};
  const auto inst = assemble_instance("q", {}, text_option("p", "correct"), three_distractors(), NoneMode::Off, rng, &perm);
  CHECK(inst.answer == 2);
  CHECK(inst.options[0].text == "x");
  const std::vector<int> bad = {0, 0, 1, 2};
  CHECK_THROWS_AS(assemble_instance("q", {}, text_option("p", "c"), three_distractors(), NoneMode::Off, rng, &bad), Error);
  CHECK_THROWS_AS(assemble_instance("q", {}, text_option("p", "c"), {text_option("x", "d")}, NoneMode::Off, rng), Error);
}

TEST_CASE("write then read reproduces every instance") {
  TempDir dir("roundtrip");
  const auto insts = small_set();
  const Manifest m = write_dataset(insts, dir.path, 5);
  CHECK(m.total() == static_cast<int>(insts.size()));
  const Manifest back = read_manifest(dir.path);
  CHECK(back.total() == m.total());
  CHECK(back.counts == m.counts);
  CHECK(recount(dir.path) == m.counts);
  for (const auto& inst : insts) {
    const auto read = read_instance(dir.path / instance_dir(inst));
    INFO(inst.id);
    CHECK(read == inst);
  }
}

TEST_CASE("rewriting is idempotent and conflicts are refused") {
  TempDir dir("rewrite");
  auto insts = small_set();
  write_dataset(insts, dir.path, 5);
  const std::string before = slurp(dir.path / "manifest.json");
  write_dataset(insts, dir.path, 5);
  CHECK(slurp(dir.path / "manifest.json") == before);
  insts[0].question += " changed";
  CHECK_THROWS(write_dataset({insts[0]}, dir.path, 5));
}

TEST_CASE("question files carry the documented keys") {
  const auto inst = generate_batch(TaskId::PaperFolding, 0, 1, 3).front();
  const auto j = nlohmann::json::parse(question_json(inst));
  for (const char* key : {"schema_version", "id", "task", "level", "question", "references", "options", "answer",
                          "explanation", "seed", "generator_version"})
    CHECK(j.contains(key));
  CHECK(j["answer"].get<std::string>() == std::string(1, inst.answer_letter()));
  CHECK(j["options"].size() == 4);
}

TEST_CASE("verify accepts a clean dataset and flags tampering") {
  TempDir dir("verify");
  const auto insts = small_set();
  write_dataset(insts, dir.path, 5);
  const auto ok = verify_dataset(dir.path, 2);
  CHECK(ok.checked == static_cast<int>(insts.size()));
  CHECK(ok.ok());

  const fs::path q = dir.path / instance_dir(insts[1]) / "question.json";
  auto j = nlohmann::ordered_json::parse(slurp(q));
  const std::string old = j["answer"];
  j["answer"] = old == "A" ? "B" : "A";
  std::ofstream(q, std::ios::binary) << j.dump(2) << "\n";
  const auto bad = verify_dataset(dir.path, 2);
  CHECK_FALSE(bad.ok());

  fs::remove_all(dir.path / instance_dir(insts[2]));
  const auto missing = verify_dataset(dir.path, 1);
  CHECK(missing.violations.size() > bad.violations.size());
}

TEST_CASE("batches are independent of the job count") {
  const auto a = generate_batch(TaskId::CubeAssembly, 1, 6, 11, 1);
  const auto b = generate_batch(TaskId::CubeAssembly, 1, 6, 11, 4);
  CHECK(a == b);
  CHECK(a[3].id == "ca-l1-0003");
  CHECK(a[3].seed == derive_seed(11, "CA", 1, 3));
}

TEST_CASE("suite fractions keep every task level") {
  const auto s = generate_suite(8, 4, 0.05);
  std::map<std::string, std::set<int>> levels;
  for (const auto& inst : s) levels[task_info(inst.task).code].insert(inst.level);
  CHECK(levels.size() == 11);
}

TEST_CASE("stats report letter shares") {
  TempDir dir("stats");
  write_dataset(small_set(), dir.path, 5);
  const auto st = dataset_stats(read_manifest(dir.path), dir.path);
  CHECK(st.total == 12);
  CHECK(st.letters[0] + st.letters[1] + st.letters[2] + st.letters[3] == 12);
  CHECK(st.to_text().find("A") != std::string::npos);
}

TEST_CASE("committed tables match the code") {
  const fs::path data = SPATIALVIZ_DATA_DIR;
  CHECK(slurp(data / "patterns.json") == pattern_library_json());
  CHECK(slurp(data / "levels.json") == level_table_json());
}
