#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "spatialviz/cli.hpp"
#include "spatialviz/eval.hpp"
#include "spatialviz/tasks.hpp"

using namespace spatialviz;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("spatialviz-cli-" + name)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"generate", "--seed", "1"}).code == kExitUsage);
  CHECK(run({"generate", "--seed", "x", "--out", "/tmp/x"}).code == kExitUsage);
  CHECK(run({"verify", "--in", "/nonexistent/spatialviz"}).code == kExitUsage);
  CHECK(run({"evaluate", "--in", "/tmp", "--endpoint", "http://x", "--model", "m", "--mode", "slow", "--out", "r"}).code ==
        kExitUsage);
  const auto r = run({"generate", "--task", "XYZ", "--seed", "1", "--out", "/tmp/spatialviz-never"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("XYZ") != std::string::npos);
  CHECK(run({"generate", "--task", "2DR", "--level", "7", "--seed", "1", "--out", "/tmp/spatialviz-never"}).code ==
        kExitUsage);
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("generate-suite") != std::string::npos);
}

TEST_CASE("generate, verify, stats, baseline") {
  TempDir dir("flow");
  auto g = run({"generate", "--task", "cube_counting", "--count", "3", "--seed", "42", "--out", dir.str()});
  REQUIRE(g.code == kExitOk);
  CHECK(g.out.find("wrote " + std::to_string(3 * task_info(TaskId::CubeCounting).levels) + " instances") != std::string::npos);
  CHECK(fs::exists(dir.path / "manifest.json"));
  CHECK(run({"verify", "--in", dir.str(), "--jobs", "2"}).code == kExitOk);
  const auto s = run({"stats", "--in", dir.str()});
  CHECK(s.code == kExitOk);
  CHECK_FALSE(s.out.empty());
  const auto b = run({"baseline", "--in", dir.str(), "--trials", "100", "--seed", "3"});
  CHECK(b.code == kExitOk);
  CHECK(b.out.find("| CC |") != std::string::npos);
  CHECK(b.out == run({"baseline", "--in", dir.str(), "--trials", "100", "--seed", "3"}).out);
}

TEST_CASE("verify exits with 1 on a violation") {
  TempDir dir("tamper");
  REQUIRE(run({"generate", "--task", "BM", "--level", "0", "--count", "2", "--seed", "1", "--out", dir.str()}).code ==
          kExitOk);
  for (const auto& e : fs::recursive_directory_iterator(dir.path))
    if (e.path().extension() == ".svg") {
      std::ofstream(e.path(), std::ios::app) << "\n";
      break;
    }
  const auto v = run({"verify", "--in", dir.str()});
  CHECK(v.code == kExitViolation);
  CHECK(v.out.find("VIOLATION") != std::string::npos);
}

TEST_CASE("evaluate and score through the stub") {
  TempDir dir("eval");
  REQUIRE(run({"generate", "--task", "AM", "--count", "2", "--seed", "4", "--out", dir.str()}).code == kExitOk);
  StubServer stub([](const std::string&) { return std::make_pair(200, std::string("<answer>C</answer>")); });
  const std::string records = (dir.path / "records.jsonl").string();
  const auto e = run({"evaluate", "--in", dir.str(), "--endpoint", stub.url(), "--model", "stub", "--mode", "direct",
                      "--out", records, "--concurrency", "2"});
  REQUIRE(e.code == kExitOk);
  CHECK(e.out.find("| Overall |") != std::string::npos);
  const auto s = run({"score", "--records", records, "--in", dir.str(), "--csv"});
  CHECK(s.code == kExitOk);
  CHECK(s.out.rfind("task,level,", 0) == 0);
  CHECK(run({"score", "--records", "/nonexistent.jsonl", "--in", dir.str()}).code == kExitUsage);
}

TEST_CASE("tables are written") {
  TempDir dir("tables");
  REQUIRE(run({"tables", "--out", dir.str()}).code == kExitOk);
  CHECK(fs::exists(dir.path / "patterns.json"));
  CHECK(fs::exists(dir.path / "levels.json"));
}
