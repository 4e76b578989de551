#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "catch_amalgamated.hpp"
#include "json.hpp"
#include "spatialviz/eval.hpp"

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

PromptPayload tiny_payload() {
  PromptPayload p;
  p.text = "Question: ?";
  return p;
}

EndpointConfig fast_config(const std::string& url) {
  EndpointConfig c;
  c.url = url;
  c.model = "stub";
  c.backoff = std::chrono::milliseconds(1);
  c.timeout = std::chrono::milliseconds(2000);
  return c;
}

Manifest fake_manifest() {
  Manifest m;
  m.entries = {{"a", "2DR", 0, "", 0, 'A'}, {"b", "2DR", 0, "", 0, 'B'}, {"c", "2DR", 1, "", 0, 'C'},
               {"d", "PF", 0, "", 0, 'D'}};
  return m;
}

EvalRecord rec(const std::string& id, std::optional<char> letter) {
  EvalRecord r;
  r.id = id;
  r.letter = letter;
  return r;
}

}  // namespace

TEST_CASE("extraction fixtures") {
  std::ifstream in(fs::path(SPATIALVIZ_FIXTURE_DIR) / "extraction.json");
  REQUIRE(in);
  const auto fixtures = nlohmann::json::parse(in);
  REQUIRE(fixtures.size() >= 20);
  for (const auto& f : fixtures) {
    const auto got = extract_answer(f["response"].get<std::string>());
    INFO(f["style"].get<std::string>());
    if (f["expected"].is_null()) {
      CHECK_FALSE(got.has_value());
    } else {
      REQUIRE(got.has_value());
      CHECK(std::string(1, *got) == f["expected"].get<std::string>());
    }
  }
}

TEST_CASE("every marker is covered by a fixture") {
  std::ifstream in(fs::path(SPATIALVIZ_FIXTURE_DIR) / "extraction.json");
  const auto fixtures = nlohmann::json::parse(in);
  for (const auto& marker : answer_markers()) {
    bool seen = false;
    for (const auto& f : fixtures)
      seen |= !f["expected"].is_null() && f["response"].get<std::string>().find(marker) != std::string::npos;
    INFO(marker);
    CHECK(seen);
  }
}

TEST_CASE("prompt templates") {
  const auto inst = generate_instance(TaskId::CubeCounting, 0, 3);
  const auto cot = prompt_text(inst, PromptMode::Cot);
  CHECK(cot.find("<think>reasoning process</think>") != std::string::npos);
  CHECK(cot.find("\nQuestion: " + inst.question + "\n") != std::string::npos);
  CHECK(cot.find("\nA." + std::to_string(inst.options[0].number) + "\n") != std::string::npos);
  const auto direct = prompt_text(inst, PromptMode::Direct);
  CHECK(direct.find("only the final answer") != std::string::npos);
  CHECK(direct.rfind("D.") != std::string::npos);
  CHECK(parse_prompt_mode("direct") == PromptMode::Direct);
  CHECK_THROWS_AS(parse_prompt_mode("fast"), Error);
}

TEST_CASE("image options become numbered attachments") {
  const auto inst = generate_instance(TaskId::Rotation2D, 0, 3);
  const auto p = build_prompt(inst, PromptMode::Cot, 64);
  const std::size_t refs = inst.references.size();
  std::size_t images = refs;
  for (const auto& o : inst.options) images += o.kind == OptionKind::Image ? 1 : 0;
  CHECK(p.images_base64.size() == images);
  CHECK(p.text.find("<image " + std::to_string(refs + 1) + ">") != std::string::npos);
  const auto body = nlohmann::json::parse(request_json(fast_config("http://x"), p));
  CHECK(body["model"] == "stub");
  CHECK(body["messages"][0]["content"].size() == images + 1);
  CHECK(body["messages"][0]["content"][1]["image_url"]["url"].get<std::string>().rfind("data:image/png;base64,", 0) == 0);
}

TEST_CASE("stub endpoint echoes a reply") {
  StubServer stub([](const std::string& body) {
    const auto j = nlohmann::json::parse(body);
    return std::make_pair(200, "echo " + j["messages"][0]["content"][0]["text"].get<std::string>());
  });
  const auto cfg = fast_config(stub.url());
  const auto r = query_model(cfg, tiny_payload(), http_transport(cfg));
  CHECK(r.ok);
  CHECK(r.text == "echo Question: ?");
  CHECK(r.attempts == 1);
}

TEST_CASE("transient failures are retried") {
  std::atomic<int> calls{0};
  StubServer stub([&](const std::string&) {
    return ++calls == 1 ? std::make_pair(500, std::string("busy")) : std::make_pair(200, std::string("<answer>B</answer>"));
  });
  const auto cfg = fast_config(stub.url());
  const auto r = query_model(cfg, tiny_payload(), http_transport(cfg));
  CHECK(r.ok);
  CHECK(r.attempts == 2);
  CHECK(extract_answer(r.text) == 'B');
  CHECK(stub.requests() == 2);
}

TEST_CASE("client errors are not retried and retries are bounded") {
  int calls = 0;
  const Transport bad_request = [&](const std::string&) { ++calls; return TransportResult{400, "no", ""}; };
  auto cfg = fast_config("http://unused");
  CHECK_FALSE(query_model(cfg, tiny_payload(), bad_request).ok);
  CHECK(calls == 1);
  calls = 0;
  const Transport down = [&](const std::string&) { ++calls; return TransportResult{0, "", "refused"}; };
  const auto r = query_model(cfg, tiny_payload(), down);
  CHECK_FALSE(r.ok);
  CHECK(calls == 1 + cfg.retries);
  CHECK(r.error.find("refused") != std::string::npos);
}

TEST_CASE("a timeout becomes a failure record") {
  StubServer stub([](const std::string&) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    return std::make_pair(200, std::string("A"));
  });
  auto cfg = fast_config(stub.url());
  cfg.timeout = std::chrono::milliseconds(100);
  cfg.retries = 0;
  const auto r = query_model(cfg, tiny_payload(), http_transport(cfg));
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("records round trip through json lines") {
  EvalRecord r = rec("x", 'C');
  r.response = "line\nbreak \"quoted\"";
  r.correct = true;
  r.latency_ms = 12.5;
  r.error = "";
  const auto back = record_from_json(to_jsonl(r));
  CHECK(back.id == "x");
  CHECK(back.letter == 'C');
  CHECK(back.response == r.response);
  CHECK(back.correct);
  CHECK_FALSE(record_from_json(to_jsonl(rec("y", std::nullopt))).letter.has_value());
}

TEST_CASE("scoring recomputes correctness") {
  const Manifest m = fake_manifest();
  auto all = score({rec("a", 'A'), rec("b", 'B'), rec("c", 'C'), rec("d", 'D')}, m);
  CHECK(all.overall.accuracy() == 100.0);
  auto half = score({rec("a", 'A'), rec("b", 'C'), rec("c", 'C'), rec("d", std::nullopt)}, m);
  CHECK(half.cells["2DR"][0].accuracy() == 50.0);
  CHECK(half.cells["2DR"][1].accuracy() == 100.0);
  CHECK(half.overall.correct == 2);
  CHECK(half.overall.extraction_failures == 1);
  CHECK(half.task("2DR").total == 3);
  // A stale correct flag in the record is ignored.
  auto lying = rec("b", 'A');
  lying.correct = true;
  CHECK(score({lying}, m).overall.correct == 0);
  CHECK_THROWS_AS(score({rec("zzz", 'A')}, m), Error);
  auto shuffled = score({rec("d", std::nullopt), rec("c", 'C'), rec("b", 'C'), rec("a", 'A')}, m);
  CHECK(shuffled.to_csv() == half.to_csv());
  CHECK(half.to_markdown().find("| Overall |") != std::string::npos);
}

TEST_CASE("random baseline is seeded") {
  const Manifest m = fake_manifest();
  Rng a(5), b(5);
  const auto x = random_baseline(m, 2000, a);
  CHECK(x.to_csv() == random_baseline(m, 2000, b).to_csv());
  CHECK(x.overall.total == 8000);
  CHECK(std::abs(x.overall.accuracy() - 25.0) < 2.0);
  Rng c(1);
  CHECK_THROWS_AS(random_baseline(m, 0, c), Error);
}

TEST_CASE("offline evaluation against the stub") {
  TempDir dir("eval");
  std::vector<PuzzleInstance> insts;
  for (TaskId t : {TaskId::ArrowMoving, TaskId::CubeCounting}) {
    auto b = generate_batch(t, 0, 4, 9);
    insts.insert(insts.end(), b.begin(), b.end());
  }
  write_dataset(insts, dir.path, 9);
  StubServer stub([](const std::string& body) {
    const bool direct = body.find("only the final answer") != std::string::npos;
    return std::make_pair(200, std::string(direct ? "B" : "<think>x</think><answer>A</answer>"));
  });
  const auto cfg = fast_config(stub.url());
  const auto records = evaluate(dir.path, cfg, PromptMode::Cot, http_transport(cfg), 3);
  REQUIRE(records.size() == insts.size());
  const Manifest m = read_manifest(dir.path);
  int expected = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].id == m.entries[i].id);
    CHECK(records[i].letter == 'A');
    expected += m.entries[i].answer == 'A' ? 1 : 0;
  }
  const auto table = score(records, m);
  CHECK(table.overall.correct == expected);
  CHECK(table.overall.total == static_cast<int>(insts.size()));
  const auto direct = evaluate(dir.path, cfg, PromptMode::Direct, http_transport(cfg), 2);
  for (const auto& r : direct) CHECK(r.letter == 'B');
}
