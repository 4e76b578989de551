#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "spatialviz/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "spatialviz/raster.hpp"

namespace spatialviz {

using nlohmann::json;

const char* to_string(PromptMode m) { return m == PromptMode::Cot ? "cot" : "direct"; }

PromptMode parse_prompt_mode(const std::string& s) {
  if (s == "cot") return PromptMode::Cot;
  if (s == "direct") return PromptMode::Direct;
  throw Error("unknown prompt mode " + s + " (expected cot or direct)");
}

namespace {

constexpr const char* kCotInstruction =
    "You should first provide a reasoning process, then provide a single option (A, B, C or D) as the final "
    "answer. The reasoning process and the answer are enclosed within <think></think> and <answer></answer> "
    "tags, respectively, i.e., <think>reasoning process</think>, <answer>answer</answer>.";

constexpr const char* kDirectInstruction =
    "Answer with a single option letter (A, B, C, or D), enclosed within the <answer></answer> tag. For "
    "example: <answer>A</answer>. Ensure that your output contains only the final answer, without any "
    "intermediate reasoning or additional content.";

}  // namespace

std::string prompt_text(const PuzzleInstance& inst, PromptMode mode) {
  std::string out = mode == PromptMode::Cot ? kCotInstruction : kDirectInstruction;
  out += "\nQuestion: " + inst.question + "\n";
  int image = static_cast<int>(inst.references.size());
  for (std::size_t i = 0; i < inst.options.size(); ++i) {
    const auto& o = inst.options[i];
    out += static_cast<char>('A' + i);
    out += '.';
    if (o.kind == OptionKind::Image) out += "<image " + std::to_string(++image) + ">";
    else if (o.kind == OptionKind::Number) out += std::to_string(o.number);
    else out += o.text;
    out += '\n';
  }
  return out;
}

PromptPayload build_prompt(const PuzzleInstance& inst, PromptMode mode, int width_px) {
  PromptPayload p;
  p.mode = mode;
  p.text = prompt_text(inst, mode);
  auto attach = [&](const Document& d) {
    const auto png = encode_png(rasterize(d, width_px));
    p.images_base64.push_back(base64_encode(png));
  };
  for (const auto& r : inst.references) attach(r);
  for (const auto& o : inst.options)
    if (o.kind == OptionKind::Image) attach(o.image);
  return p;
}

// ---------------------------------------------------------------------------
// Answer extraction

const std::vector<std::string>& answer_markers() {
  static const std::vector<std::string> kMarkers = {
      "<answer>",     "Answer:",       "Final answer",   "final answer",   "Final Answer",  "the answer is",
      "The answer is", "correct answer", "Correct answer", "Correct Answer", "correct path"};
  return kMarkers;
}

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

/// The single option letter standing alone in s, if exactly one distinct
/// letter does.
std::optional<char> sole_letter(const std::string& s) {
  std::set<char> found;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c < 'A' || c > 'D') continue;
    if (i > 0 && is_alpha(s[i - 1])) continue;
    if (i + 1 < s.size() && is_alpha(s[i + 1])) continue;
    found.insert(c);
  }
  if (found.size() != 1) return std::nullopt;
  return *found.begin();
}

std::string before_period(const std::string& s) { return s.substr(0, s.find('.')); }

}  // namespace

std::optional<char> extract_answer(const std::string& text) {
  static const std::regex tag(R"(<answer>([\s\S]*?)</answer>)");
  std::optional<std::string> captured;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), tag); it != std::sregex_iterator(); ++it)
    captured = (*it)[1].str();
  if (captured)
    if (auto l = sole_letter(before_period(*captured))) return l;

  for (const auto& marker : answer_markers()) {
    const auto pos = text.rfind(marker);
    if (pos == std::string::npos) continue;
    if (auto l = sole_letter(before_period(text.substr(pos + marker.size())))) return l;
  }

  static const std::regex bare(R"(^\s*[\(\[]?([A-D])[\)\]\.:]?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, bare)) return m[1].str()[0];
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Transport

namespace {

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error("endpoint URL needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/v1/chat/completions"};
  return {url.substr(0, slash), url.substr(slash)};
}

std::string response_text(const std::string& body) {
  const json j = json::parse(body);
  const auto& content = j.at("choices").at(0).at("message").at("content");
  if (content.is_string()) return content.get<std::string>();
  std::string out;
  for (const auto& part : content)
    if (part.value("type", "") == "text") out += part.value("text", "");
  return out;
}

}  // namespace

std::string request_json(const EndpointConfig& config, const PromptPayload& payload) {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", payload.text}});
  for (const auto& img : payload.images_base64)
    content.push_back({{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + img}}}});
  const json req = {{"model", config.model},
                    {"temperature", 0},
                    {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
  return req.dump();
}

Transport http_transport(const EndpointConfig& config) {
  const ParsedUrl url = parse_url(config.url);
  return [url, config](const std::string& body) {
    httplib::Client cli(url.base);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
    cli.set_connection_timeout(secs.count(), usecs.count());
    cli.set_read_timeout(secs.count(), usecs.count());
    cli.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    if (!config.api_key.empty()) headers.emplace("Authorization", "Bearer " + config.api_key);
    auto res = cli.Post(url.path, headers, body, "application/json");
    if (!res) return TransportResult{0, "", httplib::to_string(res.error())};
    return TransportResult{res->status, res->body, ""};
  };
}

QueryResult query_model(const EndpointConfig& config, const PromptPayload& payload, const Transport& transport) {
  const std::string body = request_json(config, payload);
  QueryResult out;
  auto wait = config.backoff;
  for (int attempt = 0; attempt <= config.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(wait);
      wait *= 2;
    }
    ++out.attempts;
    const TransportResult r = transport(body);
    if (r.status == 200) {
      try {
        out.text = response_text(r.body);
        out.ok = true;
        out.error.clear();
      } catch (const std::exception& e) {
        out.error = std::string("malformed response: ") + e.what();
      }
      return out;
    }
    out.error = r.status == 0 ? "transport: " + r.error : "HTTP " + std::to_string(r.status);
    const bool transient = r.status == 0 || r.status == 429 || r.status >= 500;
    if (!transient) return out;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Records

std::string to_jsonl(const EvalRecord& r) {
  json j = {{"id", r.id},
            {"response", r.response},
            {"letter", r.letter ? json(std::string(1, *r.letter)) : json(nullptr)},
            {"correct", r.correct},
            {"latency_ms", r.latency_ms},
            {"endpoint", r.endpoint}};
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump() + "\n";
}

EvalRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  EvalRecord r;
  r.id = j.at("id");
  r.response = j.value("response", "");
  if (j.contains("letter") && j["letter"].is_string()) r.letter = j["letter"].get<std::string>().at(0);
  r.correct = j.value("correct", false);
  r.latency_ms = j.value("latency_ms", 0.0);
  r.endpoint = j.value("endpoint", "");
  r.error = j.value("error", "");
  return r;
}

std::vector<EvalRecord> read_records(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read " + file.string());
  std::vector<EvalRecord> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(record_from_json(line));
  return out;
}

std::vector<EvalRecord> evaluate(const std::filesystem::path& root, const EndpointConfig& config, PromptMode mode,
                                 const Transport& transport, int concurrency) {
  const Manifest m = read_manifest(root);
  std::vector<EvalRecord> records(m.entries.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink;
  auto worker = [&] {
    for (std::size_t i = next++; i < m.entries.size(); i = next++) {
      const auto& e = m.entries[i];
      EvalRecord r;
      r.id = e.id;
      r.endpoint = config.url;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const PuzzleInstance inst = read_instance(root / e.path);
        const QueryResult q = query_model(config, build_prompt(inst, mode), transport);
        r.response = q.text;
        r.error = q.error;
        if (q.ok) r.letter = extract_answer(q.text);
      } catch (const std::exception& ex) {
        r.error = ex.what();
      }
      r.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      r.correct = r.letter && *r.letter == e.answer;
      std::lock_guard<std::mutex> lock(sink);
      records[i] = std::move(r);
    }
  };
  std::vector<std::thread> pool;
  const int n = std::max(1, std::min<int>(concurrency, static_cast<int>(m.entries.size())));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return records;
}

// ---------------------------------------------------------------------------
// Scoring

ScoreCell ScoreTable::task(const std::string& code) const {
  ScoreCell sum;
  auto it = cells.find(code);
  if (it == cells.end()) return sum;
  for (const auto& [level, c] : it->second) {
    sum.correct += c.correct;
    sum.total += c.total;
    sum.extraction_failures += c.extraction_failures;
  }
  return sum;
}

namespace {

std::string pct(const ScoreCell& c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", c.accuracy());
  return buf;
}

int max_levels(const ScoreTable& t) {
  int n = 0;
  for (const auto& [code, levels] : t.cells)
    if (!levels.empty()) n = std::max(n, levels.rbegin()->first + 1);
  return n;
}

}  // namespace

std::string ScoreTable::to_markdown() const {
  const int levels = max_levels(*this);
  std::ostringstream out;
  out << "| Task |";
  for (int l = 0; l < levels; ++l) out << " L" << l << " |";
  out << " All | N | Extraction failures |\n|---|";
  for (int l = 0; l < levels; ++l) out << "---|";
  out << "---|---|---|\n";
  for (const auto& [code, by_level] : cells) {
    out << "| " << code << " |";
    for (int l = 0; l < levels; ++l) {
      auto it = by_level.find(l);
      out << " " << (it == by_level.end() ? "-" : pct(it->second)) << " |";
    }
    const ScoreCell t = task(code);
    out << " " << pct(t) << " | " << t.total << " | " << t.extraction_failures << " |\n";
  }
  out << "| Overall |";
  for (int l = 0; l < levels; ++l) out << " |";
  out << " " << pct(overall) << " | " << overall.total << " | " << overall.extraction_failures << " |\n";
  return out.str();
}

std::string ScoreTable::to_csv() const {
  std::ostringstream out;
  out << "task,level,correct,total,accuracy,extraction_failures\n";
  for (const auto& [code, by_level] : cells)
    for (const auto& [level, c] : by_level)
      out << code << "," << level << "," << c.correct << "," << c.total << "," << pct(c) << ","
          << c.extraction_failures << "\n";
  out << "overall,," << overall.correct << "," << overall.total << "," << pct(overall) << ","
      << overall.extraction_failures << "\n";
  return out.str();
}

ScoreTable score(const std::vector<EvalRecord>& records, const Manifest& manifest) {
  std::map<std::string, const ManifestEntry*> by_id;
  for (const auto& e : manifest.entries) by_id[e.id] = &e;
  ScoreTable t;
  for (const auto& r : records) {
    auto it = by_id.find(r.id);
    if (it == by_id.end()) throw Error("record " + r.id + " is not in the manifest");
    const ManifestEntry& e = *it->second;
    const bool correct = r.letter && *r.letter == e.answer;
    for (ScoreCell* c : {&t.cells[e.task][e.level], &t.overall}) {
      c->total += 1;
      c->correct += correct ? 1 : 0;
      c->extraction_failures += r.letter ? 0 : 1;
    }
  }
  return t;
}

ScoreTable random_baseline(const Manifest& manifest, int trials, Rng& rng) {
  if (trials < 1) throw Error("random_baseline: trials must be at least 1");
  ScoreTable t;
  for (int trial = 0; trial < trials; ++trial)
    for (const auto& e : manifest.entries) {
      const bool correct = static_cast<char>('A' + rng.uniform_int(0, 3)) == e.answer;
      for (ScoreCell* c : {&t.cells[e.task][e.level], &t.overall}) {
        c->total += 1;
        c->correct += correct ? 1 : 0;
      }
    }
  return t;
}

// ---------------------------------------------------------------------------
// Stub endpoint

std::string completion_json(const std::string& text) {
  const json j = {{"id", "stub"},
                  {"object", "chat.completion"},
                  {"choices", json::array({{{"index", 0},
                                            {"message", {{"role", "assistant"}, {"content", text}}},
                                            {"finish_reason", "stop"}}})}};
  return j.dump();
}

struct StubServer::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> requests{0};
};

StubServer::StubServer(Responder responder) : impl_(std::make_unique<Impl>()) {
  impl_->server.Post(".*", [this, responder](const httplib::Request& req, httplib::Response& res) {
    ++impl_->requests;
    const auto [status, text] = responder(req.body);
    res.status = status;
    if (status == 200) res.set_content(completion_json(text), "application/json");
    else res.set_content(text, "text/plain");
  });
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) throw Error("stub server could not bind a port");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

StubServer::~StubServer() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int StubServer::port() const { return impl_->port; }

std::string StubServer::url() const { return "http://127.0.0.1:" + std::to_string(impl_->port) + "/v1/chat/completions"; }

int StubServer::requests() const { return impl_->requests.load(); }

}  // namespace spatialviz
