#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spatialviz/dataset.hpp"

namespace spatialviz {

enum class PromptMode { Cot, Direct };
const char* to_string(PromptMode m);
PromptMode parse_prompt_mode(const std::string& s);

inline constexpr int kTransportWidth = 768;

struct PromptPayload {
  PromptMode mode = PromptMode::Cot;
  std::string text;
  std::vector<std::string> images_base64;  // PNG, references then options
};

/// Image options appear in the text as "<image N>", N counting attachments
/// from 1.
PromptPayload build_prompt(const PuzzleInstance& inst, PromptMode mode, int width_px = kTransportWidth);
/// Instruction and question text only; no rasterization.
std::string prompt_text(const PuzzleInstance& inst, PromptMode mode);

/// Tag capture, then the marker list in order (last occurrence, cut at the
/// first period), then a bare single-letter reply.
std::optional<char> extract_answer(const std::string& text);
const std::vector<std::string>& answer_markers();

struct EndpointConfig {
  std::string url;  // http(s)://host[:port]/path
  std::string model;
  std::string api_key;  // from MODEL_API_KEY
  std::chrono::milliseconds timeout{60000};
  int retries = 3;
  std::chrono::milliseconds backoff{500};  // doubles after each failure
};

struct TransportResult {
  int status = 0;  // 0 when the request never completed
  std::string body;
  std::string error;
};

using Transport = std::function<TransportResult(const std::string& request_body)>;

Transport http_transport(const EndpointConfig& config);
std::string request_json(const EndpointConfig& config, const PromptPayload& payload);

struct QueryResult {
  bool ok = false;
  std::string text;
  std::string error;
  int attempts = 0;
};

/// One chat request; transport failures, 429 and 5xx are retried with
/// exponential backoff.
QueryResult query_model(const EndpointConfig& config, const PromptPayload& payload, const Transport& transport);

struct EvalRecord {
  std::string id;
  std::string response;
  std::optional<char> letter;
  bool correct = false;
  double latency_ms = 0;
  std::string endpoint;
  std::string error;  // transport failure, empty otherwise
};

std::string to_jsonl(const EvalRecord& r);
EvalRecord record_from_json(const std::string& line);
std::vector<EvalRecord> read_records(const std::filesystem::path& file);

/// Runs every manifest instance through the endpoint with at most
/// `concurrency` requests in flight. Records come back in manifest order.
std::vector<EvalRecord> evaluate(const std::filesystem::path& root, const EndpointConfig& config, PromptMode mode,
                                 const Transport& transport, int concurrency = 4);

struct ScoreCell {
  int correct = 0;
  int total = 0;
  int extraction_failures = 0;
  double accuracy() const { return total ? 100.0 * correct / total : 0.0; }
};

struct ScoreTable {
  std::map<std::string, std::map<int, ScoreCell>> cells;  // task code -> level
  ScoreCell overall;
  ScoreCell task(const std::string& code) const;
  std::string to_markdown() const;
  std::string to_csv() const;
};

/// Correctness is recomputed from the letters against the manifest. Throws
/// when a record's id is not in the manifest.
ScoreTable score(const std::vector<EvalRecord>& records, const Manifest& manifest);
ScoreTable random_baseline(const Manifest& manifest, int trials, Rng& rng);

/// Local chat endpoint for offline runs. The responder maps a request body to
/// (status, reply text); replies are wrapped as chat completions.
class StubServer {
 public:
  using Responder = std::function<std::pair<int, std::string>(const std::string& body)>;
  explicit StubServer(Responder responder);
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;
  int port() const;
  std::string url() const;
  int requests() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Chat-completion response body carrying one assistant message.
std::string completion_json(const std::string& text);

}  // namespace spatialviz
