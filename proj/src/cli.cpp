#include "spatialviz/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "spatialviz/dataset.hpp"
#include "spatialviz/eval.hpp"

namespace spatialviz {

namespace fs = std::filesystem;

namespace {

struct UsageError : Error {
  using Error::Error;
};

int default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

void require_dataset(const fs::path& root) {
  if (!fs::exists(root / "manifest.json")) throw UsageError("no dataset at " + root.string() + " (manifest.json missing)");
}

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw UsageError("cannot write " + file.string());
  out << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Procedural spatial visualization puzzle generator and evaluation harness", "spatialviz"};
  app.require_subcommand(1);
  int jobs = default_jobs();

  auto* gen = app.add_subcommand("generate", "Generate instances of one task (or all tasks)");
  std::string task_name;
  std::vector<int> levels;
  int count = 4;
  std::uint64_t seed = 0;
  std::string out_dir;
  gen->add_option("--task", task_name, "Task code or name, e.g. 2DR or paper_folding (default: all)");
  gen->add_option("--level", levels, "Level(s) to generate (default: all)");
  gen->add_option("--count", count, "Instances per task and level")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Generation seed")->required();
  gen->add_option("--out", out_dir, "Output directory")->required();
  gen->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* suite = app.add_subcommand("generate-suite", "Generate the full 1,100-instance suite");
  double fraction = 1.0;
  suite->add_option("--seed", seed, "Generation seed")->required();
  suite->add_option("--out", out_dir, "Output directory")->required();
  suite->add_option("--fraction", fraction, "Scale every task count by this factor")->check(CLI::Range(0.0, 1.0));
  suite->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string in_dir;
  auto* verify = app.add_subcommand("verify", "Regenerate and run every oracle; exit 1 on any violation");
  verify->add_option("--in", in_dir, "Dataset directory")->required();
  verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "Answer-letter, modality and count statistics");
  stats->add_option("--in", in_dir, "Dataset directory")->required();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Query a chat endpoint on every instance");
  std::string endpoint, model, mode_name = "cot", records_file;
  int concurrency = 4, timeout_ms = 60000, backoff_ms = 500;
  evaluate_cmd->add_option("--in", in_dir, "Dataset directory")->required();
  evaluate_cmd->add_option("--endpoint", endpoint, "Chat-completions URL")->required();
  evaluate_cmd->add_option("--model", model, "Model name sent with each request")->required();
  evaluate_cmd->add_option("--mode", mode_name, "Prompt mode")->check(CLI::IsMember({"cot", "direct"}));
  evaluate_cmd->add_option("--out", records_file, "JSON-lines record file")->required();
  evaluate_cmd->add_option("--concurrency", concurrency, "Requests in flight")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--timeout-ms", timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--backoff-ms", backoff_ms, "First retry delay")->check(CLI::NonNegativeNumber);

  auto* score_cmd = app.add_subcommand("score", "Score a record file against a dataset");
  bool csv = false;
  score_cmd->add_option("--records", records_file, "JSON-lines record file")->required();
  score_cmd->add_option("--in", in_dir, "Dataset directory")->required();
  score_cmd->add_flag("--csv", csv, "Print CSV instead of markdown");

  auto* baseline = app.add_subcommand("baseline", "Uniform random guessing baseline");
  int trials = 10000;
  baseline->add_option("--in", in_dir, "Dataset directory")->required();
  baseline->add_option("--trials", trials, "Guessing rounds")->check(CLI::PositiveNumber);
  baseline->add_option("--seed", seed, "Guessing seed");

  auto* tables = app.add_subcommand("tables", "Write the pattern library and level table as JSON");
  tables->add_option("--out", out_dir, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      std::vector<PuzzleInstance> all;
      std::vector<TaskInfo> tasks;
      if (task_name.empty()) tasks = all_tasks();
      else {
        try {
          tasks = {task_info(parse_task(task_name))};
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
      }
      for (const auto& t : tasks) {
        std::vector<int> want = levels;
        if (want.empty())
          for (int l = 0; l < t.levels; ++l) want.push_back(l);
        for (int l : want) {
          if (l < 0 || l >= t.levels)
            throw UsageError(std::string(t.code) + " has levels 0.." + std::to_string(t.levels - 1));
          auto batch = generate_batch(t.id, l, count, seed, jobs);
          std::move(batch.begin(), batch.end(), std::back_inserter(all));
        }
      }
      const Manifest m = write_dataset(all, out_dir, seed);
      out << "wrote " << m.total() << " instances to " << out_dir << "\n";
    } else if (tables->parsed()) {
      write_text(fs::path(out_dir) / "patterns.json", pattern_library_json());
      write_text(fs::path(out_dir) / "levels.json", level_table_json());
      out << "wrote patterns.json and levels.json to " << out_dir << "\n";
    } else if (suite->parsed()) {
      const Manifest m = write_dataset(generate_suite(seed, jobs, fraction), out_dir, seed);
      out << "wrote " << m.total() << " instances to " << out_dir << "\n";
      for (const auto& [task, by_level] : m.counts) {
        int n = 0;
        for (const auto& [level, c] : by_level) n += c;
        out << "  " << task << " " << n << "\n";
      }
    } else if (verify->parsed()) {
      require_dataset(in_dir);
      const VerifyReport r = verify_dataset(in_dir, jobs);
      for (const auto& v : r.violations) out << "VIOLATION " << v << "\n";
      out << "checked " << r.checked << " instances, " << r.violations.size() << " violations\n";
      return r.ok() ? kExitOk : kExitViolation;
    } else if (stats->parsed()) {
      require_dataset(in_dir);
      out << dataset_stats(read_manifest(in_dir), in_dir).to_text();
    } else if (evaluate_cmd->parsed()) {
      require_dataset(in_dir);
      EndpointConfig cfg;
      cfg.url = endpoint;
      cfg.model = model;
      if (const char* key = std::getenv("MODEL_API_KEY")) cfg.api_key = key;
      cfg.timeout = std::chrono::milliseconds(timeout_ms);
      cfg.backoff = std::chrono::milliseconds(backoff_ms);
      const auto records = evaluate(in_dir, cfg, parse_prompt_mode(mode_name), http_transport(cfg), concurrency);
      std::string lines;
      for (const auto& r : records) lines += to_jsonl(r);
      write_text(records_file, lines);
      int failures = 0;
      for (const auto& r : records) failures += r.error.empty() ? 0 : 1;
      out << "wrote " << records.size() << " records to " << records_file << " (" << failures
          << " transport failures)\n";
      out << score(records, read_manifest(in_dir)).to_markdown();
    } else if (score_cmd->parsed()) {
      require_dataset(in_dir);
      if (!fs::exists(records_file)) throw UsageError("cannot read " + records_file);
      const ScoreTable t = score(read_records(records_file), read_manifest(in_dir));
      out << (csv ? t.to_csv() : t.to_markdown());
    } else if (baseline->parsed()) {
      require_dataset(in_dir);
      Rng rng(seed);
      out << random_baseline(read_manifest(in_dir), trials, rng).to_markdown();
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

}  // namespace spatialviz
