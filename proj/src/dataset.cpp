#include "spatialviz/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <tuple>
#include <sstream>
#include <thread>

namespace spatialviz {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

Document normalize(const Document& d) { return parse_svg(to_svg(d)); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes unless identical bytes are already there; differing bytes throw.
void write_once(const fs::path& p, const std::string& bytes) {
  if (fs::exists(p)) {
    if (read_file(p) == bytes) return;
    throw Error("refusing to overwrite " + p.string() + " with different content");
  }
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << bytes;
  if (!out) throw Error("cannot write " + p.string());
}

void write_always(const fs::path& p, const std::string& bytes) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << bytes;
  if (!out) throw Error("cannot write " + p.string());
}

std::string reference_path(std::size_t i) { return "images/reference_" + std::to_string(i) + ".svg"; }

std::string option_path(std::size_t i) {
  return std::string("images/option_") + static_cast<char>('a' + i) + ".svg";
}

OptionKind kind_from(const std::string& s) {
  for (OptionKind k : {OptionKind::Image, OptionKind::Text, OptionKind::Number})
    if (s == to_string(k)) return k;
  throw Error("unknown option kind " + s);
}

Option none_option(bool correct) {
  Option o;
  o.kind = OptionKind::Text;
  o.text = kNoneText;
  o.tag = kNoneTag;
  o.explanation = correct ? "None of the other options is correct." : "One of the other options is correct.";
  return o;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first error.
template <typename F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Job {
  TaskId task;
  int level;
  int index;
  std::uint64_t seed;
};

PuzzleInstance run_job(const Job& j) {
  PuzzleInstance inst = generate_instance(j.task, j.level, j.seed);
  inst.id = instance_id(j.task, j.level, j.index);
  return inst;
}

std::uint64_t job_seed(std::uint64_t suite_seed, TaskId task, int level, int index) {
  return derive_seed(suite_seed, task_info(task).code, level, index);
}

}  // namespace

PuzzleInstance assemble_instance(std::string question, std::vector<Document> references, Option positive,
                                 std::vector<Option> distractors, NoneMode mode, Rng& rng,
                                 const std::vector<int>* permutation) {
  std::vector<Option> candidates;
  switch (mode) {
    case NoneMode::Off:
      if (distractors.size() < 3) throw Error("assemble_instance: need three distractors");
      candidates = {std::move(positive), distractors[0], distractors[1], distractors[2]};
      break;
    case NoneMode::WithPositive:
      if (distractors.size() < 2) throw Error("assemble_instance: need two distractors");
      candidates = {std::move(positive), distractors[0], distractors[1]};
      break;
    case NoneMode::NoneCorrect:
      if (distractors.size() < 3) throw Error("assemble_instance: need three distractors");
      candidates = {distractors[0], distractors[1], distractors[2]};
      break;
  }
  std::vector<int> slots(candidates.size());
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(i);
  if (permutation) {
    slots = *permutation;
    std::vector<int> sorted = slots;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted.size() != candidates.size() || sorted[i] != static_cast<int>(i))
        throw Error("assemble_instance: permutation does not match the candidates");
  } else {
    rng.shuffle(slots);
  }

  PuzzleInstance inst;
  inst.question = std::move(question);
  for (auto& r : references) inst.references.push_back(normalize(r));
  inst.options.resize(4);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    Option o = std::move(candidates[i]);
    if (o.kind == OptionKind::Image) o.image = normalize(o.image);
    inst.options[static_cast<std::size_t>(slots[i])] = std::move(o);
  }
  if (mode == NoneMode::Off || mode == NoneMode::WithPositive) {
    inst.answer = slots[0];
  } else {
    inst.answer = 3;
  }
  if (mode != NoneMode::Off) inst.options[3] = none_option(mode == NoneMode::NoneCorrect);
  return inst;
}

std::string instance_dir(const PuzzleInstance& inst) {
  return std::string(task_info(inst.task).code) + "/" + std::to_string(inst.level) + "/" + inst.id;
}

std::string question_json(const PuzzleInstance& inst) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = inst.id;
  j["task"] = task_info(inst.task).code;
  j["task_name"] = task_info(inst.task).title;
  j["level"] = inst.level;
  j["question"] = inst.question;
  ordered_json refs = ordered_json::array();
  for (std::size_t i = 0; i < inst.references.size(); ++i) refs.push_back(reference_path(i));
  j["references"] = refs;
  ordered_json options = ordered_json::array();
  ordered_json explanation = ordered_json::array();
  ordered_json models = ordered_json::array();
  for (std::size_t i = 0; i < inst.options.size(); ++i) {
    const auto& o = inst.options[i];
    const std::string letter(1, static_cast<char>('A' + i));
    ordered_json oj = {{"letter", letter}, {"kind", to_string(o.kind)}};
    switch (o.kind) {
      case OptionKind::Image: oj["image"] = option_path(i); break;
      case OptionKind::Text: oj["text"] = o.text; break;
      case OptionKind::Number: oj["number"] = o.number; break;
    }
    options.push_back(oj);
    explanation.push_back({{"letter", letter}, {"tag", o.tag}, {"text", o.explanation}});
    models.push_back(ordered_json::parse(o.model.dump()));
  }
  j["options"] = options;
  j["answer"] = std::string(1, inst.answer_letter());
  j["explanation"] = explanation;
  j["seed"] = inst.seed;
  j["generator_version"] = inst.version;
  j["oracle"] = {{"task", ordered_json::parse(inst.model.dump())}, {"options", models}};
  return j.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> instance_files(const PuzzleInstance& inst) {
  std::vector<std::pair<std::string, std::string>> files;
  for (std::size_t i = 0; i < inst.references.size(); ++i) files.emplace_back(reference_path(i), to_svg(inst.references[i]));
  for (std::size_t i = 0; i < inst.options.size(); ++i)
    if (inst.options[i].kind == OptionKind::Image) files.emplace_back(option_path(i), to_svg(inst.options[i].image));
  files.emplace_back("question.json", question_json(inst));
  return files;
}

std::string manifest_json(const Manifest& m) {
  ordered_json j;
  j["version"] = m.version;
  j["seed"] = m.seed;
  ordered_json counts = ordered_json::object();
  for (const auto& [task, levels] : m.counts)
    for (const auto& [level, n] : levels) counts[task][std::to_string(level)] = n;
  j["counts"] = counts;
  j["total"] = m.total();
  ordered_json entries = ordered_json::array();
  for (const auto& e : m.entries)
    entries.push_back({{"id", e.id}, {"task", e.task}, {"level", e.level}, {"path", e.path}, {"seed", e.seed},
                       {"answer", std::string(1, e.answer)}});
  j["instances"] = entries;
  return j.dump(2) + "\n";
}

Manifest write_dataset(const std::vector<PuzzleInstance>& instances, const fs::path& root, std::uint64_t seed) {
  Manifest m;
  m.seed = seed;
  std::vector<const PuzzleInstance*> sorted;
  for (const auto& inst : instances) sorted.push_back(&inst);
  std::sort(sorted.begin(), sorted.end(), [](const PuzzleInstance* a, const PuzzleInstance* b) {
    return std::make_tuple(static_cast<int>(a->task), a->level, a->id) <
           std::make_tuple(static_cast<int>(b->task), b->level, b->id);
  });
  std::set<std::string> seen;
  for (const auto* inst : sorted) {
    const std::string dir = instance_dir(*inst);
    if (!seen.insert(dir).second) throw Error("duplicate instance id " + inst->id);
    for (const auto& [name, bytes] : instance_files(*inst)) write_once(root / dir / name, bytes);
    m.counts[task_info(inst->task).code][inst->level] += 1;
    m.entries.push_back({inst->id, task_info(inst->task).code, inst->level, dir, inst->seed, inst->answer_letter()});
  }
  write_always(root / "manifest.json", manifest_json(m));
  return m;
}

PuzzleInstance read_instance(const fs::path& dir) {
  const json j = json::parse(read_file(dir / "question.json"));
  if (j.at("schema_version").get<int>() != kSchemaVersion) throw Error("unsupported schema version in " + dir.string());
  PuzzleInstance inst;
  inst.id = j.at("id");
  inst.task = parse_task(j.at("task"));
  inst.level = j.at("level");
  inst.question = j.at("question");
  for (const auto& r : j.at("references")) inst.references.push_back(parse_svg(read_file(dir / r.get<std::string>())));
  const auto& options = j.at("options");
  const auto& explanation = j.at("explanation");
  const auto& models = j.at("oracle").at("options");
  if (options.size() != 4 || explanation.size() != 4 || models.size() != 4)
    throw Error("instance " + inst.id + " does not have four options");
  for (std::size_t i = 0; i < 4; ++i) {
    Option o;
    o.kind = kind_from(options[i].at("kind"));
    switch (o.kind) {
      case OptionKind::Image: o.image = parse_svg(read_file(dir / options[i].at("image").get<std::string>())); break;
      case OptionKind::Text: o.text = options[i].at("text"); break;
      case OptionKind::Number:
        o.number = options[i].at("number");
        o.text = std::to_string(o.number);
        break;
    }
    o.tag = explanation[i].at("tag");
    o.explanation = explanation[i].at("text");
    o.model = models[i];
    inst.options.push_back(std::move(o));
  }
  const std::string answer = j.at("answer");
  if (answer.size() != 1 || answer[0] < 'A' || answer[0] > 'D') throw Error("bad answer letter in " + inst.id);
  inst.answer = answer[0] - 'A';
  inst.seed = j.at("seed");
  inst.version = j.at("generator_version");
  inst.model = j.at("oracle").at("task");
  return inst;
}

Manifest read_manifest(const fs::path& root) {
  const json j = json::parse(read_file(root / "manifest.json"));
  Manifest m;
  m.version = j.at("version");
  m.seed = j.at("seed");
  for (const auto& [task, levels] : j.at("counts").items())
    for (const auto& [level, n] : levels.items()) m.counts[task][std::stoi(level)] = n.get<int>();
  for (const auto& e : j.at("instances"))
    m.entries.push_back({e.at("id"), e.at("task"), e.at("level"), e.at("path"), e.at("seed"),
                         e.at("answer").get<std::string>().at(0)});
  return m;
}

std::map<std::string, std::map<int, int>> recount(const fs::path& root) {
  std::map<std::string, std::map<int, int>> counts;
  if (!fs::exists(root)) return counts;
  for (const auto& task : fs::directory_iterator(root)) {
    if (!task.is_directory()) continue;
    for (const auto& level : fs::directory_iterator(task.path())) {
      if (!level.is_directory()) continue;
      for (const auto& inst : fs::directory_iterator(level.path()))
        if (fs::exists(inst.path() / "question.json"))
          counts[task.path().filename().string()][std::stoi(level.path().filename().string())] += 1;
    }
  }
  return counts;
}

std::string DatasetStats::to_text() const {
  std::ostringstream out;
  char buf[128];
  out << "instances: " << total << "\n";
  out << "answer letters:\n";
  for (std::size_t i = 0; i < 4; ++i) {
    const double pct = total ? 100.0 * letters[i] / total : 0.0;
    std::snprintf(buf, sizeof buf, "  %c  %5d  %5.1f%%\n", static_cast<char>('A' + i), letters[i], pct);
    out << buf;
  }
  out << "option modality:\n";
  for (const auto& [kind, n] : modality) out << "  " << kind << "  " << n << "\n";
  out << "per task and level:\n";
  for (const auto& [task, levels] : counts) {
    int sum = 0;
    out << "  " << task << ":";
    for (const auto& [level, n] : levels) {
      out << " L" << level << "=" << n;
      sum += n;
    }
    out << " total=" << sum << "\n";
  }
  return out.str();
}

DatasetStats dataset_stats(const Manifest& m, const fs::path& root) {
  DatasetStats s;
  s.counts = m.counts;
  s.total = m.total();
  for (const auto& e : m.entries) {
    s.letters[static_cast<std::size_t>(e.answer - 'A')] += 1;
    const json j = json::parse(read_file(root / e.path / "question.json"));
    for (const auto& o : j.at("options")) s.modality[o.at("kind").get<std::string>()] += 1;
  }
  return s;
}

std::vector<PuzzleInstance> generate_batch(TaskId task, int level, int count, std::uint64_t seed, int jobs) {
  std::vector<Job> work;
  for (int i = 0; i < count; ++i) work.push_back({task, level, i, job_seed(seed, task, level, i)});
  std::vector<PuzzleInstance> out(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t i) { out[i] = run_job(work[i]); });
  return out;
}

std::vector<PuzzleInstance> generate_suite(std::uint64_t seed, int jobs, double fraction) {
  std::vector<Job> work;
  for (const auto& t : all_tasks()) {
    const int total = static_cast<int>(std::lround(t.suite_count * fraction));
    for (int level = 0; level < t.levels; ++level) {
      const int n = total / t.levels + (level < total % t.levels ? 1 : 0);
      for (int i = 0; i < n; ++i) work.push_back({t.id, level, i, job_seed(seed, t.id, level, i)});
    }
  }
  std::vector<PuzzleInstance> out(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t i) { out[i] = run_job(work[i]); });
  return out;
}

VerifyReport verify_dataset(const fs::path& root, int jobs) {
  VerifyReport report;
  const Manifest m = read_manifest(root);
  if (recount(root) != m.counts) report.violations.push_back("manifest counts differ from the files on disk");
  std::vector<std::vector<std::string>> found(m.entries.size());
  parallel_for(m.entries.size(), jobs, [&](std::size_t i) {
    const auto& e = m.entries[i];
    auto& errs = found[i];
    try {
      const fs::path dir = root / e.path;
      const PuzzleInstance disk = read_instance(dir);
      if (disk.answer_letter() != e.answer) errs.push_back(e.id + ": answer differs from the manifest");
      PuzzleInstance fresh = generate_instance(parse_task(e.task), e.level, e.seed);
      fresh.id = e.id;
      if (!fs::exists(dir / "question.json") || read_file(dir / "question.json") != question_json(fresh))
        errs.push_back(e.id + ": question.json does not match its regeneration");
      for (const auto& [name, bytes] : instance_files(fresh))
        if (!fs::exists(dir / name) || read_file(dir / name) != bytes)
          errs.push_back(e.id + ": " + name + " does not match its regeneration");
      for (auto& v : check_instance(disk)) errs.push_back(std::move(v));
    } catch (const std::exception& ex) {
      errs.push_back(e.id + ": " + ex.what());
    }
  });
  for (auto& errs : found) {
    ++report.checked;
    for (auto& v : errs) report.violations.push_back(std::move(v));
  }
  return report;
}

}  // namespace spatialviz
