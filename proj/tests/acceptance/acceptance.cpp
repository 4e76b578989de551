// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--work DIR] [--only N]... [--tolerate N]...
//
// Tolerated criteria are still evaluated and printed; they only stop a FAIL
// from turning into a non-zero exit status.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "spatialviz/cli.hpp"
#include "spatialviz/eval.hpp"
#include "spatialviz/raster.hpp"

using namespace spatialviz;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (code != kExitOk) std::cerr << "  spatialviz " << args.front() << " exited " << code << ": " << err.str();
  return code;
}

const std::map<std::string, int> kSuiteCounts = {{"2DR", 80}, {"3DR", 80}, {"3VP", 100}, {"PF", 120},
                                                 {"CU", 120}, {"CR", 120}, {"CS", 120},  {"CC", 120},
                                                 {"CA", 80},  {"AM", 80},  {"BM", 80}};
constexpr std::uint64_t kSuiteSeed = 2024;

struct Context {
  fs::path work;
  std::optional<Manifest> suite;
  double suite_seconds = 0;

  const Manifest& full_suite() {
    if (suite) return *suite;
    const fs::path dir = work / "suite";
    fs::remove_all(dir);
    const auto t0 = std::chrono::steady_clock::now();
    if (cli({"generate-suite", "--seed", std::to_string(kSuiteSeed), "--out", dir.string(), "--jobs", "1"}) != 0)
      throw Error("generate-suite failed");
    suite_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    suite = read_manifest(dir);
    return *suite;
  }
};

// ---------------------------------------------------------------------------

Outcome suite_scale(Context& ctx) {
  const Manifest& m = ctx.full_suite();
  std::map<std::string, int> per_task;
  for (const auto& [code, levels] : recount(ctx.work / "suite"))
    for (const auto& [level, n] : levels) per_task[code] += n;
  Outcome o;
  o.pass = per_task == kSuiteCounts && m.total() == 1100 && ctx.suite_seconds < 600;
  std::string counts;
  for (const auto& [code, n] : per_task) counts += (counts.empty() ? "" : " ") + code + "=" + std::to_string(n);
  o.detail = std::to_string(m.total()) + " instances in " + fmt("%.1f", ctx.suite_seconds) +
             " s single-threaded (limit 600 s)";
  o.notes.push_back(counts);
  return o;
}

Outcome oracle_soundness(Context& ctx) {
  const fs::path dir = ctx.work / "half";
  fs::remove_all(dir);
  if (cli({"generate-suite", "--seed", "7", "--fraction", "0.5", "--out", dir.string()}) != 0)
    return {false, "generate-suite failed", {}};
  const VerifyReport r = verify_dataset(dir, static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  Outcome o;
  o.pass = r.checked == 550 && r.ok();
  o.detail = std::to_string(r.checked) + " instances verified, " + std::to_string(r.violations.size()) + " violations";
  for (std::size_t i = 0; i < r.violations.size() && i < 5; ++i) o.notes.push_back(r.violations[i]);
  return o;
}

// Every gravity-consistent stack in 3x3x3 is a height map h[x][y] in 0..3.
Outcome count_bounds_exactness(Context&) {
  constexpr int N = 3;
  struct Range {
    int lo = 1 << 30, hi = -1;
    void add(int v) { lo = std::min(lo, v), hi = std::max(hi, v); }
  };
  using Heights = std::array<int, N * N>;  // index x * N + y
  auto sig2 = [](const Heights& h) {
    std::string s;
    for (int x = 0; x < N; ++x) {
      int f = 0;
      for (int y = 0; y < N; ++y) f = std::max(f, h[x * N + y]);
      s += char('0' + f);
    }
    for (int i = 0; i < N * N; ++i) s += h[i] ? '1' : '0';
    return s;
  };
  auto sig3 = [&](const Heights& h) {
    std::string s = sig2(h);
    for (int y = 0; y < N; ++y) {
      int l = 0;
      for (int x = 0; x < N; ++x) l = std::max(l, h[x * N + y]);
      s += char('0' + l);
    }
    return s;
  };
  auto connected = [](const Heights& h) {
    std::vector<Cell> cells;
    for (int x = 0; x < N; ++x)
      for (int y = 0; y < N; ++y)
        for (int z = 0; z < h[x * N + y]; ++z) cells.push_back({x, y, z});
    return !cells.empty() && is_connected6(cells);
  };

  std::vector<Heights> all;
  for (int code = 1; code < 1 << (2 * N * N); ++code) {
    Heights h{};
    for (int i = 0; i < N * N; ++i) h[i] = (code >> (2 * i)) & 3;
    all.push_back(h);
  }
  std::map<std::string, Range> brute2, brute3, brute3c;
  for (const auto& h : all) {
    int n = 0;
    for (int v : h) n += v;
    brute2[sig2(h)].add(n);
    brute3[sig3(h)].add(n);
    if (connected(h)) brute3c[sig3(h)].add(n);
  }

  long bad2 = 0, bad3 = 0, gaps = 0;
  std::string example;
  for (const auto& h : all) {
    std::vector<Cell> cells;
    for (int x = 0; x < N; ++x)
      for (int y = 0; y < N; ++y)
        for (int z = 0; z < h[x * N + y]; ++z) cells.push_back({x, y, z});
    const auto g = OccupancyGrid::from_cells({N, N, N}, cells);
    const auto f = project_silhouette(g, View::Front);
    const auto t = project_silhouette(g, View::Top);
    const auto l = project_silhouette(g, View::Left);
    const auto b2 = count_bounds(f, t);
    const auto b3 = count_bounds(f, t, &l);
    const Range& r2 = brute2[sig2(h)];
    const Range& r3 = brute3[sig3(h)];
    if (b2.min_count != r2.lo || b2.max_count != r2.hi) ++bad2;
    if (b3.min_count != r3.lo || b3.max_count != r3.hi) {
      if (bad3++ == 0) {
        example = "heights";
        for (int v : h) example += " " + std::to_string(v);
        example += ": formula " + std::to_string(b3.min_count) + ".." + std::to_string(b3.max_count) + ", brute force " +
                   std::to_string(r3.lo) + ".." + std::to_string(r3.hi);
      }
    }
    auto c = brute3c.find(sig3(h));
    if (c != brute3c.end() && (c->second.lo != r3.lo || c->second.hi != r3.hi)) ++gaps;
  }
  Outcome o;
  o.pass = bad2 == 0 && bad3 == 0;
  o.detail = std::to_string(all.size()) + " stacks: 2-view mismatches " + std::to_string(bad2) +
             ", 3-view mismatches " + std::to_string(bad3);
  if (!example.empty()) o.notes.push_back("first 3-view counterexample, " + example);
  o.notes.push_back("view sets whose range shrinks when only 6-connected stacks are allowed: " + std::to_string(gaps) +
                    " stacks affected");
  return o;
}

Outcome paper_roundtrip(Context&) {
  Rng rng(404);
  int ok = 0, total = 1000;
  for (int i = 0; i < total; ++i) {
    const int rows = rng.uniform_int(3, 6), cols = rng.uniform_int(3, 6);
    PaperState s(rows, cols);
    for (const auto& f : random_folds(rows, cols, rng.uniform_int(1, 3), rng)) s = paper_fold(s, f);
    auto vis = s.visible_cells();
    rng.shuffle(vis);
    const int punches = std::min<int>(rng.uniform_int(1, 3), static_cast<int>(vis.size()));
    std::vector<Cell2> rel;
    for (int k = 0; k < punches; ++k) rel.push_back({vis[k].row - s.current().row, vis[k].col - s.current().col});
    s = paper_punch(s, rel);
    const HoleGrid holes = paper_unfold(s);

    // Carry every sheet cell through the folds; it is a hole iff it lands on a punch.
    std::set<Cell2> punched(s.punches().begin(), s.punches().end());
    bool same = refold_matches(s, holes);
    for (int r = 0; r < rows && same; ++r)
      for (int c = 0; c < cols && same; ++c) {
        Cell2 p{r, c};
        for (const auto& f : s.folds())
          if (std::find(f.folded.begin(), f.folded.end(), p) != f.folded.end()) p = PaperState::reflect(f, p);
        same = holes.at(r, c) == (punched.count(p) > 0);
      }
    ok += same ? 1 : 0;
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " instances refold to the punched layer", {}};
}

FaceMap random_facemap(Rng& rng) {
  FaceMap f{};
  const int mode = rng.uniform_int(0, 2);
  for (int i = 0; i < 6; ++i) {
    if (mode == 0) {
      f[i] = {rng.uniform_int(1, kPaletteSize - 1), 0};
    } else if (mode == 1) {
      f[i] = {kGlyphBase + rng.uniform_int(0, 2 * kGlyphCount - 1), rng.uniform_int(0, 3)};
    } else {
      std::array<int, 9> dots{};
      for (auto& d : dots) d = kDotColors[static_cast<std::size_t>(rng.uniform_int(0, 3))];
      f[i] = rotated(make_dot_cell(dots), rng.uniform_int(0, 3));
    }
  }
  return f;
}

Outcome net_universality(Context&) {
  Rng rng(505);
  int ok = 0, total = 0, frames_ok = 0;
  for (const auto& name : net_names()) {
    const auto frames = fold_frames(canonical_net(name));
    bool good = true;
    for (Face f : kFaces) good &= frames[static_cast<int>(f)].normal == face_normal(f);
    frames_ok += good ? 1 : 0;
    for (int i = 0; i < 200; ++i) {
      const FaceMap faces = random_facemap(rng);
      const CubeModel pivot = fold_net(canonical_net(kPivotNet), faces);
      const NetLayout layout = equivalent_net(name, faces);
      // A random whole-cube rotation must not change equivalence.
      const auto& rot = cube_rotations()[static_cast<std::size_t>(rng.uniform_int(0, 23))];
      const bool same = cubes_equivalent(fold_net(layout, faces), pivot) &&
                        cubes_equivalent(rotate_cube(fold_net(layout, faces), rot), pivot);
      ok += same ? 1 : 0;
      ++total;
    }
  }
  Outcome o;
  o.pass = ok == total && frames_ok == 11 && net_names().size() == 11;
  o.detail = std::to_string(frames_ok) + "/11 nets fold onto distinct faces, " + std::to_string(ok) + "/" +
             std::to_string(total) + " face maps re-fold to the pivot cube";
  return o;
}

Outcome simulator_conservation(Context&) {
  Rng rng(606);
  int arrows_ok = 0, blocks_ok = 0, settle_ok = 0;
  const int total = 1000;
  for (int i = 0; i < total; ++i) {
    auto start = random_arrow_map(4, 4, {1, 2, 3, 4}, rng);
    while (std::none_of(start.cells.begin(), start.cells.end(), [](const auto& c) { return c.has_value(); }))
      start = random_arrow_map(4, 4, {1, 2, 3, 4}, rng);
    std::multiset<int> colors;
    for (const auto& c : start.cells)
      if (c) colors.insert(c->color);
    const auto t = generate_sequence(start, rng.uniform_int(1, 4), std::nullopt, rng);
    bool good = true;
    for (const auto& s : t.states) {
      std::multiset<int> now;
      for (const auto& c : s.cells)
        if (c) now.insert(c->color);
      good &= now == colors;
    }
    arrows_ok += good ? 1 : 0;
  }
  for (int i = 0; i < total; ++i) {
    auto start = random_block_world({3, 3, 3}, {1, 2, 3, 4, 5, 6}, rng);
    while (valid_block_moves(start).empty()) start = random_block_world({3, 3, 3}, {1, 2, 3, 4, 5, 6}, rng);
    std::multiset<int> colors;
    for (const auto& c : start.scene) colors.insert(c.color);
    const auto t = generate_sequence(start, rng.uniform_int(1, 4), std::nullopt, rng);
    bool good = true;
    for (const auto& s : t.states) {
      std::multiset<int> now;
      for (const auto& c : s.scene) now.insert(c.color);
      good &= now == colors && is_supported(s.scene) && settle(s.scene) == s.scene;
    }
    blocks_ok += good ? 1 : 0;

    // Unsettled random scenes: settle must be a fixed point on its own output.
    BlockScene loose;
    std::set<Cell> used;
    for (int k = 0; k < 6; ++k) {
      Cell p{rng.uniform_int(0, 2), rng.uniform_int(0, 2), rng.uniform_int(0, 2)};
      if (used.insert(p).second) loose.push_back({p, rng.uniform_int(1, 6)});
    }
    const auto once = settle(loose);
    settle_ok += settle(once) == once && is_supported(once) ? 1 : 0;
  }
  Outcome o;
  o.pass = arrows_ok == total && blocks_ok == total && settle_ok == total;
  o.detail = "arrow maps " + std::to_string(arrows_ok) + "/" + std::to_string(total) + ", blocks " +
             std::to_string(blocks_ok) + "/" + std::to_string(total) + ", settle fixed point " +
             std::to_string(settle_ok) + "/" + std::to_string(total);
  return o;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  return out;
}

Outcome determinism(Context& ctx) {
  const fs::path a = ctx.work / "det-a", b = ctx.work / "det-b";
  fs::remove_all(a);
  fs::remove_all(b);
  if (cli({"generate", "--seed", "42", "--count", "2", "--out", a.string(), "--jobs", "1"}) != 0 ||
      cli({"generate", "--seed", "42", "--count", "2", "--out", b.string()}) != 0)
    return {false, "generate failed", {}};
  const auto ta = tree(a), tb = tree(b);
  int pngs = 0, png_same = 0;
  const Manifest m = read_manifest(a);
  for (const auto& e : m.entries) {
    const auto inst = read_instance(a / e.path);
    std::vector<const Document*> docs;
    for (const auto& r : inst.references) docs.push_back(&r);
    for (const auto& o : inst.options)
      if (o.kind == OptionKind::Image) docs.push_back(&o.image);
    for (const auto* d : docs) {
      ++pngs;
      png_same += encode_png(rasterize(*d, 256)) == encode_png(rasterize(*d, 256)) ? 1 : 0;
    }
  }
  Outcome o;
  o.pass = !ta.empty() && ta == tb && pngs > 0 && pngs == png_same;
  o.detail = std::to_string(ta.size()) + " files " + (ta == tb ? "identical" : "DIFFER") + " across runs, " +
             std::to_string(png_same) + "/" + std::to_string(pngs) + " PNG encodings identical";
  return o;
}

Outcome random_baseline_check(Context& ctx) {
  const Manifest& m = ctx.full_suite();
  Rng rng(808);
  const ScoreTable t = random_baseline(m, 10000, rng);
  Outcome o;
  const double acc = t.overall.accuracy();
  o.pass = std::abs(acc - 25.0) <= 2.0;
  o.detail = "overall " + fmt("%.2f", acc) + "% over 10000 trials (target 25 +/- 2)";
  std::string per;
  for (const auto& [code, levels] : t.cells) per += " " + code + "=" + fmt("%.2f", t.task(code).accuracy());
  o.notes.push_back("per task:" + per);
  o.notes.push_back("uniform guessing scores 25% whatever the letter mix, so the none-of-the-others slot moves no task");
  return o;
}

Outcome answer_balance(Context& ctx) {
  const Manifest& m = ctx.full_suite();
  std::array<int, 4> n{};
  for (const auto& e : m.entries) n[static_cast<std::size_t>(e.answer - 'A')]++;
  std::array<double, 4> pct{};
  for (int i = 0; i < 4; ++i) pct[i] = 100.0 * n[i] / m.total();
  const std::array<double, 4> reference = {26.5, 27.5, 28.5, 17.5};
  bool pass = pct[3] < pct[0] && pct[3] < pct[1] && pct[3] < pct[2];
  for (int i = 0; i < 3; ++i) pass &= pct[i] >= 24.0 && pct[i] <= 30.0;
  for (int i = 0; i < 4; ++i) pass &= std::abs(pct[i] - reference[i]) <= 5.0;
  std::string d;
  for (int i = 0; i < 4; ++i) d += std::string(i ? " " : "") + char('A' + i) + "=" + fmt("%.1f", pct[i]) + "%";
  return {pass, d + " (A-C in 24-30, D lowest, each within 5 points of 26.5/27.5/28.5/17.5)", {}};
}

Outcome extraction_fixtures(Context&) {
  std::ifstream in(fs::path(SPATIALVIZ_FIXTURE_DIR) / "extraction.json");
  if (!in) return {false, "fixture file missing", {}};
  const json fixtures = json::parse(in);
  int ok = 0, failures = 0;
  std::set<std::string> markers;
  Outcome o;
  for (const auto& f : fixtures) {
    const std::string text = f["response"];
    const auto got = extract_answer(text);
    const bool want_none = f["expected"].is_null();
    failures += want_none ? 1 : 0;
    const bool good = want_none ? !got : got && std::string(1, *got) == f["expected"].get<std::string>();
    ok += good ? 1 : 0;
    if (!good) o.notes.push_back("wrong on: " + f["style"].get<std::string>());
    if (!want_none)
      for (const auto& mk : answer_markers())
        if (text.find(mk) != std::string::npos) markers.insert(mk);
  }
  const int total = static_cast<int>(fixtures.size());
  o.pass = ok == total && total >= 20 && markers.size() == answer_markers().size() && failures >= 2;
  o.detail = std::to_string(ok) + "/" + std::to_string(total) + " fixtures, " + std::to_string(markers.size()) + "/" +
             std::to_string(answer_markers().size()) + " markers covered, " + std::to_string(failures) +
             " failure cases";
  return o;
}

Outcome offline_evaluation(Context& ctx) {
  const fs::path dir = ctx.work / "eval";
  fs::remove_all(dir);
  if (cli({"generate", "--seed", "11", "--count", "2", "--out", dir.string()}) != 0) return {false, "generate failed", {}};
  // Deterministic pseudo-model: the letter depends on the request bytes, and
  // every fifth reply carries no usable answer.
  StubServer stub([](const std::string& body) {
    const auto h = mix64(std::hash<std::string>{}(body));
    if (h % 5 == 0) return std::make_pair(200, std::string("I am not sure."));
    return std::make_pair(200, "<think>...</think><answer>" + std::string(1, char('A' + h % 4)) + "</answer>");
  });
  const fs::path records = dir / "records.jsonl";
  std::ostringstream out, err;
  const int code = run_cli({"evaluate", "--in", dir.string(), "--endpoint", stub.url(), "--model", "stub", "--out",
                            records.string(), "--mode", "cot"},
                           out, err);
  if (code != kExitOk) return {false, "evaluate exited " + std::to_string(code) + ": " + err.str(), {}};

  // Independent recomputation from the raw files.
  std::map<std::string, std::string> answers;
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  for (const auto& e : manifest["instances"]) answers[e["id"]] = e["answer"];
  std::ifstream in(records);
  std::string line;
  int correct = 0, total = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json r = json::parse(line);
    ++total;
    if (r["letter"].is_string() && r["letter"] == answers.at(r["id"])) ++correct;
  }
  const ScoreTable table = score(read_records(records), read_manifest(dir));
  const double independent = total ? 100.0 * correct / total : 0;
  Outcome o;
  o.pass = total == static_cast<int>(answers.size()) && table.overall.total == total &&
           table.overall.correct == correct && std::abs(table.overall.accuracy() - independent) < 1e-9 &&
           stub.requests() >= total;
  o.detail = std::to_string(total) + " records via stub on 127.0.0.1:" + std::to_string(stub.port()) + ", table " +
             fmt("%.2f", table.overall.accuracy()) + "% vs recomputed " + fmt("%.2f", independent) + "%";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string work = (fs::temp_directory_path() / "spatialviz-acceptance").string();
  std::vector<int> only, tolerate;
  app.add_option("--work", work, "Scratch directory");
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--tolerate", tolerate, "Criteria whose failure does not change the exit status");
  CLI11_PARSE(app, argc, argv);

  Context ctx;
  ctx.work = work;
  fs::create_directories(ctx.work);

  const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria = {
      {"suite scale", suite_scale},
      {"oracle soundness", oracle_soundness},
      {"count-bounds exactness", count_bounds_exactness},
      {"paper-fold roundtrip", paper_roundtrip},
      {"net universality", net_universality},
      {"simulator conservation", simulator_conservation},
      {"determinism", determinism},
      {"random baseline", random_baseline_check},
      {"answer balance", answer_balance},
      {"extraction fixtures", extraction_fixtures},
      {"offline evaluation", offline_evaluation},
  };

  int passed = 0, run = 0, blocking = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    ++run;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), {}};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool tolerated = std::find(tolerate.begin(), tolerate.end(), id) != tolerate.end();
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ": " << o.detail << " ["
              << fmt("%.1f", secs) << " s]" << (!o.pass && tolerated ? " (known, tolerated)" : "") << "\n";
    for (const auto& n : o.notes) std::cout << "     " << n << "\n";
    std::cout.flush();
    passed += o.pass ? 1 : 0;
    blocking += !o.pass && !tolerated ? 1 : 0;
  }
  std::cout << passed << "/" << run << " criteria passed\n";
  return blocking == 0 ? 0 : 1;
}
