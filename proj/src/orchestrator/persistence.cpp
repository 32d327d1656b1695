#include "debate/orchestrator/persistence.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "debate/core/serialize.hpp"
#include "debate/semantic/semantic.hpp"

namespace debate::orchestrator {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const auto tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DebateError("cannot write " + tmp.string());
    out << content;
    if (!out) throw DebateError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DebateError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string slot_name(int turn, Stance side, Stage stage) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", turn);
  return std::string(buf) + "_" + std::string(to_string(side)) + "_" + std::string(to_string(stage));
}

void save_state(const fs::path& dir, const DebateState& state) {
  write_file_atomic(dir / "state.json", doc::serialize(state));
}

std::optional<DebateState> load_state(const fs::path& dir) {
  const auto p = dir / "state.json";
  if (!fs::exists(p)) return std::nullopt;
  return doc::parse_debate_state(read_file(p));
}

void save_turn(const fs::path& dir, const DebateState& state, int turn) {
  const auto& s = state.transcript.at(static_cast<std::size_t>(turn));
  write_file_atomic(dir / "statements" / (slot_name(turn, s.side, s.stage) + ".txt"), s.text + "\n");
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", turn);
  const std::string nn(buf);
  const auto& pro = state.pro_view.own;
  const auto& con = state.con_view.own;
  write_file_atomic(dir / "trees" / (nn + "_pro.json"), doc::serialize(pro));
  write_file_atomic(dir / "trees" / (nn + "_con.json"), doc::serialize(con));
  write_file_atomic(dir / "trees" / (nn + ".txt"), semantic::debate_to_string(pro, con));
  write_file_atomic(dir / "transcript.md", render_transcript(state));
}

void save_stage_record(const fs::path& dir, const StageRecord& record) {
  write_file_atomic(dir / "stages" / (slot_name(record.turn, record.side, record.stage) + ".json"),
                    doc::dump(doc::wrap("stage_record", to_json(record))));
}

std::vector<StageRecord> load_stage_records(const fs::path& dir) {
  std::vector<StageRecord> out;
  const auto stages = dir / "stages";
  if (!fs::exists(stages)) return out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(stages)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    out.push_back(stage_record_from_json(doc::unwrap(doc::parse_json(read_file(f)), "stage_record")));
  }
  return out;
}

std::string render_transcript(const DebateState& state) {
  std::string out = "# " + state.motion.text + "\n";
  for (const auto& s : state.transcript) {
    out += "\n## " + std::string(to_string(s.side)) + " " + std::string(to_string(s.stage)) + " (" +
           state.debaters.at(s.side) + ")\n\n" + s.text + "\n";
  }
  return out;
}

RunResult run_debate(const Motion& motion, DebateEngine& engine, const RunOptions& options) {
  RunResult result;
  const bool persist = !options.out_dir.empty();
  std::optional<DebateState> loaded;
  if (persist) loaded = load_state(options.out_dir);
  if (loaded) {
    if (loaded->motion.text != motion.text) {
      throw PreconditionError("run directory holds a different motion: " + loaded->motion.text);
    }
    result.state = std::move(*loaded);
    result.records = load_stage_records(options.out_dir);
    result.resumed = true;
  } else {
    result.state = new_debate_state(motion, static_cast<std::uint64_t>(engine.config().seed), options.pro_debater,
                                    options.con_debater);
    if (persist) save_state(options.out_dir, result.state);
  }

  auto& state = result.state;
  while (!state.complete()) {
    if (options.stop_after && static_cast<int>(state.transcript.size()) >= *options.stop_after) break;
    auto rec = engine.run_stage(state);
    engine.accept(state, rec.statement);
    if (persist) {
      save_stage_record(options.out_dir, rec);
      save_turn(options.out_dir, state, rec.turn);
      save_state(options.out_dir, state);
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

PairedResult run_paired(const Motion& motion, DebateEngine& engine, const RunOptions& options) {
  PairedResult out;
  RunOptions a = options;
  RunOptions b = options;
  std::swap(b.pro_debater, b.con_debater);
  if (!options.out_dir.empty()) {
    a.out_dir = options.out_dir / "original";
    b.out_dir = options.out_dir / "swapped";
  }
  out.original = run_debate(motion, engine, a);
  out.swapped = run_debate(motion, engine, b);
  return out;
}

}  // namespace debate::orchestrator
