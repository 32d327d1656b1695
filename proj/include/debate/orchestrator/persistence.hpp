#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "debate/core/state.hpp"
#include "debate/orchestrator/orchestrator.hpp"

// Run directory layout:
//   state.json                      debate state after the last finished stage
//   statements/NN_side_stage.txt    final statement text
//   stages/NN_side_stage.json       StageRecord (engine speeches only)
//   trees/NN_pro.json, NN_con.json  flow trees after statement NN
//   trees/NN.txt                    tree string after statement NN
//   transcript.md                   readable transcript
namespace debate::orchestrator {

/// Writes to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

std::string slot_name(int turn, Stance side, Stage stage);

void save_state(const std::filesystem::path& dir, const DebateState& state);
std::optional<DebateState> load_state(const std::filesystem::path& dir);

/// Statement text, trees and the transcript after statement `turn`.
void save_turn(const std::filesystem::path& dir, const DebateState& state, int turn);
void save_stage_record(const std::filesystem::path& dir, const StageRecord& record);
std::vector<StageRecord> load_stage_records(const std::filesystem::path& dir);

std::string render_transcript(const DebateState& state);

struct RunOptions {
  /// Empty keeps everything in memory.
  std::filesystem::path out_dir;
  std::string pro_debater = "engine";
  std::string con_debater = "engine";
  /// Stop once this many statements exist (simulates an interruption).
  std::optional<int> stop_after;
};

struct RunResult {
  DebateState state;
  std::vector<StageRecord> records;
  bool resumed = false;
};

/// Runs the remaining schedule, persisting after each stage. An existing
/// state.json in out_dir is resumed from its next slot; its motion must
/// match. A failing stage leaves the last completed stage on disk.
RunResult run_debate(const Motion& motion, DebateEngine& engine, const RunOptions& options = {});

struct PairedResult {
  RunResult original;
  RunResult swapped;
};

/// The same motion twice, with the debater assignments swapped; runs go to
/// out_dir/original and out_dir/swapped.
PairedResult run_paired(const Motion& motion, DebateEngine& engine, const RunOptions& options = {});

}  // namespace debate::orchestrator
