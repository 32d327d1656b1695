#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace debate {

enum class Stance { Pro, Con };

constexpr Stance opposite(Stance s) { return s == Stance::Pro ? Stance::Con : Stance::Pro; }

std::string_view to_string(Stance s);
Stance parse_stance(std::string_view s);

/// "support" / "oppose", the verb the stage prompts use for a side.
std::string_view act_verb(Stance s);

enum class Stage { Opening, Rebuttal, Closing };

std::string_view to_string(Stage s);
Stage parse_stage(std::string_view s);

/// Oxford-style defaults: 4 minutes opening and rebuttal, 2 minutes closing.
double default_time_limit(Stage s);

struct Motion {
  std::string id;
  std::string text;

  bool operator==(const Motion&) const = default;
};

Motion make_motion(std::string text, std::string id = {});

struct Claim {
  std::string text;
  std::optional<std::vector<double>> embedding;

  Claim() = default;
  explicit Claim(std::string t) : text(std::move(t)) {}

  /// Identity is exact text; semantic identity belongs to the matcher.
  bool operator==(const Claim& other) const { return text == other.text; }
};

struct Argument {
  Claim claim;
  std::string support_text;
  std::vector<std::string> evidence_refs;

  bool operator==(const Argument&) const = default;
};

enum class ActionKind { Propose, Reinforce, Attack, Rebut };

std::string_view to_string(ActionKind k);
/// Throws ParseError on anything outside the four-value vocabulary.
ActionKind parse_action_kind(std::string_view s);

struct ActionTuple {
  ActionKind kind = ActionKind::Propose;
  Claim claim;
  std::string argument;
  std::optional<Claim> target;

  bool operator==(const ActionTuple&) const = default;
};

/// Propose carries no target; the other three kinds must carry one.
bool satisfies_target_rule(const ActionTuple& t);

struct Statement {
  Stance side = Stance::Pro;
  Stage stage = Stage::Opening;
  std::string text;
  std::optional<std::string> plan;
  std::size_t word_count = 0;
  std::optional<double> estimated_duration;

  bool operator==(const Statement&) const = default;
};

/// Builds a statement with word_count derived from `text`.
Statement make_statement(Stance side, Stage stage, std::string text,
                         std::optional<std::string> plan = std::nullopt);

struct ScheduleSlot {
  Stance side;
  Stage stage;

  bool operator==(const ScheduleSlot&) const = default;
};

/// Pro-Opening, Con-Opening, Pro-Rebuttal, Con-Rebuttal, Pro-Closing, Con-Closing.
const std::array<ScheduleSlot, 6>& oxford_schedule();

}  // namespace debate
