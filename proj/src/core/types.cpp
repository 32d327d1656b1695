#include "debate/core/types.hpp"

#include "debate/core/errors.hpp"
#include "debate/util/hash.hpp"
#include "debate/util/text.hpp"

namespace debate {

std::string_view to_string(Stance s) { return s == Stance::Pro ? "pro" : "con"; }

Stance parse_stance(std::string_view s) {
  const auto v = text::to_lower_ascii(text::trim(s));
  if (v == "pro") return Stance::Pro;
  if (v == "con") return Stance::Con;
  throw ParseError("unknown stance: " + std::string(s));
}

std::string_view act_verb(Stance s) { return s == Stance::Pro ? "support" : "oppose"; }

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Opening: return "opening";
    case Stage::Rebuttal: return "rebuttal";
    case Stage::Closing: return "closing";
  }
  return "opening";
}

Stage parse_stage(std::string_view s) {
  const auto v = text::to_lower_ascii(text::trim(s));
  if (v == "opening") return Stage::Opening;
  if (v == "rebuttal") return Stage::Rebuttal;
  if (v == "closing") return Stage::Closing;
  throw ParseError("unknown stage: " + std::string(s));
}

double default_time_limit(Stage s) { return s == Stage::Closing ? 120.0 : 240.0; }

Motion make_motion(std::string text, std::string id) {
  if (text::trim(text).empty()) throw PreconditionError("motion text must be nonempty");
  if (id.empty()) id = sha256_hex(text).substr(0, 12);
  return Motion{std::move(id), std::move(text)};
}

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::Propose: return "propose";
    case ActionKind::Reinforce: return "reinforce";
    case ActionKind::Attack: return "attack";
    case ActionKind::Rebut: return "rebut";
  }
  return "propose";
}

ActionKind parse_action_kind(std::string_view s) {
  const auto v = text::to_lower_ascii(text::trim(s));
  if (v == "propose") return ActionKind::Propose;
  if (v == "reinforce") return ActionKind::Reinforce;
  if (v == "attack") return ActionKind::Attack;
  if (v == "rebut") return ActionKind::Rebut;
  throw ParseError("unknown action kind: " + std::string(s));
}

bool satisfies_target_rule(const ActionTuple& t) {
  if (t.claim.text.empty()) return false;
  if (t.kind == ActionKind::Propose) return !t.target.has_value();
  return t.target.has_value() && !t.target->text.empty();
}

Statement make_statement(Stance side, Stage stage, std::string text,
                         std::optional<std::string> plan) {
  Statement s;
  s.side = side;
  s.stage = stage;
  s.word_count = text::word_count(text);
  s.text = std::move(text);
  s.plan = std::move(plan);
  return s;
}

const std::array<ScheduleSlot, 6>& oxford_schedule() {
  static const std::array<ScheduleSlot, 6> schedule = {{
      {Stance::Pro, Stage::Opening},
      {Stance::Con, Stage::Opening},
      {Stance::Pro, Stage::Rebuttal},
      {Stance::Con, Stage::Rebuttal},
      {Stance::Pro, Stage::Closing},
      {Stance::Con, Stage::Closing},
  }};
  return schedule;
}

}  // namespace debate
