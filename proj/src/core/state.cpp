#include "debate/core/state.hpp"

#include "debate/core/errors.hpp"
#include "debate/util/text.hpp"

namespace debate {

std::string_view to_string(Importance i) {
  switch (i) {
    case Importance::High: return "high";
    case Importance::Medium: return "medium";
    case Importance::Low: return "low";
  }
  return "low";
}

Importance parse_importance(std::string_view s) {
  const auto v = text::to_lower_ascii(text::trim(s));
  if (v == "high") return Importance::High;
  if (v == "medium") return Importance::Medium;
  if (v == "low") return Importance::Low;
  throw ParseError("unknown importance: " + std::string(s));
}

std::optional<ScheduleSlot> DebateState::next_slot() const {
  if (transcript.size() >= schedule.size()) return std::nullopt;
  return schedule[transcript.size()];
}

DebateState new_debate_state(Motion motion, std::uint64_t seed, std::string pro_debater,
                             std::string con_debater) {
  DebateState state;
  state.motion = std::move(motion);
  state.debaters[Stance::Pro] = std::move(pro_debater);
  state.debaters[Stance::Con] = std::move(con_debater);
  const auto& schedule = oxford_schedule();
  state.schedule.assign(schedule.begin(), schedule.end());
  state.rng_seed = seed;
  return state;
}

}  // namespace debate
