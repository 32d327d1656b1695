#pragma once

#include <string>
#include <vector>

#include "debate/core/types.hpp"
#include "debate/timing/timing.hpp"

namespace debate::orchestrator {

struct ValidityReport {
  bool format_valid = true;
  bool time_valid = true;
  std::vector<std::string> reasons;

  bool valid() const { return format_valid && time_valid; }
  bool operator==(const ValidityReport&) const = default;
};

/// Format: nonempty, no planning or reviewer talk leaking into the speech, no
/// sentence that puts the speaker on the wrong side, not a bare list of
/// points. Time: estimated duration at most `limit_s`.
ValidityReport validate_statement(const Statement& statement, double limit_s, timing::DurationEstimator& estimator);

/// Same, with the stage's default limit.
ValidityReport validate_statement(const Statement& statement, timing::DurationEstimator& estimator);

}  // namespace debate::orchestrator
