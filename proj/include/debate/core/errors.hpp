#pragma once

#include <stdexcept>
#include <string>

namespace debate {

/// Base of every error the engine raises on purpose.
class DebateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation's precondition (bad argument, wrong turn).
class PreconditionError : public DebateError {
 public:
  using DebateError::DebateError;
};

/// A document, provider reply, or transcript could not be parsed.
class ParseError : public DebateError {
 public:
  using DebateError::DebateError;
};

}  // namespace debate
