#pragma once

#include <stdexcept>
#include <string>

namespace cteg {

/// Base of every error raised by the library.
class CtegError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A referenced node is not part of the graph.
class UnknownNodeError : public CtegError {
 public:
  using CtegError::CtegError;
};

/// Node sets that must be disjoint overlap.
class DisjointnessError : public CtegError {
 public:
  using CtegError::CtegError;
};

/// Graft edge (p, r2) violates t(p) < t(r2).
class CompatibilityError : public CtegError {
 public:
  using CtegError::CtegError;
};

/// Malformed graph construction (self-loop, undeclared type, ...).
class InvalidGraphError : public CtegError {
 public:
  using CtegError::CtegError;
};

/// A graph fails CTEG validation where a CTEG is required.
class InvalidCtegError : public CtegError {
 public:
  using CtegError::CtegError;
};

/// Emission or invocation step preconditions do not hold.
class InvalidStepError : public CtegError {
 public:
  using CtegError::CtegError;
};

/// Operation not allowed in the session's current state.
class SessionStateError : public CtegError {
 public:
  using CtegError::CtegError;
};

/// Subagent handle already grafted or discarded.
class ConsumedHandleError : public SessionStateError {
 public:
  using SessionStateError::SessionStateError;
};

/// Persistent store rejected an operation or failed to perform I/O.
class StoreError : public CtegError {
 public:
  using CtegError::CtegError;
};

/// Stored data reconstructs to something that is not a valid CTEG.
class CorruptionError : public StoreError {
 public:
  using StoreError::StoreError;
};

/// Text or binary input could not be parsed.
class ParseError : public CtegError {
 public:
  using CtegError::CtegError;
};

/// Bounded enumeration exceeded its state-count budget.
class BudgetExceededError : public CtegError {
 public:
  using CtegError::CtegError;
};

}  // namespace cteg
