#pragma once

#include <stdexcept>

namespace edlab {

/// A caller broke an operation's precondition (bad index, bad parameter, bad file).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An invariant that a proof guarantees did not hold. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace edlab
