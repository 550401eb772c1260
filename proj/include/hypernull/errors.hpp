#pragma once

#include <stdexcept>
#include <string>

namespace hypernull {

// Malformed input file or token; message carries path and line when known.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stub matching gave up after the allowed number of degenerate draws.
class AttemptsExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive oracle asked to go beyond its size guard.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Statistic undefined on this input (e.g. zero rank variance).
class DegenerateStatistic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No edge pair of the requested sizes exists.
class NoPairs : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sampler precondition failed (m < 2, unconfigurable sequences, ...).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Statistic cannot be evaluated in the requested space.
class SpaceMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A conserved quantity or index drifted. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hypernull
