#pragma once

#include <stdexcept>
#include <string>

namespace rankmetrics {

// Base for every error raised by the toolkit. The message is user-facing and
// is what the CLI prints before exiting non-zero.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corpus rows that violate the schema or the data-model invariants.
class CorpusError : public Error {
 public:
  using Error::Error;
};

// A (year, category) cell that standardization needs but the baselines lack.
class BaselineError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Precondition violations in the numeric routines (empty groups, negative
// inputs, zero marginals).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace rankmetrics
