#pragma once

#include <stdexcept>

namespace topics {

// Error categories correspond to CLI exit codes:
// InputError -> 2, MissingArtifactError -> 3, SelectorError -> 4,
// anything else -> 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed, inconsistent or degenerate input data and parameters.
struct InputError : Error {
  using Error::Error;
};

// A pipeline artifact (model, ingested corpus) that should exist does not.
struct MissingArtifactError : Error {
  using Error::Error;
};

// An unknown venue, topic index or analysis name was requested.
struct SelectorError : Error {
  using Error::Error;
};

}  // namespace topics
