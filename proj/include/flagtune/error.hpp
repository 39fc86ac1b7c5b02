#pragma once

#include <stdexcept>
#include <string>

namespace flagtune {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input document (flag space, suite, model, trace, ...).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A value does not belong to the structure it is used with,
/// e.g. a configuration rendered against a different flag space.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// The campaign cannot proceed, e.g. the reference configuration fails to build.
class CampaignError : public Error {
 public:
  using Error::Error;
};

/// Raised when a stop was requested; the checkpoint on disk is valid.
class Interrupted : public Error {
 public:
  using Error::Error;
};

}  // namespace flagtune
