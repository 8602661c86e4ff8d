#pragma once

#include <stdexcept>
#include <string>

namespace hammer {

enum class Errc {
  UnknownSymbol,
  ArityMismatch,
  TypeMismatch,
  NotBoolean,
  ParseError,
  UnknownTheorem,
  UnknownIdentifier,
  CycleDetected,
  BranchMissing,
  SpawnError,
  NoProofFound,
  Usage,
  Io,
};

const char* errc_name(Errc code);

// Single exception type for the library; the code lets callers (and the CLI
// exit-code mapping) tell failures apart without a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace hammer
