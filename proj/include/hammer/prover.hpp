#pragma once

// External prover configuration and execution.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hammer/fof.hpp"
#include "hammer/tptp.hpp"

namespace hammer {

enum class ProblemFormat { Tptp, Smt2 };

struct ProverConfig {
  std::string name;
  std::string executable;
  // Argument template; `{file}` and `{timeout}` are substituted per run.
  std::vector<std::string> args;
  ProblemFormat format = ProblemFormat::Tptp;
  std::size_t budget = 0;  // premises passed after relevance filtering
  double timeout = 30;     // seconds
};

inline constexpr double kDefaultTimeout = 30;

// Built-in defaults for vampire (96 premises), eprover (128) and z3 (32).
std::vector<std::string> known_provers();
ProverConfig default_prover(std::string_view name);  // throws Usage for unknown names

// Key-value overrides, one `NAME.KEY = VALUE` per line, `#` comments.
// Keys: exe, args, format (tptp|smt2), budget, timeout. A name that is not
// built in starts from an empty config and must set exe and args.
std::map<std::string, ProverConfig> parse_prover_config(std::string_view text);

// Defaults, then the config file entries, then HAMMER_PROVER_<NAME>
// (upper-cased) for the executable. Budget must be positive.
ProverConfig resolve_prover(std::string_view name, const std::map<std::string, ProverConfig>& file_configs = {});

// Absolute path of the executable (PATH lookup for bare names), or empty.
std::string find_executable(const std::string& exe);

struct ProcessOutput {
  std::string output;  // stdout and stderr, interleaved
  int exit_code = 0;
  bool killed = false;  // hit the deadline
  double seconds = 0;
};

// Spawns `argv` in its own process group and kills the group after
// `timeout` seconds. Throws SpawnError when the program cannot be started.
ProcessOutput run_process(const std::vector<std::string>& argv, double timeout);

struct AtpResult {
  std::string problem;  // caller-supplied label
  std::string prover;
  SzsStatus status = SzsStatus::Error;
  std::string detail;
  double seconds = 0;
  // Axiom names of the submitted problem used by the proof; only when
  // the status proves.
  std::optional<CoreResult> core;
};

// Writes the problem in the prover's format to a temporary file, runs it
// and parses the verdict. Runtime failures become Error or Timeout
// results; only a missing executable throws (SpawnError).
AtpResult run_prover(const FofProblem& problem, const ProverConfig& config, const std::string& label = {});

}  // namespace hammer
