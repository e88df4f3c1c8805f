#pragma once

// Command pipelines shared by the command-line tool and the python bindings:
// each takes textual inputs, runs the corresponding library computation over
// GF(3^(2n))(t), and returns a JSON report.  All output is deterministic for
// fixed inputs — independent of thread count — so reports can be compared
// byte for byte.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace twistlab::pipeline {

using ordered_json = nlohmann::ordered_json;

struct Options {
  unsigned n = 1;                    // base field GF(3^(2n))
  std::optional<std::string> kind;   // twist kind, CLI spelling ("cubic-tau")
  std::optional<std::string> f;      // textual rational function / polynomial
  std::optional<std::string> g;
  std::uint64_t seed = 0;            // factorization seed (reproducible default)
  unsigned budget_exponent = 20;     // enumeration budget 3^budget_exponent
  unsigned threads = 0;              // 0 = hardware concurrency
  long mX = 0;                       // multiplicity of the base curve X (P¹: 0)
};

ordered_json cmd_twist(const Options& opts);
ordered_json cmd_rank(const Options& opts);
ordered_json cmd_lfun(const Options& opts);
ordered_json cmd_fibers(const Options& opts);
ordered_json cmd_surface(const Options& opts);
ordered_json cmd_verify_example(const Options& opts);

// Dispatch by subcommand name: twist, rank, lfun, fibers, surface,
// verify-example.  ValidationError("UnknownCommand") otherwise.
ordered_json run_command(const std::string& command, const Options& opts);

}  // namespace twistlab::pipeline
