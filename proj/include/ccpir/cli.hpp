#pragma once

#include <cstdint>
#include <ostream>
#include <string>

namespace ccpir::cli {

/// One fully-specified run: a subcommand plus every knob it may need. Loaded
/// from a JSON config file, then overridden by flags; rationals travel as
/// "num/den" strings so nothing drifts through the wire.
struct RunConfig {
  std::string command;  // audit | tradeoff | pir | compare
  std::string scheme;   // audit scheme / PIR id / tradeoff generator
  int n = 0;
  int k = 0;
  int t = 1;
  uint32_t q = 0;  // 0 = scheme default
  std::string mu = "1/2";
  uint64_t symbol_len = 1;
  uint64_t budget = uint64_t(1) << 24;
  uint64_t seed = 0;    // sampled smoke runs only; exhaustive audits ignore it
  uint64_t sample = 0;  // >0 adds a seeded decode smoke to `audit`
  int chunks = 1;
  std::string fault = "none";  // none | corrupt_payload | leak_metadata
  std::string out;             // output file; empty = the given stream
  std::string format = "json"; // json | csv
  std::string dump_tables;     // directory for per-check distribution CSVs
  std::string dump_transcript; // file for one example transcript (JSON)
};

/// Reads a JSON config file into a RunConfig (missing keys keep defaults).
RunConfig load_config(const std::string& path);

/// Executes the configured command. Exit codes: 0 all checks pass, 1 a
/// gating check failed, 2 usage/config error. Identical configs produce
/// byte-identical outputs.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ccpir::cli
