#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ccpir/cli.hpp"

namespace {

void add_common_options(CLI::App* cmd, ccpir::cli::RunConfig& config, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file; flags override its values");
  cmd->add_option("--scheme", config.scheme, "scheme id / tradeoff generator");
  cmd->add_option("--n", config.n, "number of files / messages");
  cmd->add_option("--k", config.k, "number of users");
  cmd->add_option("--t", config.t, "cache parameter t");
  cmd->add_option("--q", config.q, "field modulus override (prime)");
  cmd->add_option("--mu", config.mu, "time-sharing weight as a/b");
  cmd->add_option("--symbol-len", config.symbol_len, "symbols per PIR piece");
  cmd->add_option("--budget", config.budget, "max enumerated worlds");
  cmd->add_option("--seed", config.seed, "seed for sampled smoke runs only");
  cmd->add_option("--sample", config.sample, "sampled decode smoke world count");
  cmd->add_option("--chunks", config.chunks, "world-space partitions (determinism check)");
  cmd->add_option("--fault", config.fault, "none | corrupt_payload | leak_metadata");
  cmd->add_option("--out", config.out, "output file (default stdout)");
  cmd->add_option("--format", config.format, "json | csv");
  cmd->add_option("--dump-tables", config.dump_tables, "directory for distribution CSVs");
  cmd->add_option("--dump-transcript", config.dump_transcript, "file for an example transcript");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coded-caching and two-server PIR privacy audit toolbox"};
  app.require_subcommand(1);

  ccpir::cli::RunConfig config;
  std::string config_path;
  for (const char* name : {"audit", "tradeoff", "pir", "compare"}) {
    auto* cmd = app.add_subcommand(name);
    add_common_options(cmd, config, config_path);
    cmd->callback([&config, name] { config.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  if (!config_path.empty()) {
    // Re-parse so explicit flags win over the config file.
    try {
      ccpir::cli::RunConfig from_file = ccpir::cli::load_config(config_path);
      std::string cmd = config.command;
      config = from_file;
      config.command = cmd;
      try {
        app.clear();
        app.parse(argc, argv);
      } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  return ccpir::cli::run(config, std::cout, std::cerr);
}
