#ifndef HELMFCI_CLI_RUN_HPP
#define HELMFCI_CLI_RUN_HPP

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>
#include "helmfci/cli/config.hpp"

namespace helmfci::cli
{

enum ExitCode : int
{
  kExitOk = 0,
  kExitFailure = 1,   // unexpected internal error
  kExitSchema = 2,    // config rejected (schema, parameters, model content)
  kExitSolver = 3,    // divergence, non-finite values or an unconverged solve
  kExitIo = 4         // missing input or unwritable output
};

struct RunOutcome
{
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> files;  // final locations of written artifacts
};

//
// Executes one configured run and writes its artifacts to config.output_dir:
//
//   manifest.json   resolved config, version, git describe, timings
//   summary.json    headline numbers for the subcommand
//   residuals.csv   iter,resnorm,mvs,seconds (solve)
//   *.csv           subcommand tables (tune, spectrum, bench-shifted, scale)
//
// Files are staged next to the output directory and moved in only once the run has
// finished, so exit codes 2 and 4 leave no outputs. Exit code 3 still writes the
// manifest, summary and diagnostics.json.
//
RunOutcome run(const RunConfig &config, std::ostream &log);

// Parses `config_path`, overrides the output directory when `output` is non-empty, runs.
RunOutcome run_file(const std::filesystem::path &config_path, const std::filesystem::path &output,
                    std::ostream &log);

}  // namespace helmfci::cli

#endif  // HELMFCI_CLI_RUN_HPP
