// helmfci --config run.json [--output dir]
#include <iostream>
#include "CLI11.hpp"
#include "helmfci/cli/run.hpp"

int main(int argc, char **argv)
{
  CLI::App app{"Helmholtz solver with fast contour integration preconditioning"};
  std::string config;
  std::string output;
  app.add_option("-c,--config", config, "JSON run configuration (or a manifest.json to replay)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("-o,--output", output, "output directory (overrides paths.output_dir)");
  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    // A missing config file is an I/O failure, not a usage error.
    return e.get_exit_code() == static_cast<int>(CLI::ExitCodes::ValidationError) ? helmfci::cli::kExitIo : code;
  }
  const auto outcome = helmfci::cli::run_file(config, output, std::cerr);
  for (const auto &f : outcome.files)
  {
    std::cout << f.string() << "\n";
  }
  return outcome.exit_code;
}
