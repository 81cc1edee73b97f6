#ifndef HELMFCI_CLI_CONFIG_HPP
#define HELMFCI_CLI_CONFIG_HPP

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>
#include "json.hpp"
#include "helmfci/fci/fci.hpp"
#include "helmfci/fci/setup.hpp"

namespace helmfci::cli
{

// Config rejected by the schema; `path` is a JSON pointer to the offending key.
class SchemaError : public std::invalid_argument
{
public:
  SchemaError(std::string path, const std::string &message)
    : std::invalid_argument(path + ": " + message), path_(std::move(path))
  {
  }
  const std::string &path() const noexcept { return path_; }

private:
  std::string path_;
};

enum class Subcommand
{
  Solve,
  Tune,
  Spectrum,
  BenchShifted,
  Scale
};

std::string_view to_string(Subcommand s);

struct ModelConfig
{
  std::string kind = "uniform";  // uniform | eight_anomaly | file
  double contrast = 2.0;
};

struct SourceConfig
{
  std::string kind = "point";  // point | random
  std::optional<std::array<int, 3>> position;  // default: grid centre
};

struct TuneConfig
{
  SpectralBox box{-1.0, 2.8, 0.65};
  std::vector<Complex> shifts{1i};
  int q_max = 5;
  double target = 1e-2;
  double delta_step = 0.0;
};

struct BenchConfig
{
  int n = 16;
  double l_min = 4.0;
  std::vector<double> spectrum_tops{8.0, 16.0, 32.0, 64.0};
  std::vector<Complex> shifts{1i, 0.5i, 0.25i, 0.125i};
  double reduction = 1e-2;
  int q_max = 5;
};

struct SliceConfig
{
  int axis = 2;
  int index = -1;  // -1: middle plane
  std::string format = "csv";  // csv | raw
};

struct RunConfig
{
  Subcommand subcommand = Subcommand::Solve;
  Discretization discretization = Discretization::Spectral;
  Formulation formulation = Formulation::Single;
  DampingSign damping_sign = DampingSign::LowerHalfPlane;
  std::array<int, 3> grid{16, 16, 16};
  double l_min = 2.25;
  double frequency = 16.0 / 2.25;  // omega / (2 pi) = n1 / l_min
  ModelConfig model;
  int sponge_width = -1;
  double sponge_strength = 0.9;
  ContourOptions contour;
  double outer_tol = 1e-6;
  int outer_max_its = 100;
  int outer_restart = 20;
  bool refinement = false;
  double node_reduction = 0.2;
  int node_max_sweeps = 500;
  int inner_its = 10;
  int q_max = 5;
  bool warm_start = false;
  int threads = 1;
  std::uint64_t seed = 7;
  SourceConfig source;
  TuneConfig tune;
  BenchConfig bench;
  std::vector<int> scale_sizes{16, 32, 48};
  std::vector<SliceConfig> slices;
  std::optional<std::filesystem::path> model_in;
  std::optional<std::filesystem::path> model_sidecar;
  std::filesystem::path output_dir = "helmfci-out";
  bool wall_time = true;  // false writes 0 in the seconds columns (byte-stable output)

  Grid3 grid3() const { return {grid[0], grid[1], grid[2], l_min}; }
};

// Parses and validates a config. Unknown keys, wrong types and out-of-range values throw
// SchemaError. A manifest written by `run` is accepted too (its "config" member is used).
RunConfig parse_run_config(const nlohmann::json &j);
RunConfig load_run_config(const std::filesystem::path &path);

// Fully resolved config, every default included; parse_run_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig &c);

}  // namespace helmfci::cli

#endif  // HELMFCI_CLI_CONFIG_HPP
