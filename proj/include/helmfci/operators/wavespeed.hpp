#ifndef HELMFCI_OPERATORS_WAVESPEED_HPP
#define HELMFCI_OPERATORS_WAVESPEED_HPP

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>
#include "helmfci/operators/grid.hpp"

namespace helmfci
{

//
// Local sampling rate l_i (points per wavelength) at every grid point. The minimum
// over the grid equals grid.l_min.
//
struct WavespeedModel
{
  Grid3 grid;
  std::vector<double> sampling_rate;

  static WavespeedModel uniform(const Grid3 &grid);

  // l_i = l_min * c_i / c_min with c_min = min_i c_i.
  static WavespeedModel from_wavespeed(const Grid3 &grid, std::span<const double> speed);

  // Eight spheres of radius min(n)/8 centred on the {n/4, 3n/4}^3 lattice, with the
  // wavespeed multiplied by `contrast` inside. Degenerate axes are centred at 0.
  static WavespeedModel eight_anomaly(const Grid3 &grid, double contrast = 2.0);

  // Throws ModelError if sizes disagree, any l_i is non-finite, or l_i < l_min.
  void validate() const;
};

// Sidecar describing a raw little-endian wavespeed array.
struct WavespeedSidecar
{
  std::array<int, 3> dims{1, 1, 1};
  std::string dtype = "float64";  // "float32" or "float64"
  double c_min = 1.0;
  double c_max = 1.0;
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
};

WavespeedSidecar read_sidecar(const std::filesystem::path &path);
void write_sidecar(const std::filesystem::path &path, const WavespeedSidecar &sidecar);

// Reads raw x-fastest speeds; throws IoError on I/O failures and ModelError
// on inconsistent content (size, speeds below c_min).
std::vector<double> read_wavespeed_raw(const std::filesystem::path &raw,
                                       const WavespeedSidecar &sidecar);
void write_wavespeed_raw(const std::filesystem::path &raw, const WavespeedSidecar &sidecar,
                         std::span<const double> speed);

// Builds the sampling-rate model l_i = l_min * c_i / c_min from a raw file + sidecar.
WavespeedModel load_wavespeed_model(const std::filesystem::path &raw,
                                    const std::filesystem::path &sidecar, double l_min);

}  // namespace helmfci

#endif  // HELMFCI_OPERATORS_WAVESPEED_HPP
