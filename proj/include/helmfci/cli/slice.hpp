#ifndef HELMFCI_CLI_SLICE_HPP
#define HELMFCI_CLI_SLICE_HPP

#include <array>
#include <filesystem>
#include <vector>
#include "helmfci/core/vector.hpp"
#include "helmfci/operators/grid.hpp"

namespace helmfci::cli
{

enum class SliceFormat
{
  Csv,  // one row per point: a,b,re,im,abs
  Raw   // float32 planes re, im, abs (a fastest) plus a JSON sidecar
};

// A plane of a grid field: dims = sizes of the two remaining axes in increasing axis order.
struct Slice
{
  int axis = 2;
  int index = 0;
  std::array<int, 2> dims{0, 0};
  std::vector<float> re, im, abs;  // a fastest
};

// Throws ConfigurationError if axis or index is out of range.
Slice extract_slice(ConstVectorView field, const Grid3 &grid, int axis, int index);

// Writes `path` (and path + ".json" for raw). Returns the files written.
std::vector<std::filesystem::path> export_slice(ConstVectorView field, const Grid3 &grid, int axis,
                                                int index, const std::filesystem::path &path,
                                                SliceFormat format);

// Reads a raw slice written by export_slice.
Slice read_raw_slice(const std::filesystem::path &path);

}  // namespace helmfci::cli

#endif  // HELMFCI_CLI_SLICE_HPP
