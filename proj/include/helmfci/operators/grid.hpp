#ifndef HELMFCI_OPERATORS_GRID_HPP
#define HELMFCI_OPERATORS_GRID_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace helmfci
{

// Upper bound on grid points accepted by Grid3::validate() unless overridden.
inline constexpr std::size_t kDefaultMaxGridPoints = std::size_t(1) << 27;

//
// Uniform 3D grid on a unit-length x axis. Vectors on the grid are stored with x
// fastest: index = i1 + n1 * (i2 + n2 * i3). An axis of size 1 is degenerate (2D/1D
// analogs). l_min is the minimum number of grid points per wavelength; with unit
// background wavespeed the frequency is omega / (2 pi) = n1 / l_min.
//
struct Grid3
{
  int n1 = 1, n2 = 1, n3 = 1;
  double l_min = 2.25;

  std::size_t size() const noexcept
  {
    return std::size_t(n1) * std::size_t(n2) * std::size_t(n3);
  }
  std::size_t index(int i1, int i2, int i3) const noexcept
  {
    return std::size_t(i1) + std::size_t(n1) * (std::size_t(i2) + std::size_t(n2) * std::size_t(i3));
  }
  std::array<int, 3> dims() const noexcept { return {n1, n2, n3}; }
  double frequency() const noexcept { return n1 / l_min; }
  double omega() const noexcept;

  // Throws ConfigurationError for non-positive dims, l_min <= 2 or too many points.
  // Returns human-readable warnings (l_min below the 2.25 spectral rate).
  std::vector<std::string> validate(std::size_t max_points = kDefaultMaxGridPoints) const;
};

}  // namespace helmfci

#endif  // HELMFCI_OPERATORS_GRID_HPP
