#include "helmfci/operators/grid.hpp"

#include <cmath>
#include <numbers>
#include "helmfci/core/error.hpp"

namespace helmfci
{

double Grid3::omega() const noexcept
{
  return 2.0 * std::numbers::pi * frequency();
}

std::vector<std::string> Grid3::validate(std::size_t max_points) const
{
  if (n1 < 1 || n2 < 1 || n3 < 1)
  {
    throw ConfigurationError("grid dimensions must be positive");
  }
  if (!(l_min > 2.0) || !std::isfinite(l_min))
  {
    throw ConfigurationError("l_min must exceed 2 points per wavelength, got " +
                             std::to_string(l_min));
  }
  if (size() > max_points)
  {
    throw ConfigurationError("grid has " + std::to_string(size()) +
                             " points, above the configured cap of " +
                             std::to_string(max_points));
  }
  std::vector<std::string> warnings;
  if (l_min < 2.25)
  {
    warnings.push_back("l_min = " + std::to_string(l_min) +
                       " is below 2.25 points per wavelength");
  }
  return warnings;
}

}  // namespace helmfci
