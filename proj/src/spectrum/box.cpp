#include "helmfci/spectrum/box.hpp"

#include <algorithm>
#include <cmath>
#include "helmfci/core/error.hpp"
#include "helmfci/operators/helmholtz.hpp"

namespace helmfci
{

std::array<Complex, 4> SpectralBox::vertices() const noexcept
{
  return {Complex(b1, 0.0), Complex(b2, 0.0), Complex(b2, -depth), Complex(b1, -depth)};
}

bool SpectralBox::contains(Complex z, double margin) const noexcept
{
  return z.real() >= b1 - margin && z.real() <= b2 + margin && z.imag() >= -depth - margin &&
         z.imag() <= margin;
}

std::vector<Complex> SpectralBox::boundary_samples(int count) const
{
  const auto v = vertices();
  const double perimeter = 2.0 * (width() + depth);
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(count) + 4);
  for (int side = 0; side < 4; side++)
  {
    const Complex a = v[side], b = v[(side + 1) % 4];
    const double len = std::abs(b - a);
    const int k = perimeter > 0.0 ? std::max(1, int(std::ceil(count * len / perimeter))) : 1;
    for (int j = 0; j < k; j++)
    {
      pts.push_back(a + (b - a) * (double(j) / k));
    }
  }
  return pts;
}

void SpectralBox::validate() const
{
  if (!(b1 <= b2) || !(depth >= 0.0) || !std::isfinite(b1) || !std::isfinite(b2) ||
      !std::isfinite(depth))
  {
    throw ConfigurationError("spectral box needs b1 <= b2 and depth >= 0");
  }
}

SpectralRadii estimate_radii(const HelmholtzOperator &a, double tol)
{
  const auto shifted = HermitianPart::of(a, 1.0);
  const auto rho1 = estimate_rho(*shifted, tol);
  double rho2 = 0.0;
  for (double d : a.damping())
  {
    rho2 = std::max(rho2, d);
  }
  return {rho1.value, rho2, rho1.approximate};
}

SpectralBox box_from_radii(const SpectralRadii &radii, double inflation)
{
  return {-1.0, inflation * radii.rho1 - 1.0, inflation * radii.rho2};
}

SpectralBox box_from_operator(const HelmholtzOperator &a, double inflation)
{
  return box_from_radii(estimate_radii(a), inflation);
}

double doubled_radius_bound(double rho1, double rho2)
{
  return 0.5 * rho2 + std::sqrt(0.25 * rho2 * rho2 + rho1);
}

SpectralBox doubled_box_from_radii(const SpectralRadii &radii, double inflation)
{
  const double r = doubled_radius_bound(inflation * radii.rho1, inflation * radii.rho2);
  return {-1.0 - r, -1.0 + r, inflation * radii.rho2};
}

}  // namespace helmfci
