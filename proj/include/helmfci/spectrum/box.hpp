#ifndef HELMFCI_SPECTRUM_BOX_HPP
#define HELMFCI_SPECTRUM_BOX_HPP

#include <array>
#include <vector>
#include "helmfci/core/vector.hpp"

namespace helmfci
{

class HelmholtzOperator;

//
// Closed rectangle [b1, b2] x [-depth, 0] in the complex plane. Vertices are
// b1, b2 (on the real axis) and beta_j = b_j - i depth.
//
struct SpectralBox
{
  double b1 = -1.0;
  double b2 = 0.0;
  double depth = 0.0;

  double width() const noexcept { return b2 - b1; }
  Complex center() const noexcept { return {0.5 * (b1 + b2), -0.5 * depth}; }
  // {b1, b2, beta2, beta1} in boundary order.
  std::array<Complex, 4> vertices() const noexcept;
  bool contains(Complex z, double margin = 0.0) const noexcept;

  // `count` points on the boundary, always including the four vertices; points are
  // distributed proportionally to side length.
  std::vector<Complex> boundary_samples(int count) const;

  // Throws ConfigurationError unless b1 <= b2 and depth >= 0.
  void validate() const;
};

struct SpectralRadii
{
  double rho1 = 0.0;  // rho(A1 + I)
  double rho2 = 0.0;  // rho(A2)
  bool rho1_approximate = false;
};

// Power-iteration rho1 and exact (diagonal) rho2 of a Helmholtz operator.
SpectralRadii estimate_radii(const HelmholtzOperator &a, double tol = 1e-8);

inline constexpr double kBoxInflation = 1.02;

// [-1, inflation * rho1 - 1] x [-inflation * rho2, 0].
SpectralBox box_from_radii(const SpectralRadii &radii, double inflation = kBoxInflation);
SpectralBox box_from_operator(const HelmholtzOperator &a, double inflation = kBoxInflation);

// Box around the spectrum of iC - I: |mu + 1| <= rho2 / 2 + sqrt(rho2^2 / 4 + rho1) and
// -rho2 <= Im(mu) <= 0, giving [-1 - R, -1 + R] x [-rho2, 0].
SpectralBox doubled_box_from_radii(const SpectralRadii &radii, double inflation = kBoxInflation);

// Radius bound on the eigenvalues of C.
double doubled_radius_bound(double rho1, double rho2);

}  // namespace helmfci

#endif  // HELMFCI_SPECTRUM_BOX_HPP
