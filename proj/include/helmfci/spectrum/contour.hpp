#ifndef HELMFCI_SPECTRUM_CONTOUR_HPP
#define HELMFCI_SPECTRUM_CONTOUR_HPP

#include <vector>
#include "helmfci/core/vector.hpp"
#include "helmfci/spectrum/box.hpp"

namespace helmfci
{

//
// Quadrature on the ellipse {t r cos(theta) + i r sin(theta)} shifted by
// -t r cos(phi) - i rho2 / 2, with phi = pi / J and theta_j = (2j - 1) phi:
//
//   z_j     = t r (cos theta_j - cos phi) + i (r sin theta_j - rho2 / 2)
//   sigma_j = (r cos theta_j + i t r sin theta_j) / J
//   r       = (rho2 / 2 + eps) / sin phi
//
// so that Re z_j <= 0 and, for even J, Im z_j lies outside (-eps - rho2, eps). Odd J
// puts the node theta = pi at height -rho2 / 2. The integral
// sum_j sigma_j / z_j (A - z_j I)^{-1} approximates P A^{-1}, P the spectral projector
// onto eigenvalues outside the ellipse.
//
struct Contour
{
  double t = 0.1;
  double r = 1.0;
  int count = 6;
  double eps = 0.1;
  double rho2 = 0.0;
  Complex center;
  std::vector<Complex> nodes;
  std::vector<Complex> weights;

  // True if z lies strictly inside the ellipse.
  bool encloses(Complex z) const;
};

// Throws ConfigurationError unless count >= 2, t in (0, 1], eps > 0.
Contour make_contour(const SpectralBox &box, int count, double t, double eps);
Contour make_contour_for_depth(double rho2, int count, double t, double eps);

// Same quadrature on a fixed ellipse center + t r cos(theta) + i r sin(theta); eps and
// rho2 are left at zero. Unlike make_contour the ellipse does not change with count.
Contour make_ellipse_contour(Complex center, double t, double r, int count);

// Default clearance eps = coefficient / omega (omega the angular frequency of the grid).
inline constexpr double kDefaultEpsCoefficient = 178.7;

}  // namespace helmfci

#endif  // HELMFCI_SPECTRUM_CONTOUR_HPP
