#include "helmfci/spectrum/contour.hpp"

#include <cmath>
#include <numbers>
#include "helmfci/core/error.hpp"

namespace helmfci
{

bool Contour::encloses(Complex z) const
{
  const Complex d = z - center;
  const double x = d.real() / (t * r), y = d.imag() / r;
  return x * x + y * y < 1.0;
}

Contour make_ellipse_contour(Complex center, double t, double r, int count)
{
  if (count < 2 || !(t > 0.0 && t <= 1.0) || !(r > 0.0))
  {
    throw ConfigurationError("ellipse contour needs J >= 2, t in (0, 1], r > 0");
  }
  Contour c;
  c.t = t;
  c.r = r;
  c.count = count;
  c.eps = 0.0;
  c.center = center;
  const double phi = std::numbers::pi / count;
  c.nodes.reserve(static_cast<std::size_t>(count));
  c.weights.reserve(static_cast<std::size_t>(count));
  for (int j = 1; j <= count; j++)
  {
    const double theta = (2 * j - 1) * phi;
    c.nodes.push_back(center + Complex(t * r * std::cos(theta), r * std::sin(theta)));
    c.weights.emplace_back(r * std::cos(theta) / count, t * r * std::sin(theta) / count);
  }
  return c;
}

Contour make_contour_for_depth(double rho2, int count, double t, double eps)
{
  if (count < 2 || !(t > 0.0 && t <= 1.0) || !(eps > 0.0) || !(rho2 >= 0.0))
  {
    throw ConfigurationError("contour needs J >= 2, t in (0, 1], eps > 0, rho2 >= 0");
  }
  const double phi = std::numbers::pi / count;
  const double r = (0.5 * rho2 + eps) / std::sin(phi);
  Contour c = make_ellipse_contour({-t * r * std::cos(phi), -0.5 * rho2}, t, r, count);
  c.eps = eps;
  c.rho2 = rho2;
  // Evaluate nodes in the documented form so Re(z_1) = Re(z_J) = 0 exactly.
  for (int j = 1; j <= count; j++)
  {
    const double theta = (2 * j - 1) * phi;
    c.nodes[j - 1] = {t * r * (std::cos(theta) - std::cos(phi)), r * std::sin(theta) - 0.5 * rho2};
  }
  return c;
}

Contour make_contour(const SpectralBox &box, int count, double t, double eps)
{
  box.validate();
  return make_contour_for_depth(box.depth, count, t, eps);
}

}  // namespace helmfci
