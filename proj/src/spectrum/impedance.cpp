#include "helmfci/spectrum/impedance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include "helmfci/core/error.hpp"

namespace helmfci
{

namespace
{

constexpr double kResidualTol = 1e-10;
constexpr double kDedupTol = 1e-6;

// g(z) = (omega - z) - s (omega + z) exp(-iz); its roots avoid the pole at z = -omega.
Complex impedance_g(double omega, int sign, Complex z, Complex &dg)
{
  const Complex e = std::exp(-1i * z);
  const double s = sign;
  dg = -1.0 - s * e + 1i * s * (omega + z) * e;
  return (omega - z) - s * (omega + z) * e;
}

}  // namespace

double impedance_residual(double omega, Complex z, int sign)
{
  return std::abs((omega - z) / (omega + z) - double(sign) * std::exp(-1i * z));
}

bool impedance_newton(double omega, int sign, Complex seed, Complex &root, int max_its)
{
  Complex z = seed, dg;
  Complex g = impedance_g(omega, sign, z, dg);
  for (int it = 0; it < max_its; it++)
  {
    if (dg == 0.0)
    {
      return false;
    }
    const Complex step = g / dg;
    // Backtrack until |g| decreases; exp(-iz) grows quickly away from the real axis.
    double lambda = 1.0;
    Complex trial, dtrial, gtrial;
    for (int k = 0; k < 30; k++)
    {
      trial = z - lambda * step;
      gtrial = impedance_g(omega, sign, trial, dtrial);
      if (std::abs(gtrial) < std::abs(g) || std::abs(step) * lambda < 1e-15 * std::max(1.0, std::abs(z)))
      {
        break;
      }
      lambda *= 0.5;
    }
    z = trial;
    g = gtrial;
    dg = dtrial;
    if (std::abs(lambda * step) <= 1e-14 * std::max(1.0, std::abs(z)))
    {
      break;
    }
  }
  root = z;
  return std::isfinite(z.real()) && std::isfinite(z.imag()) &&
         impedance_residual(omega, z, sign) < kResidualTol;
}

ImpedanceRoots impedance_phase_roots(double omega, int count)
{
  if (!(omega > 0.0) || count < 1)
  {
    throw ConfigurationError("impedance roots need omega > 0 and count >= 1");
  }
  ImpedanceRoots out;
  // Asymptotically z ~ k pi - i ln((omega + k pi) / |omega - k pi|).
  const int seeds = count + 5;
  for (int k = 0; k < seeds; k++)
  {
    const double a = k * std::numbers::pi;
    const double gap = std::abs(omega - a);
    const double b = gap > 1e-9 ? std::log((omega + a) / gap) : 5.0;
    for (int sign : {1, -1})
    {
      Complex z;
      if (!impedance_newton(omega, sign, {a, -b}, z))
      {
        continue;
      }
      if (z.real() < -1e-12 || z.imag() > 1e-12 || std::abs(z) < 1e-8)
      {
        continue;
      }
      const bool duplicate = std::any_of(out.roots.begin(), out.roots.end(),
                                         [&](Complex o) { return std::abs(o - z) < kDedupTol; });
      if (!duplicate)
      {
        out.roots.push_back(z);
        out.branch.push_back(sign);
      }
    }
  }
  std::vector<std::size_t> order(out.roots.size());
  for (std::size_t i = 0; i < order.size(); i++)
  {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return out.roots[i].real() < out.roots[j].real(); });
  ImpedanceRoots sorted;
  for (std::size_t i = 0; i < order.size() && int(sorted.roots.size()) < count; i++)
  {
    sorted.roots.push_back(out.roots[order[i]]);
    sorted.branch.push_back(out.branch[order[i]]);
  }
  sorted.complete = int(sorted.roots.size()) == count;
  return sorted;
}

std::vector<Complex> tensor_eigenvalues_2d(const std::vector<Complex> &roots, double omega)
{
  std::vector<Complex> lambda;
  lambda.reserve(roots.size() * roots.size());
  for (Complex a : roots)
  {
    for (Complex b : roots)
    {
      lambda.push_back(a * a + b * b - omega * omega);
    }
  }
  return lambda;
}

double tensor_gap_2d(double omega, double window)
{
  const int count = int(std::ceil(1.3 * omega / std::numbers::pi)) + 5;
  const auto roots = impedance_phase_roots(omega, count);
  double gap = std::numeric_limits<double>::infinity();
  for (Complex l : tensor_eigenvalues_2d(roots.roots, omega))
  {
    if (std::abs(l) <= window * omega * omega)
    {
      gap = std::min(gap, std::abs(l.imag()) / omega);
    }
  }
  return gap;
}

}  // namespace helmfci
