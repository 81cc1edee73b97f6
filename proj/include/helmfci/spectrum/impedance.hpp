#ifndef HELMFCI_SPECTRUM_IMPEDANCE_HPP
#define HELMFCI_SPECTRUM_IMPEDANCE_HPP

#include <vector>
#include "helmfci/core/vector.hpp"

namespace helmfci
{

// Roots of (omega - z) / (omega + z) = +-exp(-iz) in the closed fourth quadrant,
// excluding the trivial root z = 0. Squares of these roots minus omega^2 are the
// eigenvalues of the 1D Helmholtz operator with impedance boundary conditions.
struct ImpedanceRoots
{
  std::vector<Complex> roots;  // sorted by real part
  std::vector<int> branch;     // +1 or -1, the sign on exp(-iz)
  bool complete = true;        // false if fewer than the requested count were found
};

// Residual |(omega - z) / (omega + z) - s exp(-iz)|.
double impedance_residual(double omega, Complex z, int sign);

// Damped Newton from seed; returns false if it stagnates or leaves the fourth quadrant.
bool impedance_newton(double omega, int sign, Complex seed, Complex &root, int max_its = 100);

// Throws ConfigurationError if omega <= 0 or count < 1.
ImpedanceRoots impedance_phase_roots(double omega, int count);

// Eigenvalues xi_j^2 + xi_k^2 - omega^2 of the 2D tensor-product problem.
std::vector<Complex> tensor_eigenvalues_2d(const std::vector<Complex> &roots, double omega);

// min |Im(lambda)| / omega over tensor eigenvalues with |lambda| <= window * omega^2.
double tensor_gap_2d(double omega, double window = 0.5);

}  // namespace helmfci

#endif  // HELMFCI_SPECTRUM_IMPEDANCE_HPP
