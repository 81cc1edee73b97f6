#ifndef HELMFCI_FCI_BENCH_HPP
#define HELMFCI_FCI_BENCH_HPP

#include <cstdint>
#include <optional>
#include <vector>
#include "helmfci/operators/grid.hpp"
#include "helmfci/polysolve/scheme.hpp"

namespace helmfci
{

struct BenchShiftedOptions
{
  Grid3 grid{16, 16, 16, 4.0};
  std::vector<double> spectrum_tops{8.0, 16.0, 32.0, 64.0};  // A has spectrum [-1, b]
  std::vector<Complex> shifts{1i, 0.5i, 0.25i, 0.125i};
  double reduction = 1e-2;
  int q_max = 5;
  int max_sweeps = 20000;
  std::uint64_t seed = 7;
};

struct BenchCase
{
  Complex shift;             // z for case one, s for case two
  PolyScheme scheme;
  std::optional<std::uint64_t> mvs;  // empty when the solve failed to reach the reduction
  double reduction = 1.0;
};

struct BenchCell
{
  double top = 0.0;
  Complex z;
  BenchCase one;  // (A - zI) y = f
  BenchCase two;  // (iC - I - sI)(iy; (s + 1) y) = (0; f), z + 1 = (s + 1)^2
  // 1 when case one is cheaper, 2 when case two is, 0 on a tie or when neither converged.
  int winner() const;
};

//
// Matvec counts of the two equivalent shifted problems with A = alpha S - I Hermitian
// (S the spectral Laplacian of `grid`, alpha chosen so the spectrum is exactly [-1, b]).
// Each problem is solved by the polynomial fixed-point iteration with its own tuned
// scheme, starting from zero, until the residual drops by `reduction`.
//
std::vector<BenchCell> bench_shifted(const BenchShiftedOptions &options = {});

}  // namespace helmfci

#endif  // HELMFCI_FCI_BENCH_HPP
