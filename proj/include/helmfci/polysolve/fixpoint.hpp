#ifndef HELMFCI_POLYSOLVE_FIXPOINT_HPP
#define HELMFCI_POLYSOLVE_FIXPOINT_HPP

#include "helmfci/core/operator.hpp"
#include "helmfci/core/solve_stats.hpp"
#include "helmfci/polysolve/scheme.hpp"

namespace helmfci
{

struct FixpointStop
{
  double tol = 0.0;      // relative residual ||f - (A - zI) y|| / ||f||; 0 disables
  int max_sweeps = 1000;
};

struct FixpointResult
{
  ComplexVector y;
  SolveStats stats;                  // its = sweeps, one history entry per iterate
  std::vector<double> sweep_factors; // residual ratio of consecutive iterates
};

//
// Solves (A - zI) y = f with the exponential-Taylor fixed-point iteration
//
//   k_1 = -i delta ((A - z0) y - f)
//   k_j = (-i delta / j) ((A - z0) k_{j-1} - c_{j-1} f),  c_j = (-i delta (z - z0))^j / j!
//   y  <- (y + k_1 + ... + k_q) / p(z)
//
// Each sweep applies A exactly q times. The residual of each iterate is read off the
// first product of the following sweep, so from a zero initial guess a solve of m
// sweeps, final residual included, costs exactly m q applications.
//
// Throws DivergenceError when the residual grows over 3 consecutive sweeps.
//
FixpointResult fixpoint_solve(const LinearOperator &a, ConstVectorView f, const PolyScheme &scheme,
                              const FixpointStop &stop, ConstVectorView y0 = {});

}  // namespace helmfci

#endif  // HELMFCI_POLYSOLVE_FIXPOINT_HPP
