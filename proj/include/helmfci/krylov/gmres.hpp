#ifndef HELMFCI_KRYLOV_GMRES_HPP
#define HELMFCI_KRYLOV_GMRES_HPP

#include <functional>
#include "helmfci/core/operator.hpp"
#include "helmfci/core/solve_stats.hpp"

namespace helmfci
{

// z = M(r). A flexible preconditioner may return a different M on every call.
using Preconditioner = std::function<void(ConstVectorView r, VectorView z)>;

// Wraps a fixed operator as a preconditioner.
Preconditioner as_preconditioner(OperatorPtr m);

struct KrylovConfig
{
  int restart = 40;
  int max_its = 1000;  // total Arnoldi steps across restarts
  double tol = 1e-6;   // on ||f - A x|| / ||f||
  bool flexible = false;
};

struct GmresResult
{
  ComplexVector x;
  SolveStats stats;  // one history entry per Arnoldi step, relative to ||f||
  bool breakdown = false;
};

// Called after every Arnoldi step with the iteration and relative residual; returning
// false ends the solve after forming the current iterate.
using GmresMonitor = std::function<bool(int iteration, double relative_residual)>;

//
// Restarted GMRES with right preconditioning, so residual norms are true residuals.
// Arnoldi uses modified Gram-Schmidt with a second pass when the new vector shrinks
// below 1/sqrt(2) of its length; the least-squares problem is updated with Givens
// rotations. The flexible variant stores the preconditioned vectors Z = [M v_j];
// otherwise M is applied once per cycle to the combination of V.
//
// stats.mvs counts applications of A, including the true residual at each restart
// (and at the start when x0 is nonzero).
//
GmresResult gmres(const LinearOperator &a, ConstVectorView f, ConstVectorView x0,
                  const KrylovConfig &config, const Preconditioner &precond = {},
                  const GmresMonitor &monitor = {});

struct StepResult
{
  Complex d;
  bool degenerate = false;  // Aw = 0
};

// d = <Aw, f> / <Aw, Aw>, the minimizer of ||f - d Aw||; 0 when Aw = 0.
StepResult optimal_step(ConstVectorView aw, ConstVectorView f);

}  // namespace helmfci

#endif  // HELMFCI_KRYLOV_GMRES_HPP
