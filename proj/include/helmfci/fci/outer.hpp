#ifndef HELMFCI_FCI_OUTER_HPP
#define HELMFCI_FCI_OUTER_HPP

#include <string_view>
#include <vector>
#include "helmfci/fci/setup.hpp"

namespace helmfci
{

enum class OuterStatus
{
  Converged,
  MaxIterations,
  Stagnated  // relative residual improved by less than 1% over the last 3 iterations
};

std::string_view to_string(OuterStatus s);

struct OuterOptions
{
  double tol = 1e-6;
  int max_its = 100;
  int restart = 20;
  bool refinement = false;  // iterative refinement x += FCI(f - A x) instead of FGMRES
  double stagnation_improvement = 0.01;
  int stagnation_window = 3;
};

struct OuterResult
{
  ComplexVector u;
  OuterStatus status = OuterStatus::MaxIterations;
  // residual_history holds the outer residuals with cumulative system matvecs; mvs
  // covers FCI node solves, FCI steps, inner GMRES and the outer iteration itself.
  SolveStats stats;
  std::vector<FciDiagnostics> fci;  // one per outer iteration
  std::uint64_t outer_mvs = 0;      // matvecs made by the outer iteration alone
  std::uint64_t counted_mvs = 0;    // system operator counter over the solve
  double true_residual = 1.0;       // ||f - A u|| / ||f|| with the user operator
};

//
// Solves A u = f with FCI as a variable preconditioner of flexible GMRES (or with
// iterative refinement). For the doubled formulation f is embedded as (0; f) and u
// read from the second block.
//
OuterResult outer_solve(const HelmholtzProblem &problem, ConstVectorView f,
                        const FciConfig &config, const OuterOptions &options = {});

}  // namespace helmfci

#endif  // HELMFCI_FCI_OUTER_HPP
