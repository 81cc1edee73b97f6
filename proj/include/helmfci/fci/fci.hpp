#ifndef HELMFCI_FCI_FCI_HPP
#define HELMFCI_FCI_FCI_HPP

#include <vector>
#include "helmfci/core/operator.hpp"
#include "helmfci/core/solve_stats.hpp"
#include "helmfci/krylov/gmres.hpp"
#include "helmfci/polysolve/scheme.hpp"
#include "helmfci/spectrum/contour.hpp"

namespace helmfci
{

enum class Formulation
{
  Single,  // A u = f
  Doubled  // (iC - I)(iu; u) = (0; f)
};

std::string_view to_string(Formulation f);

struct FciConfig
{
  Contour contour;
  std::vector<PolyScheme> schemes;  // one per node, tuned for that node's shift
  double node_reduction = 0.2;      // stop each node solve when its residual drops by 5
  int node_max_sweeps = 500;
  int inner_its = 10;               // GMRES steps on the corrected problem
  Preconditioner inner_precond;     // optional, right preconditioner of the inner GMRES
  bool warm_start = false;          // reuse node solutions from the previous call
  int threads = 1;                  // node solves run concurrently when > 1
};

// Tunes one scheme per contour node on `box`. Throws ConfigurationError if a node
// has no convergent scheme.
std::vector<PolyScheme> tune_node_schemes(const SpectralBox &box, const Contour &contour,
                                          const TuneOptions &options = {});

struct NodeDiagnostics
{
  Complex z;
  int q = 0;
  int sweeps = 0;
  std::uint64_t mvs = 0;
  double reduction = 1.0;      // final node residual relative to ||f||
  double mean_factor = 1.0;    // geometric mean per-sweep residual factor
  bool converged = false;
};

struct FciDiagnostics
{
  std::vector<NodeDiagnostics> nodes;
  Complex d;
  bool degenerate_step = false;
  int inner_its = 0;
  double inner_residual = 1.0;  // ||f - A x|| / ||f|| after the inner correction
  std::uint64_t node_mvs = 0;
  std::uint64_t inner_mvs = 0;
  std::uint64_t step_mvs = 0;
};

struct FciResult
{
  ComplexVector x;
  SolveStats stats;
  FciDiagnostics diagnostics;
};

//
// One application of the contour-integration approximation of A^{-1} f:
//
//   y_j = (A - z_j I)^{-1} f        polynomial fixed-point solves to node_reduction
//   w   = sum_j sigma_j / z_j y_j
//   d   = argmin ||f - d A w||
//   v   = argmin ||A v - (f - d A w)|| by inner_its GMRES steps
//   x   = v + d w
//
// stats.mvs = node products + 1 (for A w) + inner GMRES products.
//
class FciSolver
{
public:
  FciSolver(OperatorPtr a, FciConfig config);

  const LinearOperator &op() const noexcept { return *a_; }
  const FciConfig &config() const noexcept { return config_; }

  FciResult apply(ConstVectorView f);

private:
  OperatorPtr a_;
  FciConfig config_;
  std::vector<ComplexVector> previous_;
};

// Stateless form.
FciResult fci_apply(OperatorPtr a, ConstVectorView f, const FciConfig &config);

}  // namespace helmfci

#endif  // HELMFCI_FCI_FCI_HPP
