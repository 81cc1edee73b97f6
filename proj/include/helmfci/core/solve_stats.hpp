#ifndef HELMFCI_CORE_SOLVE_STATS_HPP
#define HELMFCI_CORE_SOLVE_STATS_HPP

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace helmfci
{

struct ResidualSample
{
  int iteration;
  double relative_residual;
  std::uint64_t matvecs;  // cumulative at this iteration
  double seconds;         // cumulative wall time
};

//
// Bookkeeping returned by every iterative solver. `mvs` counts applications of the
// system operator (including those made inside preconditioners such as FCI);
// `precond_applies` counts applications of fixed preconditioner operators.
//
struct SolveStats
{
  int its = 0;
  std::uint64_t mvs = 0;
  std::uint64_t precond_applies = 0;
  double seconds = 0.0;
  bool converged = false;
  std::vector<ResidualSample> residual_history;

  double final_residual() const
  {
    return residual_history.empty() ? 1.0 : residual_history.back().relative_residual;
  }

  void record(int iteration, double relres)
  {
    residual_history.push_back({iteration, relres, mvs, seconds});
  }
};

class Stopwatch
{
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace helmfci

#endif  // HELMFCI_CORE_SOLVE_STATS_HPP
